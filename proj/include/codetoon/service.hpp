#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "codetoon/pipeline.hpp"

namespace httplib {
class Server;
}

namespace codetoon {

struct Project {
    std::string code;
    std::map<std::string, std::string> fills;
    ComposeOptions options;
    int version = 1;
};

nlohmann::json to_json(const Project& p);
/// Checks the version and that every fill id exists in the code's template.
Project project_from_json(const nlohmann::json& j);

class ProjectNotFound : public Error {
public:
    explicit ProjectNotFound(const std::string& id) : Error("NotFound", 0, "no project with id " + id) {}
};

/// One JSON file per project under `root`. Writes to the same id are serialized.
class ProjectStore {
public:
    explicit ProjectStore(std::filesystem::path root);

    std::string create(const Project& p);
    void save(const std::string& id, const Project& p);
    Project load(const std::string& id) const;

    static bool valid_id(const std::string& id);

private:
    std::mutex& lock_for(const std::string& id);
    std::filesystem::path path_for(const std::string& id) const;

    std::filesystem::path root_;
    std::mutex table_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// Routes for the authoring UI. Resources are read-only after construction,
/// so handlers run concurrently without locking anything but the store.
class Service {
public:
    Service(Resources resources, std::filesystem::path project_dir);

    void mount(httplib::Server& server);

    const Resources& resources() const { return resources_; }

private:
    Resources resources_;
    ProjectStore store_;
};

}  // namespace codetoon
