#include "codetoon/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "httplib.h"

namespace codetoon {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const Project& p) {
    return {{"version", p.version}, {"code", p.code}, {"fills", p.fills}, {"options", to_json(p.options)}};
}

Project project_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("project must be an object");
    Project p;
    p.version = j.value("version", 1);
    if (p.version != 1) throw InvalidInput(fmt::format("unsupported project version {}", p.version));
    const auto code = j.find("code");
    if (code == j.end() || !code->is_string()) throw InvalidInput("project needs a string 'code'");
    p.code = code->get<std::string>();
    p.fills = fills_from_json(j.value("fills", json(nullptr)));
    p.options = compose_options_from_json(j.value("options", json(nullptr)));
    // Rejects stale ids the same way the comic endpoint would.
    merge_fills(generate_story(p.code), p.fills);
    return p;
}

ProjectStore::ProjectStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

bool ProjectStore::valid_id(const std::string& id) {
    return id.size() == 16 &&
           std::all_of(id.begin(), id.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

fs::path ProjectStore::path_for(const std::string& id) const { return root_ / (id + ".json"); }

std::mutex& ProjectStore::lock_for(const std::string& id) {
    std::lock_guard guard(table_mutex_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

std::string ProjectStore::create(const Project& p) {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    for (;;) {
        std::string id = fmt::format("{:016x}", rng());
        std::lock_guard guard(lock_for(id));
        if (fs::exists(path_for(id))) continue;
        std::ofstream(path_for(id), std::ios::binary) << to_json(p).dump(2) << '\n';
        return id;
    }
}

void ProjectStore::save(const std::string& id, const Project& p) {
    if (!valid_id(id)) throw ProjectNotFound(id);
    std::lock_guard guard(lock_for(id));
    const fs::path target = path_for(id);
    const fs::path tmp = root_ / (id + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << to_json(p).dump(2) << '\n';
        if (!out) throw InvalidInput("cannot write project " + id);
    }
    fs::rename(tmp, target);
}

Project ProjectStore::load(const std::string& id) const {
    if (!valid_id(id)) throw ProjectNotFound(id);
    std::ifstream in(path_for(id), std::ios::binary);
    if (!in) throw ProjectNotFound(id);
    try {
        return project_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("corrupt project file: ") + e.what());
    }
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    try {
        json j = json::parse(req.body);
        if (!j.is_object()) throw InvalidInput("request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

std::string string_field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end() || !it->is_string()) throw InvalidInput(fmt::format("'{}' must be a string", name));
    return it->get<std::string>();
}

// Every handler goes through here so failures always produce {error, line, detail}.
template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const ProjectNotFound& e) {
            send_json(res, error_json(e), 404);
        } catch (const Error& e) {
            send_json(res, error_json(e), 400);
        } catch (const json::exception& e) {
            send_json(res, {{"error", "InvalidInput"}, {"line", nullptr}, {"detail", e.what()}}, 400);
        } catch (const std::exception& e) {
            send_json(res, {{"error", "Internal"}, {"line", nullptr}, {"detail", e.what()}}, 500);
        }
    };
}

}  // namespace

Service::Service(Resources resources, fs::path project_dir)
    : resources_(std::move(resources)), store_(std::move(project_dir)) {}

void Service::mount(httplib::Server& server) {
    server.set_payload_max_length(1 << 20);

    server.Post("/api/story-template", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        send_json(res, to_json(generate_story(string_field(body, "code"))));
    }));

    server.Post("/api/comic", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        ComicRequest request;
        request.code = string_field(body, "code");
        request.fills = fills_from_json(body.value("fills", json(nullptr)));
        request.options = compose_options_from_json(body.value("options", json(nullptr)));
        request.limits = limits_for(request.options);
        const ComicResult r = generate_comic(request, resources_.sprites);
        send_json(res, {{"comic_doc", to_json(r.doc)}, {"svg", r.svg}});
    }));

    server.Get("/api/suggest", guarded([this](const httplib::Request& req, httplib::Response& res) {
        SuggestQuery q;
        q.kind = req.get_param_value("kind");
        q.prefix = req.get_param_value("prefix");
        if (req.has_param("key")) q.key = req.get_param_value("key");
        if (req.has_param("limit")) {
            const std::string raw = req.get_param_value("limit");
            try {
                std::size_t used = 0;
                q.limit = std::stoi(raw, &used);
                if (used != raw.size()) throw std::invalid_argument(raw);
            } catch (const std::logic_error&) {
                throw InvalidInput("limit must be an integer");
            }
        }
        // Computed first: a throw mid-initializer-list leaks on older GCCs.
        const auto found = suggest(resources_.lexicon, q);
        send_json(res, {{"kind", q.kind}, {"suggestions", found}});
    }));

    server.Get(R"(/api/sprites/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, to_json(get(resources_.sprites, req.matches[1].str())));
    }));

    server.Post("/api/project", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const Project p = project_from_json(parse_body(req));
        const std::string id = store_.create(p);
        send_json(res, {{"id", id}}, 201);
    }));

    server.Put(R"(/api/project/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1].str();
        store_.load(id);  // 404 before overwriting anything
        store_.save(id, project_from_json(parse_body(req)));
        send_json(res, {{"id", id}});
    }));

    server.Get(R"(/api/project/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1].str();
        json body = to_json(store_.load(id));
        body["id"] = id;
        send_json(res, body);
    }));

    server.Get("/api/examples", guarded([this](const httplib::Request&, httplib::Response& res) {
        send_json(res, resources_.examples);
    }));

    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, {{"ok", true}}); });
}

}  // namespace codetoon
