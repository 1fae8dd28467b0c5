#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <sys/wait.h>
#include <unistd.h>

#include "codetoon/pipeline.hpp"
#include "support.hpp"

using namespace codetoon;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kPrograms = std::string(CODETOON_DATA_DIR) + "/programs/";

struct Run {
    int status;
    std::string out;  // stdout and stderr
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(CODETOON_CLI) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int rc = ::pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / ("codetoon-cli-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("storygen writes a template") {
    const auto out = scratch() / "apple.story.json";
    const Run r = cli("storygen " + kPrograms + "apple.py -o " + out.string());
    CHECK(r.status == 0);
    const json t = json::parse(testsupport::slurp(out.string()));
    CHECK(t.at("lines").size() == 3);
    CHECK(t.at("version") == 1);
}

TEST_CASE("storygen on an empty file") {
    const Run r = cli("storygen " + kPrograms + "empty.py");
    CHECK(r.status == 0);
    CHECK(json::parse(r.out).at("lines").empty());
}

TEST_CASE("storygen rejects classes") {
    const Run r = cli("storygen " + kPrograms + "class_def.py");
    CHECK(r.status == 1);
    CHECK(r.out.find("unsupported construct: class at line 1") != std::string::npos);
}

TEST_CASE("comicgen with fills matches the library output") {
    const auto dir = scratch();
    const Run r = cli("comicgen " + kPrograms + "apple.py --story " + kPrograms + "apple.fills.json --out " +
                      (dir / "apple.svg").string());
    REQUIRE(r.status == 0);
    const std::string svg = testsupport::slurp((dir / "apple.svg").string());
    const json doc = json::parse(testsupport::slurp((dir / "apple.json").string()));
    CHECK(doc.at("rows").size() == 3);
    CHECK(svg.find("apple tastes good") != std::string::npos);

    ComicRequest req;
    req.code = testsupport::slurp(kPrograms + "apple.py");
    req.fills = fills_from_json(json::parse(testsupport::slurp(kPrograms + "apple.fills.json")));
    CHECK(generate_comic(req, load_sprites(std::string(CODETOON_DATA_DIR) + "/sprites.ndjson")).svg == svg);
}

TEST_CASE("comicgen accepts a filled template as the story") {
    const auto dir = scratch();
    REQUIRE(cli("storygen " + kPrograms + "apple.py -o " + (dir / "t.json").string()).status == 0);
    json t = json::parse(testsupport::slurp((dir / "t.json").string()));
    t["lines"][0]["segments"][0]["slot"]["fill"] = "apple";
    std::ofstream(dir / "t.json") << t.dump();
    REQUIRE(cli("comicgen " + kPrograms + "apple.py --story " + (dir / "t.json").string() + " --out " +
                (dir / "t.svg").string())
                .status == 0);
    CHECK(testsupport::slurp((dir / "t.svg").string()).find("data-category=\"apple\"") != std::string::npos);
}

TEST_CASE("comicgen loop with two iterations") {
    const auto dir = scratch();
    const Run r = cli("comicgen " + kPrograms + "loop.py --iterations 2 --out " + (dir / "loop.svg").string() +
                      " --doc " + (dir / "loop.doc.json").string());
    REQUIRE(r.status == 0);
    const json doc = json::parse(testsupport::slurp((dir / "loop.doc.json").string()));
    CHECK(doc.at("rows").size() == 8);
    const std::string svg = testsupport::slurp((dir / "loop.svg").string());
    int rows = 0;
    for (auto pos = svg.find("<g class=\"row\""); pos != std::string::npos; pos = svg.find("<g class=\"row\"", pos + 1)) ++rows;
    CHECK(rows == 8);
}

TEST_CASE("comicgen with stale fills") {
    const auto dir = scratch();
    std::ofstream(dir / "stale.json") << R"({"L7.object": "apple"})";
    const Run r = cli("comicgen " + kPrograms + "apple.py --story " + (dir / "stale.json").string() + " --out " +
                      (dir / "x.svg").string());
    CHECK(r.status == 1);
    CHECK(r.out.find("StructureChanged") != std::string::npos);
}

TEST_CASE("comicgen argument errors") {
    CHECK(cli("comicgen " + kPrograms + "apple.py --out /tmp/x.svg --unexecuted sometimes").status != 0);
    CHECK(cli("comicgen /nonexistent.py --out /tmp/x.svg").status == 1);
    CHECK(cli("").status != 0);
}

TEST_CASE("unexecuted modes change the output") {
    const auto dir = scratch();
    const std::string src = (dir / "branch.py").string();
    std::ofstream(src) << "x = 1\nif x == 2:\n    print(x)\n";
    REQUIRE(cli("comicgen " + src + " --unexecuted hidden --out " + (dir / "h.svg").string()).status == 0);
    REQUIRE(cli("comicgen " + src + " --unexecuted dimmed --out " + (dir / "d.svg").string()).status == 0);
    CHECK(json::parse(testsupport::slurp((dir / "h.json").string())).at("rows").size() == 2);
    CHECK(json::parse(testsupport::slurp((dir / "d.json").string())).at("rows").size() == 3);
}
