// codetoon: storygen / comicgen / serve front end over the shared pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"

#include "codetoon/pipeline.hpp"
#include "codetoon/service.hpp"

namespace fs = std::filesystem;
using namespace codetoon;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw InvalidInput("cannot write " + path.string());
}

int storygen(const fs::path& input, const std::string& output) {
    const std::string text = to_json(generate_story(read_file(input))).dump(2) + "\n";
    if (output.empty() || output == "-")
        std::cout << text;
    else
        write_file(output, text);
    return 0;
}

struct ComicArgs {
    fs::path input;
    std::string story;
    fs::path out;
    std::string doc_out;
    int iterations = 3;
    std::string unexecuted = "dimmed";
    std::string data;
    std::string sprites;
};

int comicgen(const ComicArgs& a) {
    ComicRequest request;
    request.code = read_file(a.input);
    if (!a.story.empty()) {
        try {
            request.fills = fills_from_json(nlohmann::json::parse(read_file(a.story)));
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidInput(a.story + ": " + e.what());
        }
    }
    request.options.iterations_shown = a.iterations;
    request.options.show_unexecuted = unexecuted_from_string(a.unexecuted);
    request.limits = limits_for(request.options);

    const fs::path data_dir = a.data.empty() ? default_data_dir() : fs::path(a.data);
    const fs::path sprites_path = a.sprites.empty() ? data_dir / "sprites.ndjson" : fs::path(a.sprites);
    const SpriteSet sprites = fs::exists(sprites_path) ? load_sprites(sprites_path) : SpriteSet::builtins();

    const ComicResult r = generate_comic(request, sprites);
    write_file(a.out, r.svg);
    fs::path doc_path = a.doc_out.empty() ? fs::path(a.out).replace_extension(".json") : fs::path(a.doc_out);
    write_file(doc_path, to_json(r.doc).dump(2) + "\n");
    return 0;
}

struct ServeArgs {
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string data;
    std::string sprites;
    std::string lexicon;
    std::string projects = "projects";
    std::string static_dir;
};

int serve(const ServeArgs& a) {
    const fs::path data_dir = a.data.empty() ? default_data_dir() : fs::path(a.data);
    Service service(load_resources(data_dir, a.sprites, a.lexicon), a.projects);
    httplib::Server server;
    service.mount(server);
    if (!a.static_dir.empty() && !server.set_mount_point("/", a.static_dir))
        throw InvalidInput("static directory not found: " + a.static_dir);
    std::cerr << "listening on http://" << a.host << ":" << a.port << "\n";
    if (!server.listen(a.host, a.port)) throw InvalidInput("cannot listen on port " + std::to_string(a.port));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"codetoon - turn small programs into stories and comics"};
    app.require_subcommand(1);

    fs::path story_in;
    std::string story_out;
    auto* sg = app.add_subcommand("storygen", "write the story template for a program");
    sg->add_option("input", story_in, "source file")->required();
    sg->add_option("-o,--output", story_out, "template JSON path (default stdout)");

    ComicArgs comic;
    auto* cg = app.add_subcommand("comicgen", "render a program and its story fills to SVG");
    cg->add_option("input", comic.input, "source file")->required();
    cg->add_option("--story", comic.story, "story template JSON or {slot_id: text} fills");
    cg->add_option("--out", comic.out, "SVG output path")->required();
    cg->add_option("--doc", comic.doc_out, "comic document JSON path (default: <out>.json)");
    cg->add_option("--iterations", comic.iterations, "loop iterations to draw")->check(CLI::Range(1, 100));
    cg->add_option("--unexecuted", comic.unexecuted, "rows for code that never ran")
        ->check(CLI::IsMember({"full", "dimmed", "hidden"}));
    cg->add_option("--data", comic.data, "resource directory");
    cg->add_option("--sprites", comic.sprites, "sprite NDJSON file");

    ServeArgs srv;
    auto* sv = app.add_subcommand("serve", "run the HTTP API");
    sv->add_option("--port", srv.port)->check(CLI::Range(0, 65535));
    sv->add_option("--host", srv.host);
    sv->add_option("--data", srv.data, "resource directory");
    sv->add_option("--sprites", srv.sprites, "sprite NDJSON file");
    sv->add_option("--lexicon", srv.lexicon, "lexicon JSON file");
    sv->add_option("--projects", srv.projects, "project store directory");
    sv->add_option("--static", srv.static_dir, "directory served at /");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sg) return storygen(story_in, story_out);
        if (*cg) return comicgen(comic);
        if (*sv) return serve(srv);
    } catch (const Error& e) {
        std::cerr << "codetoon: " << e.code() << ": " << e.detail() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "codetoon: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
