#include "codetoon/pipeline.hpp"

#include <cstdlib>
#include <fstream>

#ifndef CODETOON_DEFAULT_DATA_DIR
#define CODETOON_DEFAULT_DATA_DIR "data"
#endif

namespace codetoon {

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("CODETOON_DATA"); env && *env) return env;
    return CODETOON_DEFAULT_DATA_DIR;
}

Resources load_resources(const std::filesystem::path& data_dir, const std::filesystem::path& sprites_path,
                         const std::filesystem::path& lexicon_path) {
    Resources r;
    r.sprites = load_sprites(sprites_path.empty() ? data_dir / "sprites.ndjson" : sprites_path);
    r.lexicon = load_lexicon(lexicon_path.empty() ? data_dir / "lexicon.json" : lexicon_path);
    std::ifstream in(data_dir / "examples.json", std::ios::binary);
    if (in) {
        try {
            r.examples = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidInput(std::string("examples.json: ") + e.what());
        }
    }
    return r;
}

StoryTemplate generate_story(std::string_view code) { return build_story_template(parse(code)); }

TraceLimits limits_for(const ComposeOptions& options) {
    TraceLimits limits;
    limits.max_iterations_per_loop = std::max(limits.max_iterations_per_loop, options.iterations_shown);
    return limits;
}

ComicResult generate_comic(const ComicRequest& request, const SpriteSet& sprites) {
    ComicResult r;
    r.ast = parse(request.code);
    r.story = merge_fills(build_story_template(r.ast), request.fills);
    r.trace = trace(r.ast, request.limits);
    r.doc = compose(r.ast, r.story, r.trace, request.options);
    r.svg = render_svg(r.doc, sprites, request.layout);
    return r;
}

std::map<std::string, std::string> fills_from_json(const nlohmann::json& j) {
    if (j.is_null()) return {};
    if (j.is_object() && j.contains("lines")) return fills_of(story_template_from_json(j));
    if (!j.is_object()) throw InvalidInput("fills must be an object of slot id to text");
    std::map<std::string, std::string> out;
    for (const auto& [id, text] : j.items()) {
        if (!text.is_string()) throw InvalidInput("fill for '" + id + "' must be a string");
        out[id] = text.get<std::string>();
    }
    return out;
}

ComposeOptions compose_options_from_json(const nlohmann::json& j) {
    ComposeOptions o;
    if (j.is_null()) return o;
    if (!j.is_object()) throw InvalidInput("options must be an object");
    try {
        if (j.contains("unexecuted")) o.show_unexecuted = unexecuted_from_string(j.at("unexecuted").get<std::string>());
        if (j.contains("iterations")) o.iterations_shown = j.at("iterations").get<int>();
        if (j.contains("ellipsis")) o.ellipsis_on_truncation = j.at("ellipsis").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad options: ") + e.what());
    }
    if (o.iterations_shown < 1 || o.iterations_shown > 100) throw InvalidInput("iterations must be between 1 and 100");
    return o;
}

nlohmann::json to_json(const ComposeOptions& o) {
    return {{"unexecuted", to_string(o.show_unexecuted)},
            {"iterations", o.iterations_shown},
            {"ellipsis", o.ellipsis_on_truncation}};
}

nlohmann::json error_json(const Error& e) {
    nlohmann::json j{{"error", e.code()},
                     {"line", e.line() > 0 ? nlohmann::json(e.line()) : nlohmann::json(nullptr)},
                     {"detail", e.detail()}};
    if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) j["col"] = s->col();
    return j;
}

}  // namespace codetoon
