#pragma once

// End-to-end orchestration shared by the CLI and the HTTP service:
// parse -> story template -> merge fills -> trace -> compose -> render.

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

#include "codetoon/comic.hpp"
#include "codetoon/errors.hpp"
#include "codetoon/lexicon.hpp"
#include "codetoon/parser.hpp"
#include "codetoon/render.hpp"
#include "codetoon/sprites.hpp"
#include "codetoon/story.hpp"
#include "codetoon/tracer.hpp"

namespace codetoon {

/// Directory holding lexicon.json, sprites.ndjson and examples.json. The
/// CODETOON_DATA environment variable overrides the built-in location.
std::filesystem::path default_data_dir();

struct Resources {
    SpriteSet sprites;
    Lexicon lexicon;
    nlohmann::json examples = nlohmann::json::array();
};

/// Missing paths fall back to files in `data_dir`.
Resources load_resources(const std::filesystem::path& data_dir, const std::filesystem::path& sprites_path = {},
                         const std::filesystem::path& lexicon_path = {});

struct ComicRequest {
    std::string code;
    std::map<std::string, std::string> fills;
    ComposeOptions options;
    TraceLimits limits;
    Layout layout;
};

struct ComicResult {
    CodeAst ast;
    StoryTemplate story;
    ExecutionTrace trace;
    ComicDoc doc;
    std::string svg;
};

StoryTemplate generate_story(std::string_view code);

/// Stale fill ids raise StructureChanged; parse problems raise SyntaxError or
/// UnsupportedConstruct.
ComicResult generate_comic(const ComicRequest& request, const SpriteSet& sprites);

/// Fills from either a {slot_id: text} object or a story template JSON.
std::map<std::string, std::string> fills_from_json(const nlohmann::json& j);

/// {"unexecuted": "dimmed", "iterations": 3, "ellipsis": true}; all optional.
ComposeOptions compose_options_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ComposeOptions& options);

/// Iteration cap used when a comic should show `iterations_shown` iterations.
TraceLimits limits_for(const ComposeOptions& options);

/// {"error": code, "line": n|null, "detail": text}, plus "col" for syntax errors.
nlohmann::json error_json(const Error& e);

}  // namespace codetoon
