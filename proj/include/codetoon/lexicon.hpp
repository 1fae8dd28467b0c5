#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace codetoon {

inline constexpr std::size_t kObjectCategoryCount = 345;

/// Fill suggestions for the story dropdowns. Read-only after loading.
struct Lexicon {
    std::vector<std::string> object_categories;  // sorted, lowercase, unique
    std::map<std::string, std::vector<std::string>> verb_sets;      // keyed by operator: "=", "==", "<", ...
    std::map<std::string, std::vector<std::string>> keyword_verbs;  // keyed by builtin/keyword: "print", ...
};

/// Throws LexiconFormatError on schema violations or a category count other
/// than 345.
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon lexicon_from_json(const nlohmann::json& j);

struct SuggestQuery {
    std::string kind;  // slot kind name, e.g. "object" or "verb"
    /// Operator for verb slots, builtin for action slots. Defaults to "=" and
    /// "print" respectively.
    std::optional<std::string> key;
    std::string prefix;
    int limit = 10;
};

/// Object suggestions are categories matching the prefix case-insensitively,
/// alphabetical. Verb and action suggestions keep the lexicon's order. Other
/// known slot kinds get no dropdown and return an empty list. Throws
/// UnknownKind for an unrecognized kind and InvalidInput for limit < 1.
std::vector<std::string> suggest(const Lexicon& lex, const SuggestQuery& query);

}  // namespace codetoon
