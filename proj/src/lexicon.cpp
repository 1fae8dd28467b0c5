#include "codetoon/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "codetoon/errors.hpp"
#include "codetoon/story.hpp"

namespace codetoon {

namespace {

const std::set<std::string, std::less<>> kOperatorKeys = {"=", "==", "!=", "<", ">", "<=", ">="};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_trimmed_nonempty(const std::string& s) {
    return !s.empty() && s.front() != ' ' && s.back() != ' ' && s.find_first_of("\t\r\n") == std::string::npos;
}

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw LexiconFormatError(where + " must be an array");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& item : j) {
        if (!item.is_string()) throw LexiconFormatError(where + " must contain only strings");
        auto s = item.get<std::string>();
        if (!is_trimmed_nonempty(s)) throw LexiconFormatError(where + " contains an empty or untrimmed entry");
        if (!seen.insert(s).second) throw LexiconFormatError(where + " has duplicate entry '" + s + "'");
        out.push_back(std::move(s));
    }
    if (out.empty()) throw LexiconFormatError(where + " is empty");
    return out;
}

bool starts_with_ci(const std::string& text, const std::string& prefix_lower) {
    return lower(text).rfind(prefix_lower, 0) == 0;
}

}  // namespace

Lexicon lexicon_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw LexiconFormatError("top level must be an object");
    if (!j.contains("categories")) throw LexiconFormatError("missing 'categories'");
    if (!j.contains("verbs") || !j.at("verbs").is_object()) throw LexiconFormatError("missing 'verbs' object");

    Lexicon lex;
    lex.object_categories = string_list(j.at("categories"), "categories");
    for (const auto& c : lex.object_categories) {
        if (c != lower(c)) throw LexiconFormatError("category '" + c + "' is not lowercase");
    }
    if (lex.object_categories.size() != kObjectCategoryCount) {
        throw LexiconFormatError("expected " + std::to_string(kObjectCategoryCount) + " categories, found " +
                                 std::to_string(lex.object_categories.size()));
    }
    std::sort(lex.object_categories.begin(), lex.object_categories.end());

    for (const auto& [key, list] : j.at("verbs").items()) {
        auto verbs = string_list(list, "verbs['" + key + "']");
        if (kOperatorKeys.count(key)) {
            lex.verb_sets[key] = std::move(verbs);
        } else {
            lex.keyword_verbs[key] = std::move(verbs);
        }
    }
    if (!lex.verb_sets.count("=")) throw LexiconFormatError("verbs must define the '=' list");
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LexiconFormatError("cannot read " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw LexiconFormatError(std::string("invalid JSON: ") + e.what());
    }
    return lexicon_from_json(j);
}

std::vector<std::string> suggest(const Lexicon& lex, const SuggestQuery& query) {
    SlotKind kind = slot_kind_from_string(query.kind);
    if (query.limit < 1) throw InvalidInput("limit must be at least 1");
    const std::string prefix = lower(query.prefix);
    const auto limit = static_cast<std::size_t>(query.limit);

    std::vector<std::string> out;
    auto take = [&](const std::vector<std::string>& from) {
        for (const auto& s : from) {
            if (out.size() >= limit) break;
            if (starts_with_ci(s, prefix)) out.push_back(s);
        }
    };
    switch (kind) {
        case SlotKind::Object: take(lex.object_categories); break;
        case SlotKind::Verb: {
            auto it = lex.verb_sets.find(query.key.value_or("="));
            if (it != lex.verb_sets.end()) take(it->second);
            break;
        }
        case SlotKind::Action: {
            auto it = lex.keyword_verbs.find(query.key.value_or("print"));
            if (it != lex.keyword_verbs.end()) take(it->second);
            break;
        }
        default: break;
    }
    return out;
}

}  // namespace codetoon
