#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "codetoon/ast.hpp"

namespace codetoon {

enum class SlotKind { Object, Verb, Value, Action, ConditionPhrase, FunctionName };

std::string_view to_string(SlotKind kind);
/// Throws UnknownKind.
SlotKind slot_kind_from_string(std::string_view name);

struct FixedText {
    std::string text;
    friend bool operator==(const FixedText&, const FixedText&) = default;
};

struct Slot {
    std::string id;  // "L<line>.<role>", stable for a given program
    SlotKind kind = SlotKind::Object;
    std::string default_fill;         // taken from the code token
    std::optional<std::string> fill;  // user text
    /// Variable an object slot stands for. Unfilled object slots show the most
    /// recent preceding fill for the same variable.
    std::optional<std::string> ref;
    /// Rendered inside double quotes (spoken text).
    bool quoted = false;
    friend bool operator==(const Slot&, const Slot&) = default;
};

using Segment = std::variant<FixedText, Slot>;

struct StoryLine {
    int code_line = 0;
    int depth = 0;
    std::vector<Segment> segments;
    friend bool operator==(const StoryLine&, const StoryLine&) = default;
};

struct StoryTemplate {
    std::vector<StoryLine> lines;
    std::string source_hash;
    friend bool operator==(const StoryTemplate&, const StoryTemplate&) = default;
};

/// One story line per statement, in source order, with slots for the
/// parameterizable code tokens.
StoryTemplate build_story_template(const CodeAst& ast);

/// Returns a copy with the slot's fill set to the trimmed text.
/// Throws UnknownSlot or EmptyFill.
StoryTemplate fill_slot(const StoryTemplate& t, std::string_view slot_id, std::string_view text);

/// Applies every (slot id, text) pair. A stale id raises StructureChanged.
StoryTemplate merge_fills(const StoryTemplate& t, const std::map<std::string, std::string>& fills);

/// Current fills keyed by slot id.
std::map<std::string, std::string> fills_of(const StoryTemplate& t);

const Slot* find_slot(const StoryTemplate& t, std::string_view slot_id);

/// User-provided text for a slot: its own fill, or for an object slot the most
/// recent preceding fill of the same variable.
std::optional<std::string> user_text(const StoryTemplate& t, const Slot& slot);

/// Text a slot shows: user text, else the default.
std::string effective_text(const StoryTemplate& t, const Slot& slot);

/// Prose for one line, without indentation. `overrides` replaces the shown
/// text of the listed slot ids.
std::string render_line(const StoryTemplate& t, const StoryLine& line,
                        const std::map<std::string, std::string>& overrides = {});

/// One prose line per story line, indented two spaces per depth level.
std::vector<std::string> render_story_text(const StoryTemplate& t);

/// True when both templates have the same lines, fixed text and slot ids and
/// kinds; fills are ignored.
bool same_skeleton(const StoryTemplate& a, const StoryTemplate& b);

nlohmann::json to_json(const StoryTemplate& t);
/// Throws InvalidInput on schema violations.
StoryTemplate story_template_from_json(const nlohmann::json& j);

}  // namespace codetoon
