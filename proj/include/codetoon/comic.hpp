#pragma once

// Comic description: rows of phase-tagged panels derived from the program,
// its story template and an execution trace.
//
// Each statement gets one row built from a fixed per-construct panel template
// (see `phase_template`), prefixed by one gray indent panel per indent level.
// Loops break the one-row-per-line rule: a loop contributes a header row and,
// for every traced iteration shown, an iteration-marker row followed by the
// body rows.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "codetoon/ast.hpp"
#include "codetoon/story.hpp"
#include "codetoon/tracer.hpp"

namespace codetoon {

enum class Phase { Establisher, Initial, Prolongation, Peak, Release };
enum class PanelKind { Intro, Statement, Question, Answer, Output, IterationMarker, Indent, Ellipsis };
enum class Unexecuted { Full, Dimmed, Hidden };

std::string_view to_string(Phase p);
std::string_view to_string(PanelKind k);
std::string_view to_string(Unexecuted u);
/// Throws InvalidInput.
Unexecuted unexecuted_from_string(std::string_view s);

struct TextElement {
    std::string content;
    friend bool operator==(const TextElement&, const TextElement&) = default;
};
struct SpeechBubble {
    std::string content;
    std::string speaker;  // sprite category or "stick-figure"
    friend bool operator==(const SpeechBubble&, const SpeechBubble&) = default;
};
struct SpriteElement {
    std::string category;
    std::optional<std::string> label;
    friend bool operator==(const SpriteElement&, const SpriteElement&) = default;
};
struct Character {
    std::string figure = "stick-figure";
    friend bool operator==(const Character&, const Character&) = default;
};

using Element = std::variant<TextElement, SpeechBubble, SpriteElement, Character>;

struct Panel {
    std::optional<Phase> phase;  // none for indent panels
    PanelKind kind = PanelKind::Statement;
    std::vector<Element> elements;
    friend bool operator==(const Panel&, const Panel&) = default;
};

struct Row {
    int code_line = 0;
    int depth = 0;
    IterPath iteration;  // empty outside loops
    bool executed = true;
    std::vector<Panel> panels;
    friend bool operator==(const Row&, const Row&) = default;
};

struct ComicDoc {
    std::vector<Row> rows;
    std::string source_hash;
    Unexecuted show_unexecuted = Unexecuted::Dimmed;
    friend bool operator==(const ComicDoc&, const ComicDoc&) = default;
};

struct ComposeOptions {
    Unexecuted show_unexecuted = Unexecuted::Dimmed;
    int iterations_shown = 3;
    bool ellipsis_on_truncation = true;
};

/// Non-indent (phase, kind) sequence for each row shape.
enum class RowShape { Assign, If, WhileHeader, ForHeader, IterationMarker, FuncDef, Print, Call, Return, Ellipsis };
const std::vector<std::pair<Phase, PanelKind>>& phase_template(RowShape shape);

/// Throws MismatchedInputs when the template or trace was not derived from
/// `ast`, InvalidInput for bad options.
ComicDoc compose(const CodeAst& ast, const StoryTemplate& story, const ExecutionTrace& trace,
                 const ComposeOptions& options = {});

/// Recomposes after fill changes. The result has the same rows, panels,
/// phases and element kinds as `doc`; only text and sprite content differ.
/// Throws StructureChanged if the program or the template skeleton changed.
ComicDoc update(const ComicDoc& doc, const CodeAst& ast, const StoryTemplate& new_story,
                const ExecutionTrace& trace, const ComposeOptions& options = {});

/// Rows, panel kinds and phases, and element kinds all agree.
bool same_structure(const ComicDoc& a, const ComicDoc& b);

/// "does apple taste good?" from ("apple", "tastes", "good").
std::string question_form(std::string_view object, std::string_view verb, std::string_view value);

nlohmann::json to_json(const ComicDoc& doc);

}  // namespace codetoon
