#include "codetoon/comic.hpp"

#include <map>
#include <set>

#include "codetoon/errors.hpp"
#include "codetoon/parser.hpp"

namespace codetoon {

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Establisher: return "Establisher";
        case Phase::Initial: return "Initial";
        case Phase::Prolongation: return "Prolongation";
        case Phase::Peak: return "Peak";
        case Phase::Release: return "Release";
    }
    return "?";
}

std::string_view to_string(PanelKind k) {
    switch (k) {
        case PanelKind::Intro: return "intro";
        case PanelKind::Statement: return "statement";
        case PanelKind::Question: return "question";
        case PanelKind::Answer: return "answer";
        case PanelKind::Output: return "output";
        case PanelKind::IterationMarker: return "iteration-marker";
        case PanelKind::Indent: return "indent";
        case PanelKind::Ellipsis: return "ellipsis";
    }
    return "?";
}

std::string_view to_string(Unexecuted u) {
    switch (u) {
        case Unexecuted::Full: return "full";
        case Unexecuted::Dimmed: return "dimmed";
        case Unexecuted::Hidden: return "hidden";
    }
    return "?";
}

Unexecuted unexecuted_from_string(std::string_view s) {
    if (s == "full") return Unexecuted::Full;
    if (s == "dimmed") return Unexecuted::Dimmed;
    if (s == "hidden") return Unexecuted::Hidden;
    throw InvalidInput("unexecuted policy must be full, dimmed or hidden, got '" + std::string(s) + "'");
}

const std::vector<std::pair<Phase, PanelKind>>& phase_template(RowShape shape) {
    using P = Phase;
    using K = PanelKind;
    static const std::map<RowShape, std::vector<std::pair<Phase, PanelKind>>> table = {
        {RowShape::Assign, {{P::Establisher, K::Intro}, {P::Initial, K::Statement}}},
        {RowShape::If, {{P::Initial, K::Question}, {P::Prolongation, K::Answer}}},
        {RowShape::WhileHeader, {{P::Initial, K::Question}, {P::Prolongation, K::Answer}}},
        {RowShape::ForHeader, {{P::Establisher, K::Intro}, {P::Initial, K::Statement}}},
        {RowShape::IterationMarker, {{P::Prolongation, K::IterationMarker}}},
        {RowShape::FuncDef, {{P::Establisher, K::Intro}, {P::Peak, K::Statement}}},
        {RowShape::Print, {{P::Peak, K::Output}}},
        {RowShape::Call, {{P::Initial, K::Statement}, {P::Release, K::Output}}},
        {RowShape::Return, {{P::Release, K::Output}}},
        {RowShape::Ellipsis, {{P::Release, K::Ellipsis}}},
    };
    return table.at(shape);
}

namespace {

const std::set<std::string, std::less<>> kInvertingVerbs = {
    "is", "are", "am", "was", "were", "can", "could", "will", "would", "should", "must", "may", "might", "shall"};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Third-person singular to base form: tastes -> taste, has -> have.
std::string base_form(std::string_view verb) {
    if (verb == "has") return "have";
    if (verb == "does") return "do";
    if (ends_with(verb, "ies") && verb.size() > 3) return std::string(verb.substr(0, verb.size() - 3)) + "y";
    for (std::string_view suffix : {"sses", "shes", "ches", "xes", "zes", "oes"}) {
        if (ends_with(verb, suffix)) return std::string(verb.substr(0, verb.size() - 2));
    }
    if (ends_with(verb, "s") && !ends_with(verb, "ss")) return std::string(verb.substr(0, verb.size() - 1));
    return std::string(verb);
}

std::string join_words(std::initializer_list<std::string_view> parts) {
    std::string out;
    for (auto p : parts) {
        if (p.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += p;
    }
    return out;
}

bool is_literal(const Expr& e) {
    return std::holds_alternative<IntLit>(e.node) || std::holds_alternative<BoolLit>(e.node) ||
           std::holds_alternative<StrLit>(e.node);
}

std::string shown_value(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
    return display(v);
}

using Key = std::pair<int, IterPath>;

class Composer {
public:
    Composer(const StoryTemplate& story, const ExecutionTrace& trace, const ComposeOptions& options)
        : story_(story), options_(options) {
        for (const auto& line : story.lines) lines_[line.code_line] = &line;
        for (const auto& e : trace.events) events_[{e.line, e.iter_path}].push_back(&e);
        for (const auto& v : trace.visits) {
            visits_.insert({v.line, v.iter_path});
            visited_lines_.insert(v.line);
        }
    }

    std::vector<Row> rows;

    void block(const std::vector<Stmt>& stmts, const IterPath& path, bool in_def) {
        for (const auto& s : stmts) statement(s, path, in_def);
    }

private:
    struct Ctx {
        const Stmt& stmt;
        const IterPath& path;
        bool in_def;
        bool executed;
    };

    void statement(const Stmt& s, const IterPath& path, bool in_def) {
        bool executed = in_def ? visited_lines_.count(s.line) > 0 : visits_.count({s.line, path}) > 0;
        if (!executed && options_.show_unexecuted == Unexecuted::Hidden) return;
        Ctx ctx{s, path, in_def, executed};
        std::visit(overloaded{
                       [&](const Assign& a) { assign(ctx, a); },
                       [&](const If& i) { conditional(ctx, i); },
                       [&](const While& w) { while_loop(ctx, w); },
                       [&](const ForRange& f) { for_loop(ctx, f); },
                       [&](const FuncDef& f) { funcdef(ctx, f); },
                       [&](const CallStmt& c) { call(ctx, c); },
                       [&](const Return&) { ret(ctx); },
                   },
                   s.node);
    }

    Row& open_row(const Ctx& ctx, IterPath iteration) {
        Row row;
        row.code_line = ctx.stmt.line;
        row.depth = ctx.stmt.depth;
        row.iteration = std::move(iteration);
        row.executed = ctx.executed;
        for (int d = 0; d < ctx.stmt.depth; ++d) row.panels.push_back(Panel{std::nullopt, PanelKind::Indent, {}});
        rows.push_back(std::move(row));
        return rows.back();
    }

    static void add_panels(Row& row, RowShape shape, std::vector<std::vector<Element>> contents) {
        const auto& tmpl = phase_template(shape);
        for (std::size_t i = 0; i < tmpl.size(); ++i) {
            row.panels.push_back(Panel{tmpl[i].first, tmpl[i].second, std::move(contents.at(i))});
        }
    }

    const StoryLine& story_line(int line) const {
        auto it = lines_.find(line);
        if (it == lines_.end()) throw MismatchedInputs("story template has no line " + std::to_string(line));
        return *it->second;
    }

    const Slot* slot(int line, std::string_view role) const {
        const std::string id = "L" + std::to_string(line) + "." + std::string(role);
        for (const auto& seg : story_line(line).segments) {
            if (const auto* s = std::get_if<Slot>(&seg); s && s->id == id) return s;
        }
        return nullptr;
    }

    std::string text_of(const Slot* s) const { return s ? effective_text(story_, *s) : std::string(); }

    // Sprite for an object slot: the user's object, or a stick figure.
    std::string figure_of(const Slot* s) const {
        if (!s) return "stick-figure";
        return user_text(story_, *s).value_or("stick-figure");
    }

    const std::vector<const Event*>& events_at(int line, const IterPath& path) const {
        static const std::vector<const Event*> none;
        auto it = events_.find({line, path});
        return it == events_.end() ? none : it->second;
    }

    template <typename T>
    const T* first_event(const Ctx& ctx) const {
        if (ctx.in_def) return nullptr;
        for (const auto* e : events_at(ctx.stmt.line, ctx.path)) {
            if (const auto* d = std::get_if<T>(&e->data)) return d;
        }
        return nullptr;
    }

    std::string question(const Ctx& ctx) const {
        const int line = ctx.stmt.line;
        if (const auto* cond = slot(line, "cond")) return text_of(cond) + "?";
        return question_form(text_of(slot(line, "object")), text_of(slot(line, "verb")), text_of(slot(line, "value")));
    }

    static std::string answer(const CondEvaluated* c) {
        if (!c) return "?";
        return c->outcome ? "yes" : "no";
    }

    void assign(const Ctx& ctx, const Assign& a) {
        const int line = ctx.stmt.line;
        const Slot* object = slot(line, "object");
        const Slot* value = slot(line, "value");
        std::map<std::string, std::string> overrides;
        if (value && !user_text(story_, *value) && !is_literal(a.value)) {
            if (const auto* ev = first_event<Assigned>(ctx)) overrides[value->id] = shown_value(ev->value);
        }
        const std::string name = text_of(object);
        const std::string figure = figure_of(object);
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::Assign,
                   {{SpriteElement{figure, name}, TextElement{name}},
                    {SpriteElement{figure, std::nullopt}, TextElement{render_line(story_, story_line(line), overrides)}}});
    }

    void conditional(const Ctx& ctx, const If& i) {
        const std::string figure = figure_of(slot(ctx.stmt.line, "object"));
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::If,
                   {{SpriteElement{figure, std::nullopt}, TextElement{question(ctx)}},
                    {Character{}, SpeechBubble{answer(first_event<CondEvaluated>(ctx)), "stick-figure"}}});
        block(i.body, ctx.path, ctx.in_def);
    }

    void while_loop(const Ctx& ctx, const While& w) {
        const std::string figure = figure_of(slot(ctx.stmt.line, "object"));
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::WhileHeader,
                   {{SpriteElement{figure, std::nullopt}, TextElement{question(ctx)}},
                    {Character{}, SpeechBubble{answer(first_event<CondEvaluated>(ctx)), "stick-figure"}}});
        unroll(ctx, w.body, [](int k) { return "iteration " + std::to_string(k); });
    }

    void for_loop(const Ctx& ctx, const ForRange& f) {
        const int line = ctx.stmt.line;
        auto indices = iterations(ctx);
        std::string range_text = f.var + " = ";
        if (indices.empty()) {
            range_text += ctx.executed && !ctx.in_def ? "none" : "?";
        } else {
            for (std::size_t i = 0; i < indices.size(); ++i) {
                if (i) range_text += ", ";
                range_text += std::to_string(indices[i]);
            }
        }
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::ForHeader,
                   {{Character{}, TextElement{render_line(story_, story_line(line))}}, {TextElement{range_text}}});
        const std::string var = f.var;
        unroll(ctx, f.body, [var](int k) { return var + " = " + std::to_string(k); });
    }

    std::vector<int> iterations(const Ctx& ctx) const {
        std::vector<int> out;
        if (ctx.in_def) return out;
        for (const auto* e : events_at(ctx.stmt.line, ctx.path)) {
            if (const auto* it = std::get_if<IterationBegan>(&e->data)) out.push_back(it->index);
        }
        return out;
    }

    template <typename Label>
    void unroll(const Ctx& ctx, const std::vector<Stmt>& body, Label label) {
        if (ctx.in_def) {
            // Definitions are drawn once, without iterations.
            block(body, ctx.path, true);
            return;
        }
        auto indices = iterations(ctx);
        const auto shown = std::min<std::size_t>(indices.size(), static_cast<std::size_t>(options_.iterations_shown));
        for (std::size_t i = 0; i < shown; ++i) {
            const int k = indices[i];
            IterPath inner = ctx.path;
            inner.push_back(IterStep{ctx.stmt.line, k});
            Row& marker = open_row(ctx, inner);
            marker.executed = true;
            add_panels(marker, RowShape::IterationMarker, {{TextElement{label(k)}}});
            block(body, inner, false);
        }
    }

    void funcdef(const Ctx& ctx, const FuncDef& f) {
        const int line = ctx.stmt.line;
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::FuncDef,
                   {{Character{}, TextElement{text_of(slot(line, "name"))}},
                    {TextElement{render_line(story_, story_line(line))}}});
        block(f.body, ctx.path, true);
    }

    void call(const Ctx& ctx, const CallStmt& c) {
        const int line = ctx.stmt.line;
        if (c.callee == "print") {
            const Slot* value = slot(line, "value");
            std::string said;
            if (value && user_text(story_, *value)) {
                said = *user_text(story_, *value);
            } else if (const auto* p = first_event<Printed>(ctx)) {
                said = p->text;
            } else {
                said = text_of(value);
            }
            Row& row = open_row(ctx, ctx.path);
            add_panels(row, RowShape::Print, {{Character{}, SpeechBubble{said, "stick-figure"}}});
            return;
        }
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::Call,
                   {{Character{}, TextElement{render_line(story_, story_line(line))}},
                    {TextElement{ctx.executed && !ctx.in_def ? "done" : "..."}}});
    }

    void ret(const Ctx& ctx) {
        Row& row = open_row(ctx, ctx.path);
        add_panels(row, RowShape::Return,
                   {{Character{}, SpeechBubble{render_line(story_, story_line(ctx.stmt.line)), "stick-figure"}}});
    }

    const StoryTemplate& story_;
    const ComposeOptions& options_;
    std::map<int, const StoryLine*> lines_;
    std::map<Key, std::vector<const Event*>> events_;
    std::set<Key> visits_;
    std::set<int> visited_lines_;
};

}  // namespace

std::string question_form(std::string_view object, std::string_view verb, std::string_view value) {
    auto space = verb.find(' ');
    std::string_view head = verb.substr(0, space);
    std::string_view rest = space == std::string_view::npos ? std::string_view{} : verb.substr(space + 1);
    std::string out;
    if (head.empty()) {
        out = join_words({object, value});
    } else if (kInvertingVerbs.count(head)) {
        out = join_words({head, object, rest, value});
    } else {
        const std::string base = base_form(head);
        out = join_words({"does", object, base, rest, value});
    }
    return out + "?";
}

ComicDoc compose(const CodeAst& ast, const StoryTemplate& story, const ExecutionTrace& trace,
                 const ComposeOptions& options) {
    if (options.iterations_shown < 1) throw InvalidInput("iterations_shown must be at least 1");
    const std::string hash = ast_hash(ast);
    if (story.source_hash != hash) throw MismatchedInputs("story template was built from a different program");
    if (trace.source_hash != hash) throw MismatchedInputs("trace was recorded from a different program");
    if (!same_skeleton(story, build_story_template(ast))) {
        throw MismatchedInputs("story template does not match the program's lines and slots");
    }

    Composer composer(story, trace, options);
    composer.block(ast.statements, {}, false);

    ComicDoc doc;
    doc.rows = std::move(composer.rows);
    doc.source_hash = hash;
    doc.show_unexecuted = options.show_unexecuted;
    if (trace.truncated && options.ellipsis_on_truncation) {
        Row row;
        row.code_line = trace.truncated_loop.value_or(0);
        const auto& tmpl = phase_template(RowShape::Ellipsis);
        row.panels.push_back(Panel{tmpl[0].first, tmpl[0].second, {TextElement{"..."}}});
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

bool same_structure(const ComicDoc& a, const ComicDoc& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const Row& x = a.rows[i];
        const Row& y = b.rows[i];
        if (x.code_line != y.code_line || x.depth != y.depth || x.iteration != y.iteration ||
            x.executed != y.executed || x.panels.size() != y.panels.size()) {
            return false;
        }
        for (std::size_t p = 0; p < x.panels.size(); ++p) {
            const Panel& px = x.panels[p];
            const Panel& py = y.panels[p];
            if (px.phase != py.phase || px.kind != py.kind || px.elements.size() != py.elements.size()) return false;
            for (std::size_t e = 0; e < px.elements.size(); ++e) {
                if (px.elements[e].index() != py.elements[e].index()) return false;
            }
        }
    }
    return true;
}

ComicDoc update(const ComicDoc& doc, const CodeAst& ast, const StoryTemplate& new_story,
                const ExecutionTrace& trace, const ComposeOptions& options) {
    const std::string hash = ast_hash(ast);
    if (doc.source_hash != hash) throw StructureChanged("the program differs from the one the comic was made from");
    if (new_story.source_hash != hash || !same_skeleton(new_story, build_story_template(ast))) {
        throw StructureChanged("story template lines or slots differ from the program's");
    }
    ComicDoc next = compose(ast, new_story, trace, options);
    if (!same_structure(doc, next)) throw StructureChanged("trace or options produce a different panel layout");
    return next;
}

nlohmann::json to_json(const ComicDoc& doc) {
    using nlohmann::json;
    json rows = json::array();
    for (const auto& row : doc.rows) {
        json panels = json::array();
        for (const auto& panel : row.panels) {
            json elements = json::array();
            for (const auto& el : panel.elements) {
                elements.push_back(std::visit(
                    overloaded{
                        [](const TextElement& t) { return json{{"type", "text"}, {"content", t.content}}; },
                        [](const SpeechBubble& b) {
                            return json{{"type", "speech_bubble"}, {"content", b.content}, {"speaker", b.speaker}};
                        },
                        [](const SpriteElement& s) {
                            return json{{"type", "sprite"},
                                        {"category", s.category},
                                        {"label", s.label ? json(*s.label) : json(nullptr)}};
                        },
                        [](const Character& c) { return json{{"type", "character"}, {"figure", c.figure}}; },
                    },
                    el));
            }
            panels.push_back({{"phase", panel.phase ? json(to_string(*panel.phase)) : json(nullptr)},
                              {"kind", to_string(panel.kind)},
                              {"elements", elements}});
        }
        json iteration = json::array();
        for (const auto& step : row.iteration) iteration.push_back({step.loop_line, step.index});
        rows.push_back({{"code_line", row.code_line},
                        {"depth", row.depth},
                        {"iteration", row.iteration.empty() ? json(nullptr) : iteration},
                        {"executed", row.executed},
                        {"panels", panels}});
    }
    return {{"version", 1},
            {"source_hash", doc.source_hash},
            {"show_unexecuted", to_string(doc.show_unexecuted)},
            {"rows", rows}};
}

}  // namespace codetoon
