#include "codetoon/story.hpp"

#include <array>
#include <set>

#include "codetoon/errors.hpp"
#include "codetoon/parser.hpp"

namespace codetoon {

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {
    "object", "verb", "value", "action", "condition-phrase", "function-name"};

std::string trim(std::string_view s) {
    auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (!s.empty() && issp(s.front())) s.remove_prefix(1);
    while (!s.empty() && issp(s.back())) s.remove_suffix(1);
    return std::string(s);
}

std::string verb_for(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "is";
        case CompareOp::Ne: return "is not";
        case CompareOp::Lt: return "is less than";
        case CompareOp::Gt: return "is greater than";
        case CompareOp::Le: return "is at most";
        case CompareOp::Ge: return "is at least";
    }
    return "is";
}

// Spoken form of print() arguments: string contents bare, other expressions
// as written.
std::string spoken(const std::vector<Expr>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out.push_back(' ');
        if (const auto* s = std::get_if<StrLit>(&args[i].node)) {
            out += s->value;
        } else {
            out += expr_to_source(args[i]);
        }
    }
    return out;
}

std::string args_text(const std::vector<Expr>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += expr_to_source(args[i]);
    }
    return out;
}

class Builder {
public:
    void line(const Stmt& s) {
        prefix_ = "L" + std::to_string(s.line) + ".";
        StoryLine out{s.line, s.depth, {}};
        segs_ = &out.segments;
        std::visit(overloaded{
                       [&](const Assign& a) {
                           slot("object", SlotKind::Object, a.target, a.target);
                           slot("verb", SlotKind::Verb, "is");
                           slot("value", SlotKind::Value, expr_to_source(a.value));
                       },
                       [&](const If& i) {
                           text("if");
                           condition(i.cond);
                       },
                       [&](const While& w) {
                           text("while");
                           condition(w.cond);
                       },
                       [&](const ForRange& f) {
                           text("repeat");
                           slot("value", SlotKind::Value, expr_to_source(f.count));
                           text("times");
                       },
                       [&](const FuncDef& f) {
                           text("to");
                           slot("name", SlotKind::FunctionName, f.name);
                           for (std::size_t k = 0; k < f.params.size(); ++k) {
                               slot("param" + std::to_string(k), SlotKind::Object, f.params[k], f.params[k]);
                           }
                       },
                       [&](const CallStmt& c) {
                           if (c.callee == "print") {
                               slot("action", SlotKind::Action, "say");
                               text(",");
                               slot("value", SlotKind::Value, spoken(c.args), std::nullopt, true);
                           } else {
                               slot("name", SlotKind::FunctionName, c.callee);
                               if (!c.args.empty()) slot("value", SlotKind::Value, args_text(c.args));
                           }
                       },
                       [&](const Return& r) {
                           slot("action", SlotKind::Action, "return");
                           slot("value", SlotKind::Value, expr_to_source(r.value));
                       },
                   },
                   s.node);
        lines.push_back(std::move(out));
        for (const auto& child : body_of(s)) line(child);
    }

    std::vector<StoryLine> lines;

private:
    void text(std::string t) { segs_->push_back(FixedText{std::move(t)}); }

    void slot(const std::string& role, SlotKind kind, std::string def, std::optional<std::string> ref = std::nullopt,
              bool quoted = false) {
        segs_->push_back(Slot{prefix_ + role, kind, std::move(def), std::nullopt, std::move(ref), quoted});
    }

    void condition(const Expr& cond) {
        if (const auto* c = std::get_if<Compare>(&cond.node)) {
            std::optional<std::string> ref;
            if (const auto* n = std::get_if<Name>(&c->lhs->node)) ref = n->id;
            slot("object", SlotKind::Object, expr_to_source(*c->lhs), ref);
            slot("verb", SlotKind::Verb, verb_for(c->op));
            slot("value", SlotKind::Value, expr_to_source(*c->rhs));
        } else {
            slot("cond", SlotKind::ConditionPhrase, expr_to_source(cond));
        }
    }

    std::string prefix_;
    std::vector<Segment>* segs_ = nullptr;
};

bool attaches_left(const std::string& text) {
    return !text.empty() && std::string_view(",.?!;:").find(text.front()) != std::string_view::npos;
}

}  // namespace

std::string_view to_string(SlotKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

SlotKind slot_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<SlotKind>(i);
    }
    throw UnknownKind(std::string(name));
}

StoryTemplate build_story_template(const CodeAst& ast) {
    Builder b;
    for (const auto& s : ast.statements) b.line(s);
    return StoryTemplate{std::move(b.lines), ast_hash(ast)};
}

const Slot* find_slot(const StoryTemplate& t, std::string_view slot_id) {
    for (const auto& line : t.lines) {
        for (const auto& seg : line.segments) {
            if (const auto* s = std::get_if<Slot>(&seg); s && s->id == slot_id) return s;
        }
    }
    return nullptr;
}

StoryTemplate fill_slot(const StoryTemplate& t, std::string_view slot_id, std::string_view text) {
    StoryTemplate out = t;
    for (auto& line : out.lines) {
        for (auto& seg : line.segments) {
            auto* s = std::get_if<Slot>(&seg);
            if (!s || s->id != slot_id) continue;
            std::string value = trim(text);
            if (value.empty()) throw EmptyFill(std::string(slot_id));
            s->fill = std::move(value);
            return out;
        }
    }
    throw UnknownSlot(std::string(slot_id));
}

StoryTemplate merge_fills(const StoryTemplate& t, const std::map<std::string, std::string>& fills) {
    StoryTemplate out = t;
    for (const auto& [id, text] : fills) {
        if (!find_slot(out, id)) throw StructureChanged("fill refers to unknown slot '" + id + "'");
        out = fill_slot(out, id, text);
    }
    return out;
}

std::map<std::string, std::string> fills_of(const StoryTemplate& t) {
    std::map<std::string, std::string> out;
    for (const auto& line : t.lines) {
        for (const auto& seg : line.segments) {
            if (const auto* s = std::get_if<Slot>(&seg); s && s->fill) out[s->id] = *s->fill;
        }
    }
    return out;
}

std::optional<std::string> user_text(const StoryTemplate& t, const Slot& slot) {
    if (slot.fill) return slot.fill;
    if (slot.kind != SlotKind::Object || !slot.ref) return std::nullopt;
    std::optional<std::string> inherited;
    for (const auto& line : t.lines) {
        for (const auto& seg : line.segments) {
            const auto* s = std::get_if<Slot>(&seg);
            if (!s) continue;
            if (s->id == slot.id) return inherited;
            if (s->kind == SlotKind::Object && s->ref == slot.ref && s->fill) inherited = s->fill;
        }
    }
    return std::nullopt;
}

std::string effective_text(const StoryTemplate& t, const Slot& slot) {
    return user_text(t, slot).value_or(slot.default_fill);
}

std::string render_line(const StoryTemplate& t, const StoryLine& line,
                        const std::map<std::string, std::string>& overrides) {
    std::string out;
    for (const auto& seg : line.segments) {
        std::string piece;
        bool glue = false;
        if (const auto* f = std::get_if<FixedText>(&seg)) {
            piece = f->text;
            glue = attaches_left(piece);
        } else {
            const auto& s = std::get<Slot>(seg);
            auto it = overrides.find(s.id);
            piece = it != overrides.end() ? it->second : effective_text(t, s);
            if (s.quoted) piece = "\"" + piece + "\"";
        }
        if (piece.empty()) continue;
        if (!out.empty() && !glue) out.push_back(' ');
        out += piece;
    }
    return out;
}

std::vector<std::string> render_story_text(const StoryTemplate& t) {
    std::vector<std::string> out;
    out.reserve(t.lines.size());
    for (const auto& line : t.lines) {
        out.push_back(std::string(static_cast<std::size_t>(line.depth) * 2, ' ') + render_line(t, line));
    }
    return out;
}

bool same_skeleton(const StoryTemplate& a, const StoryTemplate& b) {
    if (a.lines.size() != b.lines.size()) return false;
    for (std::size_t i = 0; i < a.lines.size(); ++i) {
        const auto& la = a.lines[i];
        const auto& lb = b.lines[i];
        if (la.code_line != lb.code_line || la.depth != lb.depth || la.segments.size() != lb.segments.size()) {
            return false;
        }
        for (std::size_t k = 0; k < la.segments.size(); ++k) {
            const auto& sa = la.segments[k];
            const auto& sb = lb.segments[k];
            if (sa.index() != sb.index()) return false;
            if (const auto* fa = std::get_if<FixedText>(&sa)) {
                if (fa->text != std::get<FixedText>(sb).text) return false;
            } else {
                const auto& x = std::get<Slot>(sa);
                const auto& y = std::get<Slot>(sb);
                if (x.id != y.id || x.kind != y.kind || x.default_fill != y.default_fill) return false;
            }
        }
    }
    return true;
}

nlohmann::json to_json(const StoryTemplate& t) {
    using nlohmann::json;
    json lines = json::array();
    for (const auto& line : t.lines) {
        json segs = json::array();
        for (const auto& seg : line.segments) {
            if (const auto* f = std::get_if<FixedText>(&seg)) {
                segs.push_back({{"type", "text"}, {"text", f->text}});
            } else {
                const auto& s = std::get<Slot>(seg);
                json slot{{"id", s.id},
                          {"kind", to_string(s.kind)},
                          {"default", s.default_fill},
                          {"fill", s.fill ? json(*s.fill) : json(nullptr)}};
                if (s.ref) slot["ref"] = *s.ref;
                if (s.quoted) slot["quoted"] = true;
                segs.push_back({{"type", "slot"}, {"slot", slot}});
            }
        }
        lines.push_back({{"code_line", line.code_line}, {"depth", line.depth}, {"segments", segs}});
    }
    return {{"version", 1}, {"source_hash", t.source_hash}, {"lines", lines}};
}

StoryTemplate story_template_from_json(const nlohmann::json& j) {
    try {
        StoryTemplate t;
        t.source_hash = j.value("source_hash", "");
        std::set<std::string> ids;
        for (const auto& lj : j.at("lines")) {
            StoryLine line;
            line.code_line = lj.at("code_line").get<int>();
            line.depth = lj.at("depth").get<int>();
            for (const auto& sj : lj.at("segments")) {
                const auto type = sj.at("type").get<std::string>();
                if (type == "text") {
                    line.segments.push_back(FixedText{sj.at("text").get<std::string>()});
                } else if (type == "slot") {
                    const auto& s = sj.at("slot");
                    Slot slot;
                    slot.id = s.at("id").get<std::string>();
                    if (!ids.insert(slot.id).second) throw InvalidInput("duplicate slot id '" + slot.id + "'");
                    slot.kind = slot_kind_from_string(s.at("kind").get<std::string>());
                    slot.default_fill = s.at("default").get<std::string>();
                    if (s.contains("fill") && !s.at("fill").is_null()) {
                        std::string fill = trim(s.at("fill").get<std::string>());
                        if (!fill.empty()) slot.fill = std::move(fill);
                    }
                    if (s.contains("ref")) slot.ref = s.at("ref").get<std::string>();
                    slot.quoted = s.value("quoted", false);
                    line.segments.push_back(std::move(slot));
                } else {
                    throw InvalidInput("unknown segment type '" + type + "'");
                }
            }
            t.lines.push_back(std::move(line));
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed story template: ") + e.what());
    } catch (const UnknownKind& e) {
        throw InvalidInput(std::string("malformed story template: ") + e.what());
    }
}

}  // namespace codetoon
