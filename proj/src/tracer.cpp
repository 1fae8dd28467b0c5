#include "codetoon/tracer.hpp"

#include <limits>
#include <map>

#include "codetoon/errors.hpp"
#include "codetoon/parser.hpp"

namespace codetoon {

std::string display(const Value& v) {
    return std::visit(overloaded{
                          [](std::int64_t i) { return std::to_string(i); },
                          [](bool b) { return std::string(b ? "True" : "False"); },
                          [](const std::string& s) { return s; },
                      },
                      v);
}

std::string_view to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::UndefinedName: return "undefined-name";
        case FaultKind::TypeMismatch: return "type-mismatch";
        case FaultKind::DivisionByZero: return "division-by-zero";
        case FaultKind::UndefinedFunction: return "undefined-function";
        case FaultKind::ArityMismatch: return "arity-mismatch";
        case FaultKind::RecursionLimit: return "recursion-limit";
        case FaultKind::NoReturnValue: return "no-return-value";
        case FaultKind::Overflow: return "overflow";
        case FaultKind::EventLimit: return "event-limit";
    }
    return "unknown";
}

namespace {

struct Halt {
    RuntimeFault fault;
};

std::string type_name(const Value& v) {
    static constexpr const char* names[] = {"int", "bool", "str"};
    return names[v.index()];
}

class Interpreter {
public:
    Interpreter(const TraceLimits& limits, ExecutionTrace& out) : limits_(limits), out_(out) {}

    void run(const std::vector<Stmt>& program) {
        frames_.emplace_back();
        exec_block(program);
    }

private:
    using Frame = std::map<std::string, Value, std::less<>>;

    struct Function {
        const FuncDef* def = nullptr;
        int line = 0;
    };

    [[noreturn]] void fault(int line, FaultKind kind, std::string detail) {
        throw Halt{RuntimeFault{line, kind, std::move(detail)}};
    }

    void emit(int line, decltype(Event::data) data) {
        if (static_cast<int>(out_.events.size()) >= limits_.max_total_events) {
            fault(line, FaultKind::EventLimit, "event limit of " + std::to_string(limits_.max_total_events) + " reached");
        }
        out_.events.push_back(Event{line, path_, std::move(data)});
    }

    void mark_truncated(int loop_line) {
        out_.truncated = true;
        if (!out_.truncated_loop) out_.truncated_loop = loop_line;
    }

    // Returns true when a `return` statement completed the enclosing call.
    bool exec_block(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) {
            if (exec(s)) return true;
        }
        return false;
    }

    bool exec(const Stmt& stmt) {
        out_.visits.push_back(Visit{stmt.line, path_});
        const int line = stmt.line;
        return std::visit(
            overloaded{
                [&](const Assign& a) {
                    Value v = eval(a.value, line);
                    frames_.back()[a.target] = v;
                    emit(line, Assigned{a.target, std::move(v)});
                    return false;
                },
                [&](const If& i) {
                    bool outcome = truthy(eval(i.cond, line));
                    emit(line, CondEvaluated{outcome});
                    return outcome ? exec_block(i.body) : false;
                },
                [&](const While& w) {
                    for (int k = 0;; ++k) {
                        bool outcome = truthy(eval(w.cond, line));
                        emit(line, CondEvaluated{outcome});
                        if (!outcome) return false;
                        if (k >= limits_.max_iterations_per_loop) {
                            mark_truncated(line);
                            return false;
                        }
                        if (iteration(line, std::nullopt, k, w.body)) return true;
                    }
                },
                [&](const ForRange& f) {
                    Value count = eval(f.count, line);
                    if (!std::holds_alternative<std::int64_t>(count)) {
                        fault(line, FaultKind::TypeMismatch, "range() expects int, got " + type_name(count));
                    }
                    std::int64_t n = std::get<std::int64_t>(count);
                    std::int64_t shown = std::min<std::int64_t>(n, limits_.max_iterations_per_loop);
                    for (int k = 0; k < shown; ++k) {
                        frames_.back()[f.var] = Value{std::in_place_index<0>, k};
                        if (iteration(line, f.var, k, f.body)) return true;
                    }
                    if (n > shown) mark_truncated(line);
                    return false;
                },
                [&](const FuncDef& f) {
                    functions_[f.name] = Function{&f, line};
                    return false;
                },
                [&](const CallStmt& c) {
                    call(c.callee, c.args, line, false);
                    return false;
                },
                [&](const Return& r) {
                    Value v = eval(r.value, line);
                    emit(line, Returned{v});
                    return_value_ = std::move(v);
                    return true;
                },
            },
            stmt.node);
    }

    bool iteration(int line, std::optional<std::string> var, int index, const std::vector<Stmt>& body) {
        emit(line, IterationBegan{std::move(var), index});
        path_.push_back(IterStep{line, index});
        bool returned = exec_block(body);
        path_.pop_back();
        return returned;
    }

    std::optional<Value> call(const std::string& callee, const std::vector<Expr>& args, int line, bool needs_value) {
        auto fn = functions_.find(callee);
        if (fn == functions_.end()) {
            if (callee == "print") {
                std::string text;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (i) text.push_back(' ');
                    text += display(eval(args[i], line));
                }
                if (needs_value) fault(line, FaultKind::NoReturnValue, "print() does not produce a value");
                emit(line, Printed{std::move(text)});
                return std::nullopt;
            }
            fault(line, FaultKind::UndefinedFunction, "function '" + callee + "' is not defined");
        }
        const FuncDef& def = *fn->second.def;
        if (def.params.size() != args.size()) {
            fault(line, FaultKind::ArityMismatch,
                  callee + "() takes " + std::to_string(def.params.size()) + " argument(s), got " +
                      std::to_string(args.size()));
        }
        Frame frame;
        for (std::size_t i = 0; i < args.size(); ++i) frame[def.params[i]] = eval(args[i], line);
        if (static_cast<int>(frames_.size()) - 1 >= limits_.max_call_depth) {
            fault(line, FaultKind::RecursionLimit,
                  "call depth limit of " + std::to_string(limits_.max_call_depth) + " exceeded");
        }
        frames_.push_back(std::move(frame));
        return_value_.reset();
        bool returned = exec_block(def.body);
        frames_.pop_back();
        std::optional<Value> result;
        if (returned) result = std::move(return_value_);
        return_value_.reset();
        if (needs_value && !result) {
            fault(line, FaultKind::NoReturnValue, callee + "() finished without returning a value");
        }
        return result;
    }

    const Value& lookup(const std::string& name, int line) {
        auto& local = frames_.back();
        if (auto it = local.find(name); it != local.end()) return it->second;
        auto& global = frames_.front();
        if (auto it = global.find(name); it != global.end()) return it->second;
        fault(line, FaultKind::UndefinedName, "name '" + name + "' is not defined");
    }

    static bool truthy(const Value& v) {
        return std::visit(overloaded{
                              [](std::int64_t i) { return i != 0; },
                              [](bool b) { return b; },
                              [](const std::string& s) { return !s.empty(); },
                          },
                          v);
    }

    Value eval(const Expr& e, int line) {
        return std::visit(
            overloaded{
                [](const IntLit& i) { return Value{std::in_place_index<0>, i.value}; },
                [](const BoolLit& b) { return Value{std::in_place_index<1>, b.value}; },
                [](const StrLit& s) { return Value{std::in_place_index<2>, s.value}; },
                [&](const Name& n) { return lookup(n.id, line); },
                [&](const BinOp& b) { return arith(b.op, eval(*b.lhs, line), eval(*b.rhs, line), line); },
                [&](const Compare& c) { return compare(c.op, eval(*c.lhs, line), eval(*c.rhs, line), line); },
                [&](const Call& c) { return *call(c.callee, c.args, line, true); },
            },
            e.node);
    }

    Value arith(BinaryOp op, const Value& l, const Value& r, int line) {
        if (!std::holds_alternative<std::int64_t>(l) || !std::holds_alternative<std::int64_t>(r)) {
            fault(line, FaultKind::TypeMismatch,
                  "unsupported operand types for " + std::string(to_string(op)) + ": " + type_name(l) + " and " +
                      type_name(r));
        }
        std::int64_t a = std::get<std::int64_t>(l);
        std::int64_t b = std::get<std::int64_t>(r);
        std::int64_t out = 0;
        bool overflow = false;
        switch (op) {
            case BinaryOp::Add: overflow = __builtin_add_overflow(a, b, &out); break;
            case BinaryOp::Sub: overflow = __builtin_sub_overflow(a, b, &out); break;
            case BinaryOp::Mul: overflow = __builtin_mul_overflow(a, b, &out); break;
            case BinaryOp::Div:
                if (b == 0) fault(line, FaultKind::DivisionByZero, "division by zero");
                if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
                    overflow = true;
                    break;
                }
                out = a / b;
                if ((a % b != 0) && ((a < 0) != (b < 0))) --out;  // floor division
                break;
        }
        if (overflow) fault(line, FaultKind::Overflow, "integer overflow");
        return Value{std::in_place_index<0>, out};
    }

    Value compare(CompareOp op, const Value& l, const Value& r, int line) {
        if (l.index() != r.index()) {
            fault(line, FaultKind::TypeMismatch,
                  "cannot compare " + type_name(l) + " with " + type_name(r));
        }
        bool out = false;
        switch (op) {
            case CompareOp::Eq: out = l == r; break;
            case CompareOp::Ne: out = l != r; break;
            case CompareOp::Lt: out = l < r; break;
            case CompareOp::Gt: out = l > r; break;
            case CompareOp::Le: out = l <= r; break;
            case CompareOp::Ge: out = l >= r; break;
        }
        return Value{std::in_place_index<1>, out};
    }

    const TraceLimits& limits_;
    ExecutionTrace& out_;
    std::vector<Frame> frames_;
    std::map<std::string, Function, std::less<>> functions_;
    IterPath path_;
    std::optional<Value> return_value_;
};

nlohmann::json path_json(const IterPath& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& step : path) arr.push_back({step.loop_line, step.index});
    return arr;
}

}  // namespace

ExecutionTrace trace(const CodeAst& ast, const TraceLimits& limits) {
    if (limits.max_iterations_per_loop < 1 || limits.max_total_events < 1 || limits.max_call_depth < 1) {
        throw InvalidInput("trace limits must be positive");
    }
    ExecutionTrace out;
    out.source_hash = ast_hash(ast);
    Interpreter interp(limits, out);
    try {
        interp.run(ast.statements);
    } catch (const Halt& h) {
        out.fault = h.fault;
    }
    return out;
}

nlohmann::json to_json(const Value& v) {
    return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

nlohmann::json to_json(const ExecutionTrace& t) {
    using nlohmann::json;
    json events = json::array();
    for (const auto& e : t.events) {
        json j{{"line", e.line}, {"iter_path", path_json(e.iter_path)}};
        std::visit(overloaded{
                       [&](const Assigned& a) {
                           j["type"] = "Assigned";
                           j["var"] = a.var;
                           j["value"] = to_json(a.value);
                       },
                       [&](const CondEvaluated& c) {
                           j["type"] = "CondEvaluated";
                           j["outcome"] = c.outcome;
                       },
                       [&](const IterationBegan& i) {
                           j["type"] = "IterationBegan";
                           j["loop_var"] = i.loop_var ? json(*i.loop_var) : json(nullptr);
                           j["index"] = i.index;
                       },
                       [&](const Printed& p) {
                           j["type"] = "Printed";
                           j["text"] = p.text;
                       },
                       [&](const Returned& r) {
                           j["type"] = "Returned";
                           j["value"] = to_json(r.value);
                       },
                   },
                   e.data);
        events.push_back(std::move(j));
    }
    json fault = nullptr;
    if (t.fault) {
        fault = {{"line", t.fault->line}, {"kind", to_string(t.fault->kind)}, {"detail", t.fault->detail}};
    }
    json visits = json::array();
    for (const auto& v : t.visits) visits.push_back({{"line", v.line}, {"iter_path", path_json(v.iter_path)}});
    return {{"version", 1},
            {"source_hash", t.source_hash},
            {"events", events},
            {"truncated", t.truncated},
            {"truncated_loop", t.truncated_loop ? json(*t.truncated_loop) : json(nullptr)},
            {"fault", fault},
            {"visits", visits}};
}

}  // namespace codetoon
