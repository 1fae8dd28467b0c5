#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "codetoon/ast.hpp"

namespace codetoon {

/// Runtime value: integer, boolean or string. Alternatives are held in that
/// order, so `index()` is 0, 1, 2 respectively.
using Value = std::variant<std::int64_t, bool, std::string>;

/// Python `str()` rendering: 42, True, hello.
std::string display(const Value& v);

/// One dynamic loop iteration: the loop's line and the 0-based index.
struct IterStep {
    int loop_line = 0;
    int index = 0;
    friend bool operator==(const IterStep&, const IterStep&) = default;
    friend auto operator<=>(const IterStep&, const IterStep&) = default;
};
using IterPath = std::vector<IterStep>;

struct Assigned {
    std::string var;
    Value value;
    friend bool operator==(const Assigned&, const Assigned&) = default;
};
struct CondEvaluated {
    bool outcome = false;
    friend bool operator==(const CondEvaluated&, const CondEvaluated&) = default;
};
/// `iter_path` of the owning event is the enclosing path; the new iteration
/// is (line, index).
struct IterationBegan {
    std::optional<std::string> loop_var;
    int index = 0;
    friend bool operator==(const IterationBegan&, const IterationBegan&) = default;
};
struct Printed {
    std::string text;
    friend bool operator==(const Printed&, const Printed&) = default;
};
struct Returned {
    Value value;
    friend bool operator==(const Returned&, const Returned&) = default;
};

struct Event {
    int line = 0;
    IterPath iter_path;
    std::variant<Assigned, CondEvaluated, IterationBegan, Printed, Returned> data;
    friend bool operator==(const Event&, const Event&) = default;
};

enum class FaultKind {
    UndefinedName,
    TypeMismatch,
    DivisionByZero,
    UndefinedFunction,
    ArityMismatch,
    RecursionLimit,
    NoReturnValue,
    Overflow,
    EventLimit,
};

std::string_view to_string(FaultKind kind);

struct RuntimeFault {
    int line = 0;
    FaultKind kind = FaultKind::UndefinedName;
    std::string detail;
    friend bool operator==(const RuntimeFault&, const RuntimeFault&) = default;
};

/// A statement execution: the line and the dynamic iteration it ran in.
struct Visit {
    int line = 0;
    IterPath iter_path;
    friend bool operator==(const Visit&, const Visit&) = default;
};

struct ExecutionTrace {
    std::vector<Event> events;
    bool truncated = false;
    /// Line of the first loop that hit the iteration cap.
    std::optional<int> truncated_loop;
    /// Set when execution stopped early; `events` holds what ran before it.
    std::optional<RuntimeFault> fault;
    /// Every statement execution in order, including statements such as
    /// `def` or user-function calls that emit no event of their own.
    std::vector<Visit> visits;
    std::string source_hash;
    friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

struct TraceLimits {
    int max_iterations_per_loop = 3;
    int max_total_events = 10000;
    int max_call_depth = 8;
};

/// Runs the program and records what happened. Runtime faults do not throw;
/// they end the run and are reported in `ExecutionTrace::fault`.
ExecutionTrace trace(const CodeAst& ast, const TraceLimits& limits = {});

nlohmann::json to_json(const Value& v);
nlohmann::json to_json(const ExecutionTrace& t);

}  // namespace codetoon
