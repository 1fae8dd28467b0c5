#pragma once

// Syntax tree for the supported Python subset.
//
// Nodes are plain values: copying a tree deep-copies it and `==` compares
// structure (kinds, names, literals, line and depth), which is what the
// round-trip and provenance checks rely on.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace codetoon {

/// Owning, copyable pointer with value semantics for recursive variants.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT: implicit by intent
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    const T& operator*() const { return *ptr_; }
    T& operator*() { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }
    T* operator->() { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

enum class BinaryOp { Add, Sub, Mul, Div };
enum class CompareOp { Eq, Ne, Lt, Gt, Le, Ge };

std::string_view to_string(BinaryOp op);
std::string_view to_string(CompareOp op);

struct Expr;

struct IntLit {
    std::int64_t value = 0;
    friend bool operator==(const IntLit&, const IntLit&) = default;
};
struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct StrLit {
    std::string value;  // decoded contents, without quotes
    friend bool operator==(const StrLit&, const StrLit&) = default;
};
struct Name {
    std::string id;
    friend bool operator==(const Name&, const Name&) = default;
};
struct BinOp {
    BinaryOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    friend bool operator==(const BinOp&, const BinOp&) = default;
};
struct Compare {
    CompareOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    friend bool operator==(const Compare&, const Compare&) = default;
};
struct Call {
    std::string callee;
    std::vector<Expr> args;
    friend bool operator==(const Call&, const Call&) = default;
};

struct Expr {
    std::variant<IntLit, BoolLit, StrLit, Name, BinOp, Compare, Call> node;
    friend bool operator==(const Expr&, const Expr&) = default;
};

struct Stmt;

struct Assign {
    std::string target;
    Expr value;
    friend bool operator==(const Assign&, const Assign&) = default;
};
struct If {
    Expr cond;
    std::vector<Stmt> body;
    friend bool operator==(const If&, const If&) = default;
};
struct While {
    Expr cond;
    std::vector<Stmt> body;
    friend bool operator==(const While&, const While&) = default;
};
struct ForRange {
    std::string var;
    Expr count;
    std::vector<Stmt> body;
    friend bool operator==(const ForRange&, const ForRange&) = default;
};
struct FuncDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<Stmt> body;
    friend bool operator==(const FuncDef&, const FuncDef&) = default;
};
struct CallStmt {
    std::string callee;
    std::vector<Expr> args;
    friend bool operator==(const CallStmt&, const CallStmt&) = default;
};
struct Return {
    Expr value;
    friend bool operator==(const Return&, const Return&) = default;
};

struct Stmt {
    int line = 0;   // 1-based source line
    int depth = 0;  // indent level
    std::variant<Assign, If, While, ForRange, FuncDef, CallStmt, Return> node;
    friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct CodeAst {
    std::vector<Stmt> statements;
    friend bool operator==(const CodeAst&, const CodeAst&) = default;
};

/// Child statements of a compound statement, or an empty list.
const std::vector<Stmt>& body_of(const Stmt& stmt);

/// Visits every statement in source order (pre-order).
template <typename Fn>
void for_each_stmt(const std::vector<Stmt>& stmts, Fn&& fn) {
    for (const auto& s : stmts) {
        fn(s);
        for_each_stmt(body_of(s), fn);
    }
}

/// Number of statements in the tree, nested bodies included.
std::size_t statement_count(const CodeAst& ast);

/// Stable name of the statement variant, as used in the JSON form.
std::string_view stmt_kind(const Stmt& stmt);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace codetoon
