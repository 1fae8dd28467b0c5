#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "codetoon/ast.hpp"

namespace codetoon {

struct ParseOptions {
    int indent_unit = 4;
};

/// Parses newline-normalized source into a CodeAst.
///
/// Comment-only and blank lines produce no statements. Throws SyntaxError for
/// malformed input and UnsupportedConstruct for valid Python outside the
/// subset (classes, imports, else/elif, augmented assignment, ...). Never
/// throws anything else, whatever bytes it is given.
CodeAst parse(std::string_view source, const ParseOptions& options = {});

/// Canonical source text. `parse(pretty_print(a))` is structurally equal to
/// `a` whenever `a` came from `parse`.
std::string pretty_print(const CodeAst& ast, int indent_unit = 4);

/// Canonical text of a single expression (minimal parentheses).
std::string expr_to_source(const Expr& expr);

/// 64-bit FNV-1a over the canonical form, hex encoded. Story templates, traces
/// and comics carry it to prove which program they were derived from.
std::string ast_hash(const CodeAst& ast);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

nlohmann::json to_json(const Expr& expr);
nlohmann::json to_json(const Stmt& stmt);
nlohmann::json to_json(const CodeAst& ast);

}  // namespace codetoon
