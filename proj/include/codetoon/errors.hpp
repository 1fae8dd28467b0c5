#pragma once

#include <stdexcept>
#include <string>

namespace codetoon {

/// Base of every diagnostic the pipeline raises. `code()` is the stable,
/// machine-readable name used by the CLI and the HTTP error body; `line()` is
/// the offending 1-based source line or 0 when no line applies.
class Error : public std::runtime_error {
public:
    Error(std::string code, int line, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)), line_(line) {}

    const std::string& code() const noexcept { return code_; }
    int line() const noexcept { return line_; }
    std::string detail() const { return what(); }

private:
    std::string code_;
    int line_;
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& message)
        : Error("SyntaxError", line,
                "syntax error at line " + std::to_string(line) + ", column " +
                    std::to_string(col) + ": " + message),
          col_(col), message_(message) {}

    int col() const noexcept { return col_; }
    const std::string& message() const noexcept { return message_; }

private:
    int col_;
    std::string message_;
};

class UnsupportedConstruct : public Error {
public:
    UnsupportedConstruct(int line, const std::string& construct)
        : Error("UnsupportedConstruct", line,
                "unsupported construct: " + construct + " at line " + std::to_string(line)),
          construct_(construct) {}

    const std::string& construct() const noexcept { return construct_; }

private:
    std::string construct_;
};

class UnknownSlot : public Error {
public:
    explicit UnknownSlot(const std::string& id)
        : Error("UnknownSlot", 0, "unknown slot: " + id) {}
};

class EmptyFill : public Error {
public:
    explicit EmptyFill(const std::string& id)
        : Error("EmptyFill", 0, "fill for slot " + id + " is empty") {}
};

class UnknownKind : public Error {
public:
    explicit UnknownKind(const std::string& kind)
        : Error("UnknownKind", 0, "unknown slot kind: " + kind) {}
};

class LexiconFormatError : public Error {
public:
    explicit LexiconFormatError(const std::string& detail)
        : Error("LexiconFormatError", 0, "lexicon format error: " + detail) {}
};

class SpriteFormatError : public Error {
public:
    explicit SpriteFormatError(const std::string& detail)
        : Error("SpriteFormatError", 0, "sprite format error: " + detail) {}
};

class MismatchedInputs : public Error {
public:
    explicit MismatchedInputs(const std::string& detail)
        : Error("MismatchedInputs", 0, "mismatched inputs: " + detail) {}
};

class StructureChanged : public Error {
public:
    explicit StructureChanged(const std::string& detail, int line = 0)
        : Error("StructureChanged", line, "structure changed: " + detail) {}
};

/// Malformed request payloads, project files and similar plumbing failures.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& detail) : Error("InvalidInput", 0, detail) {}
};

}  // namespace codetoon
