#pragma once

// Test-side helpers: random program generators that record, independently of
// the parser, which lines they emitted and at what depth, plus small fixtures.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "codetoon/comic.hpp"
#include "codetoon/parser.hpp"
#include "codetoon/story.hpp"
#include "codetoon/tracer.hpp"

namespace testsupport {

inline const char* kApple = "x = True\nif x == True:\n    print(True)\n";
inline const char* kBattery = "x = 90\nfor i in range(3):\n    x = x - 10\n    print(x)\n";

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GenLine {
    int line;
    int depth;
};

struct GenProgram {
    std::string source;
    std::vector<GenLine> statements;  // every statement line the generator wrote
    // Loop programs only.
    int loop_line = 0;
    int loop_iterations = 0;
    int loop_body_lines = 0;
};

/// Emits source line by line, sprinkling blank and comment lines that must not
/// count as statements.
class Emitter {
public:
    explicit Emitter(std::mt19937& rng) : rng_(rng) {}

    int stmt(int depth, const std::string& text) {
        noise();
        out_ << std::string(static_cast<std::size_t>(depth) * 4, ' ') << text << '\n';
        ++line_;
        prog_.statements.push_back({line_, depth});
        return line_;
    }

    GenProgram finish() {
        prog_.source = out_.str();
        return prog_;
    }

    GenProgram& prog() { return prog_; }
    int statements() const { return static_cast<int>(prog_.statements.size()); }

private:
    void noise() {
        std::uniform_int_distribution<int> d(0, 9);
        const int r = d(rng_);
        if (r == 0) {
            out_ << '\n';
            ++line_;
        } else if (r == 1) {
            out_ << "# note\n";
            ++line_;
        }
    }

    std::mt19937& rng_;
    std::ostringstream out_;
    int line_ = 0;
    GenProgram prog_;
};

inline const std::vector<std::string> kVars = {"x", "y", "n", "score", "battery"};

inline std::string pick(std::mt19937& rng, const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline int rnd(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::string rand_value(std::mt19937& rng) {
    switch (rnd(rng, 0, 5)) {
        case 0: return std::to_string(rnd(rng, 0, 100));
        case 1: return rnd(rng, 0, 1) ? "True" : "False";
        case 2: return "\"hello\"";
        case 3: return pick(rng, kVars) + " + " + std::to_string(rnd(rng, 1, 9));
        case 4: return pick(rng, kVars) + " * 2";
        default: return pick(rng, kVars);
    }
}

inline std::string rand_cond(std::mt19937& rng) {
    static const std::vector<std::string> ops = {"==", "!=", "<", ">", "<=", ">="};
    if (rnd(rng, 0, 4) == 0) return pick(rng, kVars);
    return pick(rng, kVars) + " " + pick(rng, ops) + " " + std::to_string(rnd(rng, 0, 100));
}

/// A simple (non-compound) statement.
inline void simple_stmt(Emitter& e, std::mt19937& rng, int depth) {
    if (rnd(rng, 0, 2) == 0)
        e.stmt(depth, "print(" + rand_value(rng) + ")");
    else
        e.stmt(depth, pick(rng, kVars) + " = " + rand_value(rng));
}

inline void loop_free_block(Emitter& e, std::mt19937& rng, int depth, int budget, bool allow_def);

/// Loop-free programs of at most `max_lines` statements using assignment,
/// print, if, def, return and user calls.
inline GenProgram random_loop_free(std::mt19937& rng, int max_lines = 30) {
    Emitter e(rng);
    // Seed a few variables so most runs get past the first lines.
    e.stmt(0, "x = " + std::to_string(rnd(rng, 0, 50)));
    e.stmt(0, "n = " + std::to_string(rnd(rng, 0, 50)));
    loop_free_block(e, rng, 0, rnd(rng, 0, max_lines - 2), true);
    return e.finish();
}

inline void loop_free_block(Emitter& e, std::mt19937& rng, int depth, int budget, bool allow_def) {
    int used = 0;
    bool have_fn = false;
    while (used < budget) {
        const int left = budget - used;
        const int choice = rnd(rng, 0, 9);
        if (choice <= 1 && left >= 2 && depth < 3) {
            e.stmt(depth, "if " + rand_cond(rng) + ":");
            const int inner = rnd(rng, 1, std::min(left - 1, 4));
            loop_free_block(e, rng, depth + 1, inner, false);
            used += 1 + inner;
        } else if (choice == 2 && allow_def && depth == 0 && left >= 3) {
            e.stmt(0, "def helper(a):");
            e.stmt(1, "print(a)");
            e.stmt(1, "return a + 1");
            used += 3;
            have_fn = true;
        } else if (choice == 3 && have_fn) {
            if (rnd(rng, 0, 1))
                e.stmt(depth, "helper(" + std::to_string(rnd(rng, 0, 9)) + ")");
            else
                e.stmt(depth, pick(rng, kVars) + " = helper(x)");
            used += 1;
        } else {
            simple_stmt(e, rng, depth);
            used += 1;
        }
    }
}

/// Integer-only statement over x and n, so loop programs never fault.
inline void safe_stmt(Emitter& e, std::mt19937& rng, int depth) {
    static const std::vector<std::string> vars = {"x", "n"};
    switch (rnd(rng, 0, 3)) {
        case 0: e.stmt(depth, "print(" + pick(rng, vars) + ")"); break;
        case 1: e.stmt(depth, pick(rng, vars) + " = " + std::to_string(rnd(rng, 0, 99))); break;
        case 2: e.stmt(depth, pick(rng, vars) + " = " + pick(rng, vars) + " - " + std::to_string(rnd(rng, 1, 9))); break;
        default: e.stmt(depth, "print(\"tick\")"); break;
    }
}

/// Exactly one loop (for or while) whose body has `b` ≤ 4 statement lines and
/// runs k ≤ 3 times, surrounded by loop-free straight-line code.
inline GenProgram random_single_loop(std::mt19937& rng) {
    Emitter e(rng);
    e.stmt(0, "x = " + std::to_string(rnd(rng, 0, 50)));
    e.stmt(0, "n = " + std::to_string(rnd(rng, 0, 50)));
    for (int i = rnd(rng, 0, 3); i > 0; --i) safe_stmt(e, rng, 0);

    const int k = rnd(rng, 0, 3);
    const int b = rnd(rng, 1, 4);
    auto& p = e.prog();
    if (rnd(rng, 0, 1)) {
        p.loop_line = e.stmt(0, "for i in range(" + std::to_string(k) + "):");
        int written = 0;
        while (written < b) {
            if (b - written >= 2 && rnd(rng, 0, 3) == 0) {
                e.stmt(1, "if x > " + std::to_string(rnd(rng, 0, 60)) + ":");
                safe_stmt(e, rng, 2);
                written += 2;
            } else {
                safe_stmt(e, rng, 1);
                written += 1;
            }
        }
    } else {
        e.stmt(0, "count = " + std::to_string(k));
        p.loop_line = e.stmt(0, "while count > 0:");
        for (int i = 0; i < b - 1; ++i) safe_stmt(e, rng, 1);
        e.stmt(1, "count = count - 1");
    }
    p.loop_iterations = k;
    p.loop_body_lines = b;

    for (int i = rnd(rng, 0, 3); i > 0; --i) safe_stmt(e, rng, 0);
    return e.finish();
}

/// Picks random slots of `t` and assigns random words to them.
inline std::map<std::string, std::string> random_fills(std::mt19937& rng, const codetoon::StoryTemplate& t) {
    static const std::vector<std::string> words = {"apple", "phone",  "tastes", "good", "wallet", "has",
                                                   "cat",   "sleepy", "is",     "sun",  "5 coins", "BATTERY"};
    std::map<std::string, std::string> fills;
    for (const auto& line : t.lines)
        for (const auto& seg : line.segments)
            if (const auto* s = std::get_if<codetoon::Slot>(&seg); s && rnd(rng, 0, 1)) fills[s->id] = pick(rng, words);
    return fills;
}

inline int leading_indent_panels(const codetoon::Row& r) {
    int n = 0;
    for (const auto& p : r.panels) {
        if (p.kind != codetoon::PanelKind::Indent) break;
        ++n;
    }
    return n;
}

}  // namespace testsupport
