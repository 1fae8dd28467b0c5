// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <functional>
#include <iostream>

#include <fmt/format.h>

#include "codetoon/pipeline.hpp"
#include "support.hpp"

using namespace codetoon;
namespace ts = testsupport;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const SpriteSet& sprites() {
    static const SpriteSet s = load_sprites(std::string(CODETOON_DATA_DIR) + "/sprites.ndjson");
    return s;
}

std::vector<std::string> panel_texts(const Panel& p) {
    std::vector<std::string> out;
    for (const auto& e : p.elements) {
        if (const auto* t = std::get_if<TextElement>(&e)) out.push_back(t->content);
        if (const auto* b = std::get_if<SpeechBubble>(&e)) out.push_back("bubble:" + b->content);
    }
    return out;
}

std::vector<std::string> row_sequence(const Row& r) {
    std::vector<std::string> out;
    for (const auto& p : r.panels)
        out.emplace_back(p.kind == PanelKind::Indent ? "indent"
                         : p.kind == PanelKind::Output ? "output"
                                                       : std::string(to_string(*p.phase)));
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

// --- criteria ---------------------------------------------------------------

Outcome apple_golden() {
    const auto t0 = Clock::now();
    ComicRequest req;
    req.code = ts::kApple;
    req.fills = {{"L1.object", "apple"}, {"L1.verb", "tastes"}, {"L1.value", "good"},
                 {"L2.verb", "tastes"},  {"L2.value", "good"}};
    const ComicResult r = generate_comic(req, sprites());
    const double elapsed = ms_since(t0);

    const auto& rows = r.doc.rows;
    if (rows.size() != 3) return {false, fmt::format("{} rows", rows.size())};
    const std::vector<std::vector<std::string>> expected = {
        {"Establisher", "Initial"}, {"Initial", "Prolongation"}, {"indent", "output"}};
    for (std::size_t i = 0; i < 3; ++i)
        if (row_sequence(rows[i]) != expected[i]) return {false, fmt::format("row {} sequence differs", i + 1)};
    if (!contains(panel_texts(rows[0].panels[1]), "apple tastes good")) return {false, "missing 'apple tastes good'"};
    if (!contains(panel_texts(rows[1].panels[0]), "does apple taste good?")) return {false, "missing question"};
    if (!contains(panel_texts(rows[1].panels[1]), "bubble:yes")) return {false, "missing 'yes' bubble"};
    for (const char* needle : {"apple tastes good", "does apple taste good?", ">yes<"})
        if (r.svg.find(needle) == std::string::npos) return {false, fmt::format("svg lacks '{}'", needle)};

    if (generate_comic(req, sprites()).svg != r.svg) return {false, "svg differs between calls"};
    const std::string golden = ts::slurp(std::string(CODETOON_TEST_DIR) + "/golden/apple.svg");
    if (golden != r.svg) return {false, "svg differs from the checked-in golden file"};
    if (elapsed >= 1000) return {false, fmt::format("{:.1f} ms", elapsed)};
    return {true, fmt::format("3 rows, golden svg matched, {:.2f} ms", elapsed)};
}

Outcome code_to_story() {
    struct Case {
        const char* code;
        std::map<std::string, std::string> fills;
        const char* story;
    };
    // Story column of the code-to-story table.
    const std::vector<Case> cases = {
        {"x = 5", {{"L1.object", "time"}, {"L1.value", "5 o'clock"}}, "time is 5 o'clock"},
        {"x = 5", {{"L1.object", "wallet"}, {"L1.verb", "has"}, {"L1.value", "5 parking coins"}}, "wallet has 5 parking coins"},
        {"x = 5", {{"L1.object", "student"}, {"L1.verb", "received"}, {"L1.value", "5 dollars"}}, "student received 5 dollars"},
        {"x = True", {{"L1.object", "switch"}, {"L1.value", "on"}}, "switch is on"},
        {"x = True", {{"L1.object", "my schedule"}, {"L1.value", "busy"}}, "my schedule is busy"},
        {"x = True", {{"L1.object", "this"}, {"L1.value", "expensive"}}, "this is expensive"},
        {"x = \"hello\"", {{"L1.object", "message"}, {"L1.verb", "reads,"}}, "message reads, \"hello\""},
        {"print(\"Even\")", {{"L1.value", "It's even!"}}, "say, \"It's even!\""},
    };
    for (const auto& c : cases) {
        const auto lines = render_story_text(merge_fills(generate_story(c.code), c.fills));
        if (lines.size() != 1 || lines[0] != c.story)
            return {false, fmt::format("'{}' rendered as '{}'", c.story, lines.empty() ? "" : lines[0])};
    }
    return {true, fmt::format("{} stories matched exactly", cases.size())};
}

Outcome one_to_one_mapping() {
    std::mt19937 rng(1001);
    int violations = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        const auto prog = ts::random_loop_free(rng, 30);
        ComicRequest req;
        req.code = prog.source;
        const ComicResult r = generate_comic(req, sprites());
        bool ok = r.doc.rows.size() == prog.statements.size() && r.story.lines.size() == prog.statements.size();
        for (std::size_t k = 0; ok && k < prog.statements.size(); ++k) {
            ok = r.doc.rows[k].code_line == prog.statements[k].line &&
                 r.story.lines[k].depth == prog.statements[k].depth &&
                 ts::leading_indent_panels(r.doc.rows[k]) == prog.statements[k].depth;
        }
        if (!ok && violations++ == 0) first = prog.source;
    }
    if (violations) return {false, fmt::format("{} violations; first:\n{}", violations, first)};
    return {true, "200 programs, 0 violations"};
}

Outcome loop_unroll() {
    std::mt19937 rng(2002);
    for (int i = 0; i < 200; ++i) {
        const auto prog = ts::random_single_loop(rng);
        ComicRequest req;
        req.code = prog.source;
        const ComicResult r = generate_comic(req, sprites());
        const int non_loop = static_cast<int>(prog.statements.size()) - 1 - prog.loop_body_lines;
        const int expected = non_loop + 1 + prog.loop_iterations * (1 + prog.loop_body_lines);
        if (static_cast<int>(r.doc.rows.size()) != expected)
            return {false, fmt::format("{} rows, expected {}:\n{}", r.doc.rows.size(), expected, prog.source)};
    }

    const ExecutionTrace t = trace(parse("x = 90\nfor i in range(3):\n    x = x - 10"));
    std::vector<std::string> values;
    for (const auto& e : t.events)
        if (const auto* a = std::get_if<Assigned>(&e.data); a && e.line == 3) values.push_back(display(a->value));
    if (values != std::vector<std::string>{"80", "70", "60"}) return {false, "battery values differ"};

    ComicRequest req;
    req.code = ts::kBattery;
    std::vector<std::string> markers;
    for (const auto& row : generate_comic(req, sprites()).doc.rows)
        for (const auto& p : row.panels)
            if (p.kind == PanelKind::IterationMarker) markers.push_back(panel_texts(p).at(0));
    if (markers != std::vector<std::string>{"i = 0", "i = 1", "i = 2"}) return {false, "markers differ"};
    return {true, "200 programs matched 1 + k(1+b); battery 80, 70, 60 with i = 0, 1, 2"};
}

Outcome update_invariance() {
    std::mt19937 rng(3003);
    for (int i = 0; i < 100; ++i) {
        const auto prog = i % 2 ? ts::random_single_loop(rng) : ts::random_loop_free(rng);
        const CodeAst ast = parse(prog.source);
        const StoryTemplate base = build_story_template(ast);
        const ExecutionTrace tr = trace(ast);
        const ComicDoc d1 = compose(ast, merge_fills(base, ts::random_fills(rng, base)), tr);
        const ComicDoc d2 = update(d1, ast, merge_fills(base, ts::random_fills(rng, base)), tr);
        if (d1.rows.size() != d2.rows.size()) return {false, "row count changed"};
        for (std::size_t r = 0; r < d1.rows.size(); ++r) {
            const auto& a = d1.rows[r].panels;
            const auto& b = d2.rows[r].panels;
            if (a.size() != b.size()) return {false, "panel count changed"};
            for (std::size_t p = 0; p < a.size(); ++p) {
                if (a[p].kind != b[p].kind || a[p].phase != b[p].phase) return {false, "panel kind or phase changed"};
                if (a[p].elements.size() != b[p].elements.size()) return {false, "element count changed"};
                for (std::size_t e = 0; e < a[p].elements.size(); ++e)
                    if (a[p].elements[e].index() != b[p].elements[e].index()) return {false, "element kind changed"};
            }
        }
    }
    return {true, "100 triples, structure preserved"};
}

std::string fuzz_input(std::mt19937& rng) {
    static const std::vector<std::string> seeds = {
        ts::kApple, ts::kBattery, "def f(a):\n    return f(a)\nf(1)\n", "while True:\n    print(\"x\")\n",
        "n = 3\nwhile n > 0:\n    n = n - 1\n", "x = 1 / 0\n"};
    static const std::string alphabet = "xyn=+-*/()<>!:\"'# \n    ifwhlordeprntTFuaFs0123456789,.\\\t";
    std::string s;
    switch (ts::rnd(rng, 0, 2)) {
        case 0:  // arbitrary bytes
            for (int n = ts::rnd(rng, 0, 120); n > 0; --n) s += static_cast<char>(ts::rnd(rng, 0, 255));
            break;
        case 1:  // program-ish characters
            for (int n = ts::rnd(rng, 0, 120); n > 0; --n)
                s += alphabet[static_cast<std::size_t>(ts::rnd(rng, 0, static_cast<int>(alphabet.size()) - 1))];
            break;
        default: {  // mutated valid program
            s = ts::pick(rng, seeds);
            for (int n = ts::rnd(rng, 1, 4); n > 0 && !s.empty(); --n) {
                const auto pos = static_cast<std::size_t>(ts::rnd(rng, 0, static_cast<int>(s.size()) - 1));
                switch (ts::rnd(rng, 0, 2)) {
                    case 0: s[pos] = static_cast<char>(ts::rnd(rng, 0, 255)); break;
                    case 1: s.erase(pos, 1); break;
                    default: s.insert(pos, 1, alphabet[pos % alphabet.size()]); break;
                }
            }
        }
    }
    return s;
}

Outcome fuzz_robustness() {
    std::mt19937 rng(4004);
    int parsed = 0, diagnosed = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::string input = fuzz_input(rng);
        try {
            ComicRequest req;
            req.code = input;
            generate_comic(req, sprites());
            ++parsed;
        } catch (const Error&) {
            ++diagnosed;
        } catch (const std::exception& e) {
            return {false, fmt::format("input #{} escaped with {}", i, e.what())};
        }
    }
    return {true, fmt::format("10000 inputs: {} rendered, {} diagnostics, 0 crashes", parsed, diagnosed)};
}

std::string hundred_line_program() {
    std::string src = "x = 1\nn = 2\n";
    int lines = 2;
    for (int i = 0; lines < 100; ++i) {
        switch (i % 4) {
            case 0: src += fmt::format("x = x + {}\n", i); ++lines; break;
            case 1: src += "print(x)\n"; ++lines; break;
            case 2:
                if (lines + 2 > 100) {
                    src += "n = n * 2\n";
                    ++lines;
                } else {
                    src += fmt::format("if x > {}:\n    n = n + 1\n", i);
                    lines += 2;
                }
                break;
            default: src += fmt::format("n = {}\n", i); ++lines; break;
        }
    }
    return src;
}

Outcome performance() {
    const std::string src = hundred_line_program();
    const std::size_t lines = std::count(src.begin(), src.end(), '\n');
    double worst = 0;
    std::size_t rows = 0;
    for (int run = 0; run < 5; ++run) {
        const auto t0 = Clock::now();
        const CodeAst ast = parse(src);
        const StoryTemplate st = build_story_template(ast);
        const ExecutionTrace tr = trace(ast);
        const ComicDoc doc = compose(ast, st, tr);
        const std::string svg = render_svg(doc, sprites());
        worst = std::max(worst, ms_since(t0));
        rows = doc.rows.size();
        if (svg.empty()) return {false, "empty svg"};
    }
    if (lines != 100 || rows != 100) return {false, fmt::format("program has {} lines / {} rows", lines, rows)};
    if (worst >= 100) return {false, fmt::format("slowest of 5 runs took {:.2f} ms", worst)};
    return {true, fmt::format("100-line program, slowest of 5 runs {:.2f} ms", worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"condition comic golden test", apple_golden},
        {"code-to-story table", code_to_story},
        {"one row per line for loop-free programs", one_to_one_mapping},
        {"loop unrolling row count and battery trace", loop_unroll},
        {"update preserves structure", update_invariance},
        {"fuzz corpus never crashes", fuzz_robustness},
        {"100-line program under 100 ms", performance},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " -- " << o.detail << "\n";
    }
    return failed ? 1 : 0;
}
