#include "codetoon/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "codetoon/errors.hpp"

namespace codetoon {

namespace {

constexpr double kCharWidth = 0.6;   // average glyph advance, in font sizes
constexpr double kLineHeight = 1.2;  // in font sizes
constexpr std::string_view kEllipsis = "…";

std::string num(double v) {
    if (std::abs(v) < 0.005) v = 0.0;  // no "-0.00"
    return fmt::format("{:.2f}", v);
}

// Code points of a UTF-8 string, each as its byte sequence.
std::vector<std::string_view> code_points(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
        len = std::min(len, s.size() - i);
        out.push_back(s.substr(i, len));
        i += len;
    }
    return out;
}

std::size_t length(std::string_view s) { return code_points(s).size(); }

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:
                // XML 1.0 forbids most control characters.
                out.push_back(static_cast<unsigned char>(c) < 0x20 ? ' ' : c);
        }
    }
    return out;
}

struct Rect {
    double x, y, w, h;
};

class SvgWriter {
public:
    SvgWriter(const SpriteSet& sprites, const Layout& layout) : sprites_(sprites), layout_(layout) {}

    std::string out;

    void panel(const Panel& panel, const Rect& frame) {
        out += fmt::format("<g class=\"panel\" data-kind=\"{}\" data-phase=\"{}\">", to_string(panel.kind),
                           panel.phase ? to_string(*panel.phase) : std::string_view("none"));
        const bool indent = panel.kind == PanelKind::Indent;
        out += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="#000000" stroke-width="2.00"/>)",
                           num(frame.x), num(frame.y), num(frame.w), num(frame.h), indent ? "#d9d9d9" : "#ffffff");

        const double pad = layout_.padding;
        const Rect content{frame.x + pad, frame.y + pad, frame.w - 2 * pad, frame.h - 2 * pad};

        std::string caption;
        const SpeechBubble* bubble = nullptr;
        std::size_t figures = 0;
        for (const auto& el : panel.elements) {
            if (const auto* t = std::get_if<TextElement>(&el)) {
                if (!caption.empty()) caption.push_back(' ');
                caption += t->content;
            } else if (const auto* b = std::get_if<SpeechBubble>(&el)) {
                if (!bubble) bubble = b;
            } else {
                ++figures;
            }
        }

        const double fs = layout_.font_size;
        auto caption_lines = caption.empty() ? std::vector<std::string>{} : wrap_text(caption, chars_for(content.w, fs));
        const double caption_h = static_cast<double>(caption_lines.size()) * fs * kLineHeight;
        Rect art{content.x, content.y, content.w, std::max(0.0, content.h - caption_h - (caption_h > 0 ? 4 : 0))};
        if (caption_lines.empty() && figures == 0 && !bubble) art.h = 0;

        // sprites, then bubbles, then text
        std::string texts;
        Rect figure_area = art;
        Rect bubble_area = art;
        if (bubble && figures > 0) {
            figure_area.w = art.w * 0.4;
            bubble_area.x = art.x + figure_area.w;
            bubble_area.w = art.w - figure_area.w;
        }
        if (figures > 0 && art.h > 0) {
            const double side = std::min(figure_area.h, figure_area.w / static_cast<double>(figures));
            const double total = side * static_cast<double>(figures);
            double x = figure_area.x + (figure_area.w - total) / 2;
            const double y = figure_area.y + (figure_area.h - side) / 2;
            for (const auto& el : panel.elements) {
                std::string category;
                if (const auto* s = std::get_if<SpriteElement>(&el)) {
                    category = s->category;
                } else if (const auto* c = std::get_if<Character>(&el)) {
                    category = c->figure;
                } else {
                    continue;
                }
                draw_sprite(category, Rect{x, y, side, side}, texts);
                x += side;
            }
        }
        if (bubble && art.h > 0) draw_bubble(*bubble, bubble_area, texts);

        texts += text_block(content.x + content.w / 2, content.y + content.h - caption_h + fs, fs, caption_lines, caption);
        out += texts;
        out += "</g>";
    }

private:
    static std::size_t chars_for(double width, double font) {
        return static_cast<std::size_t>(std::max(1.0, std::floor(width / (font * kCharWidth))));
    }

    static std::string text_tag(double cx, double baseline, double font, std::string_view content) {
        return fmt::format(
            R"(<text x="{}" y="{}" font-family="sans-serif" font-size="{}" text-anchor="middle">{}</text>)", num(cx),
            num(baseline), num(font), xml_escape(content));
    }

    // Wrapped text stays one element, one tspan per line; the unwrapped string
    // goes in aria-label so the phrase remains searchable.
    static std::string text_block(double cx, double baseline, double font, const std::vector<std::string>& lines,
                                  std::string_view full) {
        if (lines.empty()) return {};
        if (lines.size() == 1 && lines.front() == full) return text_tag(cx, baseline, font, full);
        std::string out = fmt::format(
            R"(<text x="{}" y="{}" font-family="sans-serif" font-size="{}" text-anchor="middle" aria-label="{}">)",
            num(cx), num(baseline), num(font), xml_escape(full));
        double y = baseline;
        for (const auto& line : lines) {
            out += fmt::format(R"(<tspan x="{}" y="{}">{}</tspan>)", num(cx), num(y), xml_escape(line));
            y += font * kLineHeight;
        }
        return out + "</text>";
    }

    static std::string points(const Stroke& stroke, const Rect& box) {
        std::string pts;
        for (const auto& p : stroke) {
            if (!pts.empty()) pts.push_back(' ');
            pts += num(box.x + p.x * box.w) + "," + num(box.y + p.y * box.h);
        }
        return pts;
    }

    void draw_sprite(const std::string& category, const Rect& box, std::string& texts) {
        ResolvedSprite resolved = get(sprites_, category);
        out += fmt::format("<g class=\"sprite\" data-category=\"{}\"{}>", xml_escape(resolved.category),
                           resolved.placeholder ? " data-placeholder=\"true\"" : "");
        for (const auto& stroke : resolved.sprite.strokes) {
            out += fmt::format(
                R"(<polyline points="{}" fill="none" stroke="#222222" stroke-width="1.50" stroke-linecap="round" stroke-linejoin="round"{}/>)",
                points(stroke, box), resolved.placeholder ? R"( stroke-dasharray="4.00,3.00")" : "");
        }
        out += "</g>";
        if (resolved.placeholder && !resolved.category.empty()) {
            const double fs = std::min(layout_.font_size * 0.7, box.h / 3);
            auto lines = wrap_text(resolved.category, chars_for(box.w * 0.8, fs), 1);
            if (!lines.empty()) texts += text_tag(box.x + box.w / 2, box.y + box.h / 2 + fs / 3, fs, lines.front());
        }
    }

    void draw_bubble(const SpeechBubble& bubble, const Rect& box, std::string& texts) {
        auto it = sprites_.entries.find(glyph::kBubble);
        const Sprite shape = it != sprites_.entries.end() ? it->second : SpriteSet::builtins().entries.at("bubble");
        out += "<g class=\"bubble\">";
        for (const auto& stroke : shape.strokes) {
            out += fmt::format(R"(<polyline points="{}" fill="#ffffff" stroke="#000000" stroke-width="1.50"/>)",
                               points(stroke, box));
        }
        out += "</g>";
        // text area of the bubble glyph: x in [0.1, 0.9], y in [0.05, 0.75]
        const Rect inner{box.x + box.w * 0.1, box.y + box.h * 0.05, box.w * 0.8, box.h * 0.7};
        const double fs = std::min(layout_.font_size, inner.h / kLineHeight);
        if (fs <= 0) return;
        const auto max_lines = static_cast<std::size_t>(std::clamp(std::floor(inner.h / (fs * kLineHeight)), 1.0, 3.0));
        auto lines = wrap_text(bubble.content, chars_for(inner.w, fs), max_lines);
        const double block = static_cast<double>(lines.size()) * fs * kLineHeight;
        texts += text_block(inner.x + inner.w / 2, inner.y + (inner.h - block) / 2 + fs, fs, lines, bubble.content);
    }

    const SpriteSet& sprites_;
    const Layout& layout_;
};

}  // namespace

void validate(const Layout& l) {
    if (!(l.panel_w > 0 && l.panel_h > 0 && l.gutter > 0 && l.margin > 0 && l.font_size > 0 && l.padding > 0)) {
        throw InvalidInput("layout sizes must be positive");
    }
    if (!(l.dim_opacity > 0 && l.dim_opacity <= 1)) throw InvalidInput("dim_opacity must be in (0, 1]");
    if (2 * l.padding >= std::min(l.panel_w, l.panel_h)) throw InvalidInput("padding leaves no room for content");
}

std::vector<std::string> wrap_text(std::string_view text, std::size_t max_chars, std::size_t max_lines) {
    max_chars = std::max<std::size_t>(max_chars, 2);
    max_lines = std::max<std::size_t>(max_lines, 1);

    std::vector<std::string> lines;
    std::string current;
    std::size_t current_len = 0;
    auto flush = [&] {
        lines.push_back(current);
        current.clear();
        current_len = 0;
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(' ', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view word = text.substr(pos, end - pos);
        pos = end + 1;
        if (word.empty()) {
            if (end == text.size()) break;
            continue;
        }
        auto cps = code_points(word);
        if (current_len > 0 && current_len + 1 + cps.size() <= max_chars) {
            current.push_back(' ');
            current += word;
            current_len += 1 + cps.size();
        } else {
            if (current_len > 0) flush();
            // hard-break words longer than a line
            std::size_t i = 0;
            for (; cps.size() - i > max_chars; i += max_chars) {
                for (std::size_t k = 0; k < max_chars; ++k) current += cps[i + k];
                flush();
            }
            for (; i < cps.size(); ++i) current += cps[i];
            current_len = length(current);
        }
        if (end == text.size()) break;
    }
    if (current_len > 0) flush();

    if (lines.size() > max_lines) {
        lines.resize(max_lines);
        auto cps = code_points(lines.back());
        std::string last;
        for (std::size_t i = 0; i < std::min(cps.size(), max_chars - 1); ++i) last += cps[i];
        while (!last.empty() && last.back() == ' ') last.pop_back();
        lines.back() = last + std::string(kEllipsis);
    }
    return lines;
}

std::string render_svg(const ComicDoc& doc, const SpriteSet& sprites, const Layout& layout) {
    validate(layout);
    std::size_t columns = 0;
    for (const auto& row : doc.rows) columns = std::max(columns, row.panels.size());
    const auto ncols = static_cast<double>(columns);
    const auto nrows = static_cast<double>(doc.rows.size());
    const double width = 2 * layout.margin + ncols * layout.panel_w + std::max(0.0, ncols - 1) * layout.gutter;
    const double height = 2 * layout.margin + nrows * layout.panel_h + std::max(0.0, nrows - 1) * layout.gutter;

    SvgWriter w(sprites, layout);
    w.out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    w.out += fmt::format(
        R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)",
        num(width), num(height));
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        const Row& row = doc.rows[r];
        const double y = layout.margin + static_cast<double>(r) * (layout.panel_h + layout.gutter);
        const bool dim = !row.executed && doc.show_unexecuted == Unexecuted::Dimmed;
        w.out += fmt::format("\n<g class=\"row\" data-line=\"{}\" data-executed=\"{}\"{}>", row.code_line,
                             row.executed ? "true" : "false",
                             dim ? " opacity=\"" + num(layout.dim_opacity) + "\"" : std::string());
        for (std::size_t j = 0; j < row.panels.size(); ++j) {
            const double x = layout.margin + static_cast<double>(j) * (layout.panel_w + layout.gutter);
            w.panel(row.panels[j], Rect{x, y, layout.panel_w, layout.panel_h});
        }
        w.out += "</g>";
    }
    if (!doc.rows.empty()) w.out += "\n";
    w.out += "</svg>\n";
    return std::move(w.out);
}

}  // namespace codetoon
