#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "codetoon/comic.hpp"
#include "codetoon/sprites.hpp"

namespace codetoon {

/// Grid geometry in pixels.
struct Layout {
    double panel_w = 160;
    double panel_h = 120;
    double gutter = 8;
    double margin = 16;
    double font_size = 14;
    double dim_opacity = 0.4;  // unexecuted rows, when the comic dims them
    double padding = 8;        // frame to content box
};

/// Throws InvalidInput unless all sizes are positive and dim_opacity is in (0, 1].
void validate(const Layout& layout);

/// One band of panels per row, stacked top to bottom from the left margin.
/// Output depends only on the inputs; numbers carry two decimals.
std::string render_svg(const ComicDoc& doc, const SpriteSet& sprites, const Layout& layout = {});

/// Greedy word wrap to `max_chars` code points per line, at most `max_lines`
/// lines; overflow ends the last line with an ellipsis.
std::vector<std::string> wrap_text(std::string_view text, std::size_t max_chars, std::size_t max_lines = 3);

}  // namespace codetoon
