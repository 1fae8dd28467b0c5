#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace codetoon {

struct Point {
    double x = 0;
    double y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

using Stroke = std::vector<Point>;

/// Vector sketch in the unit square, y pointing down.
struct Sprite {
    std::vector<Stroke> strokes;
    friend bool operator==(const Sprite&, const Sprite&) = default;
};

namespace glyph {
inline constexpr std::string_view kStickFigure = "stick-figure";
inline constexpr std::string_view kBubble = "bubble";
inline constexpr std::string_view kFrame = "frame";
inline constexpr std::string_view kPlaceholder = "placeholder";
}  // namespace glyph

struct SpriteSet {
    std::map<std::string, Sprite, std::less<>> entries;

    /// Just the built-in glyphs.
    static SpriteSet builtins();
};

/// Result of a lookup: the sprite to draw, and whether it is the placeholder
/// standing in for `category`.
struct ResolvedSprite {
    std::string category;
    Sprite sprite;
    bool placeholder = false;
};

/// Reads an NDJSON file of {"name", "strokes"} records on top of the
/// built-ins. Throws SpriteFormatError.
SpriteSet load_sprites(const std::filesystem::path& path);
SpriteSet sprites_from_ndjson(std::string_view text);

/// Case-insensitive, whitespace-trimmed lookup; never fails.
ResolvedSprite get(const SpriteSet& set, std::string_view category);

nlohmann::json to_json(const ResolvedSprite& sprite);

}  // namespace codetoon
