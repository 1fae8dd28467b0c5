#include "codetoon/sprites.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "codetoon/errors.hpp"

namespace codetoon {

namespace {

Stroke ellipse(double cx, double cy, double rx, double ry, int n) {
    Stroke s;
    for (int k = 0; k <= n; ++k) {
        double t = 2 * std::numbers::pi * k / n;
        s.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
    }
    return s;
}

std::string normalize(std::string_view name) {
    auto b = name.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = name.find_last_not_of(" \t\r\n");
    std::string out(name.substr(b, e - b + 1));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Sprite parse_sprite(const nlohmann::json& strokes, const std::string& name) {
    if (!strokes.is_array()) throw SpriteFormatError("'" + name + "': strokes must be an array");
    Sprite sprite;
    for (const auto& sj : strokes) {
        if (!sj.is_array() || sj.size() < 2) {
            throw SpriteFormatError("'" + name + "': every stroke needs at least 2 points");
        }
        Stroke stroke;
        for (const auto& pj : sj) {
            if (!pj.is_array() || pj.size() != 2 || !pj[0].is_number() || !pj[1].is_number()) {
                throw SpriteFormatError("'" + name + "': points must be [x, y] number pairs");
            }
            Point p{pj[0].get<double>(), pj[1].get<double>()};
            if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
                throw SpriteFormatError("'" + name + "': coordinates must lie in [0,1]");
            }
            stroke.push_back(p);
        }
        sprite.strokes.push_back(std::move(stroke));
    }
    if (sprite.strokes.empty()) throw SpriteFormatError("'" + name + "': no strokes");
    return sprite;
}

}  // namespace

SpriteSet SpriteSet::builtins() {
    SpriteSet set;
    set.entries[std::string(glyph::kStickFigure)] = Sprite{{
        ellipse(0.5, 0.17, 0.11, 0.11, 16),
        {{0.5, 0.28}, {0.5, 0.62}},
        {{0.26, 0.44}, {0.5, 0.36}, {0.74, 0.44}},
        {{0.3, 0.95}, {0.5, 0.62}, {0.7, 0.95}},
    }};
    set.entries[std::string(glyph::kBubble)] = Sprite{{
        {{0.1, 0.05}, {0.9, 0.05}, {0.95, 0.1}, {0.95, 0.7}, {0.9, 0.75}, {0.35, 0.75},
         {0.15, 0.95}, {0.22, 0.75}, {0.1, 0.75}, {0.05, 0.7}, {0.05, 0.1}, {0.1, 0.05}},
    }};
    set.entries[std::string(glyph::kFrame)] = Sprite{{
        {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}},
    }};
    set.entries[std::string(glyph::kPlaceholder)] = Sprite{{
        {{0.1, 0.1}, {0.9, 0.1}, {0.9, 0.9}, {0.1, 0.9}, {0.1, 0.1}},
        {{0.1, 0.1}, {0.9, 0.9}},
        {{0.9, 0.1}, {0.1, 0.9}},
    }};
    return set;
}

SpriteSet sprites_from_ndjson(std::string_view text) {
    SpriteSet set = SpriteSet::builtins();
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw SpriteFormatError("line " + std::to_string(line_no) + ": invalid JSON");
        }
        if (!j.is_object() || !j.contains("name") || !j["name"].is_string() || !j.contains("strokes")) {
            throw SpriteFormatError("line " + std::to_string(line_no) + ": expected {\"name\", \"strokes\"}");
        }
        auto name = j["name"].get<std::string>();
        if (name.empty() || normalize(name) != name) {
            throw SpriteFormatError("line " + std::to_string(line_no) + ": name must be lowercase and trimmed");
        }
        if (!seen.insert(name).second) throw SpriteFormatError("duplicate sprite '" + name + "'");
        set.entries[name] = parse_sprite(j["strokes"], name);
    }
    return set;
}

SpriteSet load_sprites(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpriteFormatError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sprites_from_ndjson(buf.str());
}

ResolvedSprite get(const SpriteSet& set, std::string_view category) {
    std::string key = normalize(category);
    if (auto it = set.entries.find(key); !key.empty() && it != set.entries.end()) {
        return {key, it->second, false};
    }
    auto ph = set.entries.find(glyph::kPlaceholder);
    Sprite sprite = ph != set.entries.end() ? ph->second : SpriteSet::builtins().entries.at("placeholder");
    return {std::string(category), std::move(sprite), true};
}

nlohmann::json to_json(const ResolvedSprite& sprite) {
    nlohmann::json strokes = nlohmann::json::array();
    for (const auto& s : sprite.sprite.strokes) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : s) pts.push_back({p.x, p.y});
        strokes.push_back(std::move(pts));
    }
    return {{"name", sprite.category}, {"placeholder", sprite.placeholder}, {"strokes", strokes}};
}

}  // namespace codetoon
