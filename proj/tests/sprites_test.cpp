#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "codetoon/errors.hpp"
#include "codetoon/sprites.hpp"
#include "support.hpp"

using namespace codetoon;

namespace {

const std::string kPath = std::string(CODETOON_DATA_DIR) + "/sprites.ndjson";

bool in_unit_box(const Sprite& s) {
    for (const auto& stroke : s.strokes) {
        if (stroke.size() < 2) return false;
        for (const auto& p : stroke)
            if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("bundled set") {
    const SpriteSet set = load_sprites(kPath);
    CHECK(set.entries.count("apple") == 1);
    CHECK(set.entries.count("banana") == 1);
    for (auto g : {glyph::kStickFigure, glyph::kBubble, glyph::kFrame, glyph::kPlaceholder})
        CHECK(set.entries.count(std::string(g)) == 1);
    for (const auto& [name, sprite] : set.entries) {
        CAPTURE(name);
        CHECK(in_unit_box(sprite));
        CHECK_FALSE(sprite.strokes.empty());
    }
}

TEST_CASE("bundled sprite names are lexicon categories") {
    const auto lex = nlohmann::json::parse(testsupport::slurp(std::string(CODETOON_DATA_DIR) + "/lexicon.json"));
    const auto& cats = lex.at("categories");
    const SpriteSet builtins = SpriteSet::builtins();
    for (const auto& [name, sprite] : load_sprites(kPath).entries) {
        if (builtins.entries.count(name)) continue;
        CAPTURE(name);
        CHECK(std::find(cats.begin(), cats.end(), name) != cats.end());
    }
}

TEST_CASE("empty input gives just the built-ins") {
    const SpriteSet set = sprites_from_ndjson("");
    CHECK(set.entries.size() == SpriteSet::builtins().entries.size());
    CHECK(sprites_from_ndjson("\n\n").entries.size() == set.entries.size());
}

TEST_CASE("format errors") {
    CHECK_THROWS_AS(sprites_from_ndjson(R"({"name":"dot","strokes":[[[0.5,0.5]]]})"), SpriteFormatError);
    CHECK_THROWS_AS(sprites_from_ndjson(R"({"name":"far","strokes":[[[0,0],[1.5,0]]]})"), SpriteFormatError);
    CHECK_THROWS_AS(sprites_from_ndjson(R"({"name":"Cat","strokes":[[[0,0],[1,1]]]})"), SpriteFormatError);
    CHECK_THROWS_AS(sprites_from_ndjson("{oops"), SpriteFormatError);
    CHECK_THROWS_AS(sprites_from_ndjson(R"({"name":"a","strokes":[[[0,0],[1,1]]]}
{"name":"a","strokes":[[[0,0],[1,1]]]})"),
                    SpriteFormatError);
    CHECK_THROWS_AS(load_sprites("/nonexistent.ndjson"), SpriteFormatError);
}

TEST_CASE("get") {
    const SpriteSet set = load_sprites(kPath);
    const auto apple = get(set, "apple");
    CHECK_FALSE(apple.placeholder);
    CHECK(apple.sprite == set.entries.at("apple"));
    CHECK(get(set, "  Apple ").sprite == apple.sprite);

    const auto miss = get(set, "nonexistent-thing");
    CHECK(miss.placeholder);
    CHECK(miss.category == "nonexistent-thing");
    CHECK(miss.sprite == set.entries.at("placeholder"));

    CHECK(get(set, "").placeholder);
    CHECK(get(set, "stick-figure").sprite == set.entries.at("stick-figure"));
}

TEST_CASE("property: get is total and always in the unit box") {
    const SpriteSet set = load_sprites(kPath);
    std::mt19937 rng(1);
    for (int i = 0; i < 500; ++i) {
        std::string key;
        for (int n = testsupport::rnd(rng, 0, 12); n > 0; --n) key += static_cast<char>(testsupport::rnd(rng, 1, 255));
        const auto r = get(set, key);
        CHECK(in_unit_box(r.sprite));
    }
}

TEST_CASE("json form") {
    const auto j = to_json(get(load_sprites(kPath), "apple"));
    CHECK(j.at("name") == "apple");
    CHECK(j.at("placeholder") == false);
    CHECK(j.at("strokes").is_array());
    CHECK(j.at("strokes").at(0).at(0).size() == 2);
}
