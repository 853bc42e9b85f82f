#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stratsim/common.hpp"
#include "stratsim/game.hpp"

namespace stratsim {

struct LevelParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An immutable map: terrain, resources and the two capital positions.
// Symmetric under 180-degree rotation so neither seat is favoured.
struct Level {
    int size = 11;
    std::uint64_t seed = 0;
    std::vector<Tile> tiles; // terrain + resource only; road/owner unused
    std::array<std::pair<int, int>, 2> capitals{};

    int idx(int x, int y) const { return y * size + x; }

    std::vector<std::pair<int, int>> villages() const {
        std::vector<std::pair<int, int>> out;
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                if (tiles[idx(x, y)].terrain == TerrainKind::Village) out.emplace_back(x, y);
        return out;
    }

    friend bool operator==(const Level& a, const Level& b) {
        if (a.size != b.size || a.seed != b.seed || a.capitals != b.capitals) return false;
        for (std::size_t i = 0; i < a.tiles.size(); ++i)
            if (a.tiles[i].terrain != b.tiles[i].terrain ||
                a.tiles[i].resource != b.tiles[i].resource)
                return false;
        return true;
    }
};

namespace detail {

inline char terrain_glyph(TerrainKind t) {
    switch (t) {
    case TerrainKind::Plain: return '.';
    case TerrainKind::Forest: return 'f';
    case TerrainKind::Mountain: return 'm';
    case TerrainKind::ShallowWater: return 's';
    case TerrainKind::DeepWater: return 'd';
    case TerrainKind::City: return 'C';
    case TerrainKind::Village: return 'v';
    case TerrainKind::Ruins: return 'r';
    }
    return '?';
}

inline char resource_glyph(ResourceKind r) {
    switch (r) {
    case ResourceKind::None: return '.';
    case ResourceKind::Fruit: return 'F';
    case ResourceKind::Crop: return 'c';
    case ResourceKind::Animal: return 'a';
    case ResourceKind::Fish: return 'h';
    case ResourceKind::Ore: return 'o';
    }
    return '?';
}

inline bool terrain_from_glyph(char c, TerrainKind& out) {
    switch (c) {
    case '.': out = TerrainKind::Plain; return true;
    case 'f': out = TerrainKind::Forest; return true;
    case 'm': out = TerrainKind::Mountain; return true;
    case 's': out = TerrainKind::ShallowWater; return true;
    case 'd': out = TerrainKind::DeepWater; return true;
    case 'C': out = TerrainKind::City; return true;
    case 'v': out = TerrainKind::Village; return true;
    case 'r': out = TerrainKind::Ruins; return true;
    default: return false;
    }
}

inline bool resource_from_glyph(char c, ResourceKind& out) {
    switch (c) {
    case '.': out = ResourceKind::None; return true;
    case 'F': out = ResourceKind::Fruit; return true;
    case 'c': out = ResourceKind::Crop; return true;
    case 'a': out = ResourceKind::Animal; return true;
    case 'h': out = ResourceKind::Fish; return true;
    case 'o': out = ResourceKind::Ore; return true;
    default: return false;
    }
}

inline bool capitals_connected(const Level& lvl) {
    // land or shallow water counts as passable
    std::vector<char> seen(lvl.tiles.size(), 0);
    std::vector<int> queue;
    auto passable = [&](int i) {
        return lvl.tiles[i].terrain != TerrainKind::DeepWater;
    };
    int start = lvl.idx(lvl.capitals[0].first, lvl.capitals[0].second);
    int goal = lvl.idx(lvl.capitals[1].first, lvl.capitals[1].second);
    seen[start] = 1;
    queue.push_back(start);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int cur = queue[qi];
        if (cur == goal) return true;
        int cx = cur % lvl.size, cy = cur / lvl.size;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= lvl.size || ny < 0 || ny >= lvl.size) continue;
                int ni = lvl.idx(nx, ny);
                if (seen[ni] || !passable(ni)) continue;
                seen[ni] = 1;
                queue.push_back(ni);
            }
    }
    return false;
}

inline Level generate_level_once(std::uint64_t seed, int size) {
    Level lvl;
    lvl.size = size;
    lvl.seed = seed;
    lvl.tiles.assign(static_cast<std::size_t>(size) * size, Tile{});
    Rng rng(seed);
    auto pct = [&](int p) { return static_cast<int>(rng() % 100) < p; };

    const int total = size * size;
    for (int i = 0; i < total / 2; ++i) {
        Tile t;
        int roll = static_cast<int>(rng() % 100);
        if (roll < 44) t.terrain = TerrainKind::Plain;
        else if (roll < 64) t.terrain = TerrainKind::Forest;
        else if (roll < 74) t.terrain = TerrainKind::Mountain;
        else if (roll < 89) t.terrain = TerrainKind::ShallowWater;
        else if (roll < 94) t.terrain = TerrainKind::DeepWater;
        else if (roll < 97) t.terrain = TerrainKind::Ruins;
        else t.terrain = TerrainKind::Village;

        switch (t.terrain) {
        case TerrainKind::Plain:
            if (pct(15)) t.resource = ResourceKind::Fruit;
            else if (pct(12)) t.resource = ResourceKind::Crop;
            break;
        case TerrainKind::Forest:
            if (pct(25)) t.resource = ResourceKind::Animal;
            break;
        case TerrainKind::Mountain:
            if (pct(35)) t.resource = ResourceKind::Ore;
            break;
        case TerrainKind::ShallowWater:
            if (pct(30)) t.resource = ResourceKind::Fish;
            break;
        default:
            break;
        }
        lvl.tiles[i] = t;
        lvl.tiles[total - 1 - i] = t; // 180-degree rotation symmetry
    }
    if (total % 2) lvl.tiles[total / 2] = Tile{};

    // capitals in opposite quadrants, mirrored
    int margin = 1;
    int span = size / 2 - margin;
    int cx = margin + static_cast<int>(rng() % span);
    int cy = margin + static_cast<int>(rng() % span);
    lvl.capitals[0] = {cx, cy};
    lvl.capitals[1] = {size - 1 - cx, size - 1 - cy};

    auto stamp_capital = [&](int px, int py) {
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int x = px + dx, y = py + dy;
                if (x < 0 || x >= size || y < 0 || y >= size) continue;
                Tile& t = lvl.tiles[lvl.idx(x, y)];
                if (is_water(t.terrain) || t.terrain == TerrainKind::Village ||
                    t.terrain == TerrainKind::City || t.terrain == TerrainKind::Ruins) {
                    t.terrain = TerrainKind::Plain;
                    t.resource = ResourceKind::None;
                }
            }
        Tile& c = lvl.tiles[lvl.idx(px, py)];
        c.terrain = TerrainKind::City;
        c.resource = ResourceKind::None;
    };
    stamp_capital(lvl.capitals[0].first, lvl.capitals[0].second);
    stamp_capital(lvl.capitals[1].first, lvl.capitals[1].second);

    // no villages hugging a capital
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            Tile& t = lvl.tiles[lvl.idx(x, y)];
            if (t.terrain != TerrainKind::Village) continue;
            for (const auto& [px, py] : lvl.capitals)
                if (chebyshev(x, y, px, py) <= 2) t.terrain = TerrainKind::Plain;
        }
    return lvl;
}

} // namespace detail

inline Level generate_level(std::uint64_t seed, int size = 11) {
    if (size < 7) throw std::invalid_argument("generate_level: size must be >= 7");
    for (int attempt = 0; attempt < 32; ++attempt) {
        Level lvl = detail::generate_level_once(
            attempt == 0 ? seed : derive_seed(seed, 0xA77E, attempt), size);
        lvl.seed = seed;
        if (detail::capitals_connected(lvl)) return lvl;
    }
    throw std::runtime_error("generate_level: could not produce connected capitals");
}

inline std::string serialize_level(const Level& lvl) {
    std::ostringstream out;
    out << "size = " << lvl.size << "\n";
    out << "seed = " << lvl.seed << "\n";
    out << "capital0 = " << lvl.capitals[0].first << " " << lvl.capitals[0].second << "\n";
    out << "capital1 = " << lvl.capitals[1].first << " " << lvl.capitals[1].second << "\n";
    out << "map:\n";
    for (int y = 0; y < lvl.size; ++y) {
        for (int x = 0; x < lvl.size; ++x) {
            const Tile& t = lvl.tiles[lvl.idx(x, y)];
            if (x) out << ' ';
            out << detail::terrain_glyph(t.terrain) << detail::resource_glyph(t.resource);
        }
        out << "\n";
    }
    return out.str();
}

inline Level parse_level(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Level lvl;
    lvl.size = -1;
    bool sawSeed = false;
    int capCount = 0;
    int lineNo = 0;
    auto fail = [&](int col, const std::string& msg) -> void {
        throw LevelParseError("level parse error at line " + std::to_string(lineNo) +
                              ", column " + std::to_string(col) + ": " + msg);
    };

    // header
    bool inMap = false;
    int row = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!inMap) {
            if (line.empty() || line[0] == '#') continue;
            if (line == "map:") {
                if (lvl.size < 0) fail(1, "missing 'size' before map");
                if (capCount != 2) fail(1, "capital count != 2");
                lvl.tiles.assign(static_cast<std::size_t>(lvl.size) * lvl.size, Tile{});
                inMap = true;
                continue;
            }
            std::istringstream ls(line);
            std::string key, eq;
            ls >> key >> eq;
            if (eq != "=") fail(1, "expected 'key = value'");
            if (key == "size") {
                if (!(ls >> lvl.size) || lvl.size < 1) fail(1, "bad size");
            } else if (key == "seed") {
                if (!(ls >> lvl.seed)) fail(1, "bad seed");
                sawSeed = true;
            } else if (key == "capital0" || key == "capital1") {
                int x, y;
                if (!(ls >> x >> y)) fail(1, "bad capital coordinates");
                lvl.capitals[key == "capital1"] = {x, y};
                ++capCount;
            } else {
                fail(1, "unknown header key '" + key + "'");
            }
            continue;
        }
        // map rows
        if (line.empty()) continue;
        if (row >= lvl.size) fail(1, "too many map rows");
        int x = 0;
        for (std::size_t col = 0; col < line.size();) {
            if (line[col] == ' ') { ++col; continue; }
            if (col + 1 >= line.size()) fail(static_cast<int>(col) + 1, "truncated tile pair");
            if (x >= lvl.size) fail(static_cast<int>(col) + 1, "row is longer than declared size");
            Tile t;
            if (!detail::terrain_from_glyph(line[col], t.terrain))
                fail(static_cast<int>(col) + 1, std::string("unknown terrain glyph '") + line[col] + "'");
            if (!detail::resource_from_glyph(line[col + 1], t.resource))
                fail(static_cast<int>(col) + 2, std::string("unknown resource glyph '") + line[col + 1] + "'");
            lvl.tiles[lvl.idx(x, row)] = t;
            ++x;
            col += 2;
        }
        if (x != lvl.size) fail(static_cast<int>(line.size()), "row is shorter than declared size");
        ++row;
    }
    if (!inMap) { lineNo = std::max(1, lineNo); fail(1, "missing 'map:' section"); }
    if (row != lvl.size) fail(1, "expected " + std::to_string(lvl.size) + " map rows, got " + std::to_string(row));
    if (!sawSeed) fail(1, "missing 'seed'");
    for (int c = 0; c < 2; ++c) {
        auto [x, y] = lvl.capitals[c];
        if (x < 0 || x >= lvl.size || y < 0 || y >= lvl.size)
            fail(1, "capital out of bounds");
        if (lvl.tiles[lvl.idx(x, y)].terrain != TerrainKind::City)
            fail(1, "capital tile is not a city tile");
    }
    return lvl;
}

inline Level load_level(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open level file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_level(ss.str());
}

// Builds the starting position: one capital city and one warrior per player.
inline GameState initial_state(const Rules& rules, const Level& lvl) {
    GameState s;
    s.size = static_cast<std::int8_t>(lvl.size);
    s.rngSeed = lvl.seed;
    s.board = lvl.tiles;
    for (auto& t : s.board) { t.road = false; t.ownerCity = -1; }

    for (int p = 0; p < 2; ++p) {
        auto [x, y] = lvl.capitals[p];
        City c;
        c.id = s.nextCityId++;
        c.owner = static_cast<std::int8_t>(p);
        c.x = static_cast<std::int8_t>(x);
        c.y = static_cast<std::int8_t>(y);
        c.level = 1;
        c.capital = true;
        s.cities.push_back(c);
        s.board[s.idx(x, y)].ownerCity = c.id;
        detail::claim_border(s, s.cities.back(), rules.city.borderRadius);

        Tribe& tribe = s.tribes[p];
        tribe.playerId = static_cast<std::int8_t>(p);
        tribe.capitalCityId = c.id;
        detail::earn(tribe, rules.city.startStars);

        detail::spawn_unit(rules, s, p, UnitTypeId::Warrior, x, y, UnitStatus::Fresh);
    }
    start_of_turn(rules, s); // player 0's first income
    detail::refresh_scores(rules, s);
    return s;
}

} // namespace stratsim
