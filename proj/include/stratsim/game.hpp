#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsim/common.hpp"
#include "stratsim/rules.hpp"

namespace stratsim {

enum class TerrainKind : std::uint8_t {
    Plain, Forest, Mountain, ShallowWater, DeepWater, City, Village, Ruins
};

enum class ResourceKind : std::uint8_t { None, Fruit, Crop, Animal, Fish, Ore };

inline bool is_land(TerrainKind t) {
    return t != TerrainKind::ShallowWater && t != TerrainKind::DeepWater;
}

inline bool is_water(TerrainKind t) { return !is_land(t); }

struct Tile {
    TerrainKind terrain = TerrainKind::Plain;
    ResourceKind resource = ResourceKind::None;
    bool road = false;
    std::int16_t ownerCity = -1; // city id claiming this tile, -1 if none
};

enum class UnitStatus : std::uint8_t { Fresh, Moved, Attacked, Finished };

struct Unit {
    std::int16_t id = -1;
    UnitTypeId type = UnitTypeId::Warrior;
    std::int8_t owner = 0;
    std::int8_t x = 0, y = 0;
    std::int16_t hp = 0;
    std::int8_t kills = 0;
    bool veteran = false;
    UnitStatus status = UnitStatus::Fresh;
    UnitTypeId carried = UnitTypeId::Warrior; // original type while embarked
};

inline bool is_naval(UnitTypeId t) {
    return t == UnitTypeId::Boat || t == UnitTypeId::Ship || t == UnitTypeId::Battleship;
}

struct Building {
    BuildingKind kind = BuildingKind::None;
    std::int8_t x = 0, y = 0;
    std::int8_t popGranted = 0;  // population granted at build time
    std::int8_t prodGranted = 0; // production granted at build time
};

struct City {
    std::int16_t id = -1;
    std::int8_t owner = -1; // -1 is neutral (captured villages become owned)
    std::int8_t x = 0, y = 0;
    std::int8_t level = 1;
    std::int16_t population = 0;
    bool capital = false;
    std::int16_t extraProduction = 0;
    std::vector<Building> buildings;
};

struct Tribe {
    std::int8_t playerId = 0;
    std::int32_t stars = 0;
    std::int32_t score = 0; // running maximum of score_of; never decreases
    std::uint32_t techs = 0; // bitset over TechId
    std::int16_t capitalCityId = -1;
    std::int64_t starsEarned = 0;
    std::int64_t starsSpent = 0;
    bool whalingBonusClaimed = false;

    bool has_tech(TechId t) const {
        return t == TechId::None || (techs >> static_cast<int>(t)) & 1u;
    }
    int tech_count() const { return std::popcount(techs); }
};

enum class ActionType : std::uint8_t {
    EndTurn, Destroy, Examine, HealOthers, Recover, Upgrade, MakeVeteran,
    Capture, Disband, BuildRoad, BurnForest, GrowForest, GatherResource,
    Research, ClearForest, LevelUp, Build, Spawn, Convert, Move, Attack,
    Count
};
inline constexpr int num_action_types = static_cast<int>(ActionType::Count);

inline const char* action_type_name(ActionType t) {
    static constexpr const char* names[] = {
        "EndTurn", "Destroy", "Examine", "HealOthers", "Recover", "Upgrade",
        "MakeVeteran", "Capture", "Disband", "BuildRoad", "BurnForest",
        "GrowForest", "GatherResource", "Research", "ClearForest", "LevelUp",
        "Build", "Spawn", "Convert", "Move", "Attack"};
    return names[static_cast<int>(t)];
}

enum class LevelUpBonus : std::uint8_t { Growth = 0, Military = 1 };

// actor: tribe id for tribe actions, city id for city actions, unit id for
// unit actions. target: tile index or unit id depending on type. arg: tech
// id / unit type / building kind / level-up bonus.
struct Action {
    ActionType type = ActionType::EndTurn;
    std::int16_t actor = 0;
    std::int16_t target = -1;
    std::uint8_t arg = 0;

    friend bool operator==(const Action&, const Action&) = default;
};

inline bool is_tribe_action(ActionType t) {
    return t == ActionType::EndTurn || t == ActionType::BuildRoad ||
           t == ActionType::Research;
}

inline bool is_city_action(ActionType t) {
    switch (t) {
    case ActionType::Destroy: case ActionType::BurnForest:
    case ActionType::GrowForest: case ActionType::GatherResource:
    case ActionType::ClearForest: case ActionType::LevelUp:
    case ActionType::Build: case ActionType::Spawn:
        return true;
    default:
        return false;
    }
}

inline bool is_unit_action(ActionType t) {
    return !is_tribe_action(t) && !is_city_action(t);
}

enum class GameResultKind : std::uint8_t { Ongoing, Winner, ScoreWin };

struct GameResult {
    GameResultKind kind = GameResultKind::Ongoing;
    int player = -1;

    bool terminal() const { return kind != GameResultKind::Ongoing; }
};

struct IllegalActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

inline constexpr int max_turns = 50;

struct GameState {
    std::int8_t size = 11;
    std::int8_t activePlayer = 0;
    std::int8_t turn = 1;
    std::int16_t nextUnitId = 0;
    std::int16_t nextCityId = 0;
    std::uint64_t rngSeed = 0;
    std::vector<Tile> board;
    std::vector<Unit> units;   // kept sorted by id
    std::vector<City> cities;  // kept sorted by id
    std::array<Tribe, 2> tribes{};
    std::int8_t winner = -1;
    GameResultKind winKind = GameResultKind::Ongoing;
    std::uint64_t* fmCalls = nullptr; // observer slot; shared across copies

    int idx(int x, int y) const { return y * size + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < size && y >= 0 && y < size; }
    const Tile& tile(int x, int y) const { return board[idx(x, y)]; }
    Tile& tile(int x, int y) { return board[idx(x, y)]; }

    const Unit* unit_by_id(int id) const {
        for (const auto& u : units)
            if (u.id == id) return &u;
        return nullptr;
    }
    Unit* unit_by_id(int id) {
        for (auto& u : units)
            if (u.id == id) return &u;
        return nullptr;
    }
    const Unit* unit_at(int x, int y) const {
        for (const auto& u : units)
            if (u.x == x && u.y == y) return &u;
        return nullptr;
    }
    const City* city_by_id(int id) const {
        for (const auto& c : cities)
            if (c.id == id) return &c;
        return nullptr;
    }
    City* city_by_id(int id) {
        for (auto& c : cities)
            if (c.id == id) return &c;
        return nullptr;
    }
    const City* city_at(int x, int y) const {
        for (const auto& c : cities)
            if (c.x == x && c.y == y) return &c;
        return nullptr;
    }

    std::uint64_t hash() const {
        std::uint64_t h = fnv1a_init;
        h = fnv1a(h, static_cast<std::uint64_t>(size));
        h = fnv1a(h, static_cast<std::uint64_t>(activePlayer));
        h = fnv1a(h, static_cast<std::uint64_t>(turn));
        h = fnv1a(h, static_cast<std::uint64_t>(nextUnitId));
        h = fnv1a(h, static_cast<std::uint64_t>(nextCityId));
        h = fnv1a(h, rngSeed);
        for (const auto& t : board) {
            std::uint64_t v = static_cast<std::uint64_t>(t.terrain) |
                              (static_cast<std::uint64_t>(t.resource) << 8) |
                              (static_cast<std::uint64_t>(t.road) << 16) |
                              (static_cast<std::uint64_t>(static_cast<std::uint16_t>(t.ownerCity)) << 24);
            h = fnv1a(h, v);
        }
        for (const auto& u : units) {
            h = fnv1a(h, static_cast<std::uint64_t>(u.id));
            std::uint64_t v = static_cast<std::uint64_t>(u.type) |
                              (static_cast<std::uint64_t>(static_cast<std::uint8_t>(u.owner)) << 8) |
                              (static_cast<std::uint64_t>(static_cast<std::uint8_t>(u.x)) << 16) |
                              (static_cast<std::uint64_t>(static_cast<std::uint8_t>(u.y)) << 24) |
                              (static_cast<std::uint64_t>(static_cast<std::uint16_t>(u.hp)) << 32) |
                              (static_cast<std::uint64_t>(static_cast<std::uint8_t>(u.kills)) << 48) |
                              (static_cast<std::uint64_t>(u.veteran) << 56) |
                              (static_cast<std::uint64_t>(u.status) << 57);
            h = fnv1a(h, v);
            h = fnv1a(h, static_cast<std::uint64_t>(u.carried));
        }
        for (const auto& c : cities) {
            h = fnv1a(h, static_cast<std::uint64_t>(c.id));
            std::uint64_t v = static_cast<std::uint64_t>(static_cast<std::uint8_t>(c.owner)) |
                              (static_cast<std::uint64_t>(static_cast<std::uint8_t>(c.x)) << 8) |
                              (static_cast<std::uint64_t>(static_cast<std::uint8_t>(c.y)) << 16) |
                              (static_cast<std::uint64_t>(c.level) << 24) |
                              (static_cast<std::uint64_t>(static_cast<std::uint16_t>(c.population)) << 32) |
                              (static_cast<std::uint64_t>(c.capital) << 48) |
                              (static_cast<std::uint64_t>(static_cast<std::uint16_t>(c.extraProduction)) << 49);
            h = fnv1a(h, v);
            for (const auto& b : c.buildings) {
                std::uint64_t bv = static_cast<std::uint64_t>(b.kind) |
                                   (static_cast<std::uint64_t>(static_cast<std::uint8_t>(b.x)) << 8) |
                                   (static_cast<std::uint64_t>(static_cast<std::uint8_t>(b.y)) << 16) |
                                   (static_cast<std::uint64_t>(static_cast<std::uint8_t>(b.popGranted)) << 24) |
                                   (static_cast<std::uint64_t>(static_cast<std::uint8_t>(b.prodGranted)) << 32);
                h = fnv1a(h, bv);
            }
        }
        for (const auto& t : tribes) {
            h = fnv1a(h, static_cast<std::uint64_t>(t.stars));
            h = fnv1a(h, static_cast<std::uint64_t>(t.score));
            h = fnv1a(h, t.techs);
            h = fnv1a(h, static_cast<std::uint64_t>(t.capitalCityId));
            h = fnv1a(h, static_cast<std::uint64_t>(t.starsEarned));
            h = fnv1a(h, static_cast<std::uint64_t>(t.starsSpent));
            h = fnv1a(h, t.whalingBonusClaimed);
        }
        h = fnv1a(h, static_cast<std::uint64_t>(static_cast<std::uint8_t>(winner)));
        h = fnv1a(h, static_cast<std::uint64_t>(winKind));
        return h;
    }
};

inline int chebyshev(int x0, int y0, int x1, int y1) {
    return std::max(std::abs(x0 - x1), std::abs(y0 - y1));
}

inline int unit_max_hp(const Rules& rules, const Unit& u) {
    int hp = rules.units[static_cast<int>(u.type)].maxHP;
    if (u.veteran) hp += rules.costs.veteranBonusHP;
    return hp;
}

inline int city_production(const Rules& rules, const City& c) {
    (void)rules;
    return c.level + (c.capital ? 1 : 0) + c.extraProduction;
}

// Aggregate possessions of one player; the basis for score and evaluation.
struct Possessions {
    int cities = 0;
    int population = 0;
    int techs = 0;
    int unitCostSum = 0;
    int units = 0;
    int tiles = 0;
    int buildings = 0;
    int production = 0;
};

inline Possessions possessions(const Rules& rules, const GameState& s, int player) {
    Possessions p;
    p.techs = s.tribes[player].tech_count();
    for (const auto& c : s.cities) {
        if (c.owner != player) continue;
        ++p.cities;
        p.population += c.population;
        p.buildings += static_cast<int>(c.buildings.size());
        p.production += city_production(rules, c);
    }
    for (const auto& u : s.units) {
        if (u.owner != player) continue;
        ++p.units;
        p.unitCostSum += rules.units[static_cast<int>(u.type)].cost;
    }
    for (const auto& t : s.board) {
        if (t.ownerCity < 0) continue;
        const City* c = s.city_by_id(t.ownerCity);
        if (c && c->owner == player) ++p.tiles;
    }
    return p;
}

inline int score_of(const Rules& rules, const GameState& s, int player) {
    Possessions p = possessions(rules, s, player);
    const ScoreWeights& w = rules.score;
    return w.city * p.cities + w.population * p.population +
           w.technology * p.techs + w.unitCost * p.unitCostSum +
           w.tile * p.tiles + w.building * p.buildings;
}

inline GameResult terminal_status(const GameState& s) {
    if (s.winKind == GameResultKind::Ongoing) return {};
    return {s.winKind, s.winner};
}

namespace detail {

inline void refresh_scores(const Rules& rules, GameState& s) {
    for (int p = 0; p < 2; ++p)
        s.tribes[p].score = std::max<std::int32_t>(s.tribes[p].score, score_of(rules, s, p));
}

inline void check_capital_win(GameState& s) {
    if (s.winKind != GameResultKind::Ongoing) return;
    for (int p = 0; p < 2; ++p) {
        bool ownsAll = true;
        for (const auto& c : s.cities)
            if (c.capital && c.owner != p) { ownsAll = false; break; }
        if (ownsAll) {
            s.winner = static_cast<std::int8_t>(p);
            s.winKind = GameResultKind::Winner;
            return;
        }
    }
}

inline void earn(Tribe& t, int stars) {
    t.stars += stars;
    t.starsEarned += stars;
}

inline void spend(Tribe& t, int stars) {
    t.stars -= stars;
    t.starsSpent += stars;
}

} // namespace detail

// Movement: 8-neighbour BFS, one movement point per step. Land units stop
// when embarking at an own port; naval units stop when disembarking.
inline void reachable_tiles(const Rules& rules, const GameState& s, const Unit& u,
                            std::vector<std::int16_t>& out) {
    out.clear();
    const Tribe& tribe = s.tribes[u.owner];
    const bool naval = is_naval(u.type);
    int movement = rules.units[static_cast<int>(u.type)].movement;
    if (s.tile(u.x, u.y).road && !naval) ++movement;

    // visited distances, -1 unvisited, -2 occupied by a unit
    thread_local std::vector<std::int16_t> dist;
    dist.assign(s.board.size(), -1);
    for (const auto& v : s.units) dist[s.idx(v.x, v.y)] = -2;
    thread_local std::vector<std::int16_t> queue;
    queue.clear();
    int start = s.idx(u.x, u.y);
    dist[start] = 0;
    queue.push_back(static_cast<std::int16_t>(start));

    auto own_port_at = [&](int x, int y) {
        for (const auto& c : s.cities) {
            if (c.owner != u.owner) continue;
            for (const auto& b : c.buildings)
                if (b.kind == BuildingKind::Port && b.x == x && b.y == y) return true;
        }
        return false;
    };

    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int cur = queue[qi];
        int d = dist[cur];
        if (d >= movement) continue;
        int cx = cur % s.size, cy = cur / s.size;
        // a transfer tile (embark/disembark) ends movement
        if (cur != start) {
            TerrainKind tk = s.board[cur].terrain;
            if (!naval && is_water(tk)) continue;
            if (naval && is_land(tk)) continue;
        }
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nx = cx + dx, ny = cy + dy;
                if (!s.in_bounds(nx, ny)) continue;
                int ni = s.idx(nx, ny);
                if (dist[ni] != -1) continue;
                TerrainKind tk = s.board[ni].terrain;
                bool enterable;
                if (!naval) {
                    if (tk == TerrainKind::Mountain)
                        enterable = tribe.has_tech(TechId::Climbing);
                    else if (tk == TerrainKind::ShallowWater)
                        enterable = own_port_at(nx, ny); // embark
                    else if (tk == TerrainKind::DeepWater)
                        enterable = false;
                    else
                        enterable = true;
                } else {
                    if (tk == TerrainKind::ShallowWater)
                        enterable = true;
                    else if (tk == TerrainKind::DeepWater)
                        enterable = tribe.has_tech(TechId::Navigation);
                    else
                        enterable = true; // disembark onto any land tile
                }
                if (!enterable) continue;
                dist[ni] = static_cast<std::int16_t>(d + 1);
                queue.push_back(static_cast<std::int16_t>(ni));
                out.push_back(static_cast<std::int16_t>(ni));
            }
        }
    }
    std::sort(out.begin(), out.end());
}

// damage = round(attack * hp/maxHP * scale / (attack + defence))
inline int combat_damage(const Rules& rules, const Unit& attacker, const Unit& defender) {
    const UnitStats& as = rules.units[static_cast<int>(attacker.type)];
    const UnitStats& ds = rules.units[static_cast<int>(defender.type)];
    double ratio = static_cast<double>(attacker.hp) / unit_max_hp(rules, attacker);
    double dmg = as.attack * ratio * rules.attackScale / (as.attack + ds.defence);
    return std::max(1, static_cast<int>(std::lround(dmg)));
}

// Single source of truth for legality. Returns nullptr when legal, else the
// violated rule. Used both by apply() and (as a final filter) by
// legal_actions().
inline const char* validate(const Rules& rules, const GameState& s, const Action& a) {
    if (s.winKind != GameResultKind::Ongoing) return "game is terminal";
    const int player = s.activePlayer;
    const Tribe& tribe = s.tribes[player];

    if (is_tribe_action(a.type)) {
        if (a.actor != player) return "tribe action actor must be the active player";
    }

    switch (a.type) {
    case ActionType::EndTurn:
        return nullptr;

    case ActionType::BuildRoad: {
        if (!tribe.has_tech(TechId::Roads)) return "BuildRoad requires Roads technology";
        if (tribe.stars < rules.costs.road) return "not enough stars for road";
        if (a.target < 0 || a.target >= static_cast<int>(s.board.size())) return "road target out of bounds";
        const Tile& t = s.board[a.target];
        if (t.road) return "tile already has a road";
        if (t.terrain != TerrainKind::Plain && t.terrain != TerrainKind::Forest)
            return "roads require plain or forest terrain";
        if (t.ownerCity >= 0) {
            const City* c = s.city_by_id(t.ownerCity);
            if (c && c->owner >= 0 && c->owner != player) return "cannot build roads in enemy territory";
        }
        return nullptr;
    }

    case ActionType::Research: {
        if (a.arg >= num_techs) return "unknown technology";
        TechId tech = static_cast<TechId>(a.arg);
        if (tribe.has_tech(tech)) return "technology already researched";
        const TechInfo& info = rules.techs[a.arg];
        if (info.parent != TechId::None && !tribe.has_tech(info.parent))
            return "parent technology not researched";
        if (tribe.stars < info.cost) return "not enough stars for research";
        return nullptr;
    }

    default:
        break;
    }

    if (is_city_action(a.type)) {
        const City* c = s.city_by_id(a.actor);
        if (!c) return "no such city";
        if (c->owner != player) return "city not owned by active player";
        const bool needsTile = a.type != ActionType::LevelUp && a.type != ActionType::Spawn;
        const Tile* t = nullptr;
        if (needsTile) {
            if (a.target < 0 || a.target >= static_cast<int>(s.board.size())) return "target tile out of bounds";
            t = &s.board[a.target];
            if (t->ownerCity != c->id) return "tile not within city borders";
        }
        auto building_at = [&](int x, int y) -> const Building* {
            for (const auto& b : c->buildings)
                if (b.x == x && b.y == y) return &b;
            return nullptr;
        };
        int tx = needsTile ? a.target % s.size : 0;
        int ty = needsTile ? a.target / s.size : 0;

        switch (a.type) {
        case ActionType::Destroy:
            if (!building_at(tx, ty)) return "no building on target tile";
            return nullptr;
        case ActionType::BurnForest:
            if (!tribe.has_tech(TechId::Spiritualism)) return "BurnForest requires Spiritualism";
            if (t->terrain != TerrainKind::Forest) return "BurnForest requires a forest tile";
            if (building_at(tx, ty)) return "tile is occupied by a building";
            if (tribe.stars < rules.costs.burnForest) return "not enough stars to burn forest";
            return nullptr;
        case ActionType::GrowForest:
            if (!tribe.has_tech(TechId::Spiritualism)) return "GrowForest requires Spiritualism";
            if (t->terrain != TerrainKind::Plain) return "GrowForest requires a plain tile";
            if (t->resource != ResourceKind::None) return "cannot grow forest on a resource";
            if (t->road) return "cannot grow forest on a road";
            if (building_at(tx, ty)) return "tile is occupied by a building";
            if (tribe.stars < rules.costs.growForest) return "not enough stars to grow forest";
            return nullptr;
        case ActionType::GatherResource: {
            if (t->resource == ResourceKind::None) return "no resource on tile";
            static constexpr TechId gates[] = {TechId::None, TechId::None, TechId::Farming,
                                               TechId::Hunting, TechId::Fishing, TechId::Mining};
            if (!tribe.has_tech(gates[static_cast<int>(t->resource)]))
                return "resource requires a technology to gather";
            if (tribe.stars < rules.costs.gather) return "not enough stars to gather";
            return nullptr;
        }
        case ActionType::ClearForest:
            if (!tribe.has_tech(TechId::Forestry)) return "ClearForest requires Forestry";
            if (t->terrain != TerrainKind::Forest) return "ClearForest requires a forest tile";
            if (building_at(tx, ty)) return "tile is occupied by a building";
            return nullptr;
        case ActionType::LevelUp: {
            if (a.arg > 1) return "unknown level-up bonus";
            if (c->level >= rules.city.maxLevel) return "city at maximum level";
            int threshold = rules.city.levelThresholds[c->level - 1];
            if (c->population < threshold) return "population below level threshold";
            return nullptr;
        }
        case ActionType::Build: {
            if (a.arg >= num_buildings) return "unknown building kind";
            BuildingKind kind = static_cast<BuildingKind>(a.arg);
            const BuildingInfo& info = rules.buildings[a.arg];
            if (!tribe.has_tech(info.requiredTech)) return "building requires a technology";
            if (tribe.stars < info.cost) return "not enough stars to build";
            if (building_at(tx, ty)) return "tile already has a building";
            if (t->road) return "cannot build on a road";
            switch (info.terrain) {
            case BuildTerrain::Plain:
                if (t->terrain != TerrainKind::Plain) return "building requires plain terrain";
                if (t->resource != ResourceKind::None) return "building site holds a resource";
                break;
            case BuildTerrain::Forest:
                if (t->terrain != TerrainKind::Forest) return "building requires forest terrain";
                break;
            case BuildTerrain::MountainOre:
                if (t->terrain != TerrainKind::Mountain) return "building requires a mountain";
                if (t->resource != ResourceKind::Ore) return "mine requires an ore resource";
                break;
            case BuildTerrain::ShallowWater:
                if (t->terrain != TerrainKind::ShallowWater) return "building requires shallow water";
                break;
            }
            // one-per-city buildings
            switch (kind) {
            case BuildingKind::Windmill: case BuildingKind::Sawmill:
            case BuildingKind::Forge: case BuildingKind::CustomHouse:
            case BuildingKind::Monument: case BuildingKind::Temple:
                for (const auto& b : c->buildings)
                    if (b.kind == kind) return "city already has this building";
                break;
            default:
                break;
            }
            return nullptr;
        }
        case ActionType::Spawn: {
            if (a.arg >= num_unit_types) return "unknown unit type";
            const UnitStats& us = rules.units[a.arg];
            if (!us.spawnable) return "unit type cannot be spawned";
            if (!tribe.has_tech(us.requiredTech)) return "unit requires a technology";
            if (tribe.stars < us.cost) return "not enough stars to spawn";
            if (s.unit_at(c->x, c->y)) return "city tile is occupied";
            return nullptr;
        }
        default:
            return "unhandled city action";
        }
    }

    // unit actions
    const Unit* u = s.unit_by_id(a.actor);
    if (!u) return "no such unit";
    if (u->owner != player) return "unit not owned by active player";
    const UnitStats& us = rules.units[static_cast<int>(u->type)];

    switch (a.type) {
    case ActionType::Examine:
        if (u->status == UnitStatus::Finished) return "unit has finished its turn";
        if (s.tile(u->x, u->y).terrain != TerrainKind::Ruins) return "unit is not on ruins";
        return nullptr;
    case ActionType::HealOthers: {
        if (u->type != UnitTypeId::MindBender) return "only mind benders heal others";
        if (u->status == UnitStatus::Finished) return "unit has finished its turn";
        for (const auto& v : s.units) {
            if (v.owner != player || v.id == u->id) continue;
            if (chebyshev(u->x, u->y, v.x, v.y) <= 1 && v.hp < unit_max_hp(rules, v))
                return nullptr;
        }
        return "no wounded friendly unit adjacent";
    }
    case ActionType::Recover:
        if (u->status == UnitStatus::Finished) return "unit has finished its turn";
        if (u->hp >= unit_max_hp(rules, *u)) return "unit is at full health";
        return nullptr;
    case ActionType::Upgrade: {
        if (u->status == UnitStatus::Finished) return "unit has finished its turn";
        UnitTypeId to;
        if (u->type == UnitTypeId::Boat) to = UnitTypeId::Ship;
        else if (u->type == UnitTypeId::Ship) to = UnitTypeId::Battleship;
        else return "unit cannot be upgraded";
        if (a.arg != static_cast<std::uint8_t>(to)) return "wrong upgrade target";
        const UnitStats& ts = rules.units[static_cast<int>(to)];
        if (!tribe.has_tech(ts.requiredTech)) return "upgrade requires a technology";
        int cost = ts.cost - us.cost;
        if (tribe.stars < cost) return "not enough stars to upgrade";
        return nullptr;
    }
    case ActionType::MakeVeteran:
        if (u->veteran) return "unit is already a veteran";
        if (u->kills < 3) return "unit needs three kills to become veteran";
        if (is_naval(u->type) || u->type == UnitTypeId::SuperUnit) return "unit type cannot become veteran";
        return nullptr;
    case ActionType::Capture: {
        if (u->status != UnitStatus::Fresh && u->status != UnitStatus::Moved)
            return "unit cannot capture any more this turn";
        if (is_naval(u->type)) return "naval units cannot capture";
        const Tile& t = s.tile(u->x, u->y);
        if (t.terrain == TerrainKind::Village) return nullptr;
        if (t.terrain == TerrainKind::City) {
            const City* c = s.city_at(u->x, u->y);
            if (c && c->owner != player) return nullptr;
            return "city already owned";
        }
        return "capture requires standing on a village or enemy city";
    }
    case ActionType::Disband:
        if (u->status == UnitStatus::Finished) return "unit has finished its turn";
        return nullptr;
    case ActionType::Convert: {
        if (u->type != UnitTypeId::MindBender) return "only mind benders convert";
        if (u->status != UnitStatus::Fresh && u->status != UnitStatus::Moved)
            return "unit cannot act any more this turn";
        const Unit* tgt = s.unit_by_id(a.target);
        if (!tgt || tgt->owner == player) return "convert target must be an enemy unit";
        if (chebyshev(u->x, u->y, tgt->x, tgt->y) > us.range) return "convert target out of range";
        return nullptr;
    }
    case ActionType::Move: {
        if (u->status != UnitStatus::Fresh && u->status != UnitStatus::Attacked)
            return "unit cannot move any more this turn";
        thread_local std::vector<std::int16_t> reach;
        reachable_tiles(rules, s, *u, reach);
        if (!std::binary_search(reach.begin(), reach.end(), static_cast<std::int16_t>(a.target)))
            return "target tile is not reachable";
        return nullptr;
    }
    case ActionType::Attack: {
        if (u->status != UnitStatus::Fresh && u->status != UnitStatus::Moved)
            return "unit cannot attack any more this turn";
        if (us.attack <= 0) return "unit cannot attack";
        const Unit* tgt = s.unit_by_id(a.target);
        if (!tgt || tgt->owner == player) return "attack target must be an enemy unit";
        if (chebyshev(u->x, u->y, tgt->x, tgt->y) > us.range) return "attack target out of range";
        return nullptr;
    }
    default:
        return "unhandled action type";
    }
}

inline void start_of_turn(const Rules& rules, GameState& s) {
    Tribe& tribe = s.tribes[s.activePlayer];
    int income = 0;
    for (const auto& c : s.cities)
        if (c.owner == s.activePlayer) income += city_production(rules, c);
    detail::earn(tribe, income);
    for (auto& u : s.units)
        if (u.owner == s.activePlayer) u.status = UnitStatus::Fresh;
}

namespace detail {

inline void claim_border(GameState& s, City& c, int radius) {
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            int x = c.x + dx, y = c.y + dy;
            if (!s.in_bounds(x, y)) continue;
            Tile& t = s.tile(x, y);
            if (t.ownerCity < 0) t.ownerCity = c.id;
        }
}

inline void remove_unit(GameState& s, int id) {
    s.units.erase(std::remove_if(s.units.begin(), s.units.end(),
                                 [&](const Unit& u) { return u.id == id; }),
                  s.units.end());
}

inline Unit* spawn_unit(const Rules& rules, GameState& s, int player, UnitTypeId type,
                        int x, int y, UnitStatus status) {
    Unit u;
    u.id = s.nextUnitId++;
    u.type = type;
    u.carried = type;
    u.owner = static_cast<std::int8_t>(player);
    u.x = static_cast<std::int8_t>(x);
    u.y = static_cast<std::int8_t>(y);
    u.hp = static_cast<std::int16_t>(rules.units[static_cast<int>(type)].maxHP);
    u.status = status;
    s.units.push_back(u);
    return &s.units.back();
}

} // namespace detail

// Applies a legal action in place. Throws IllegalActionError otherwise.
inline void apply_inplace(const Rules& rules, GameState& s, const Action& a) {
    if (const char* err = validate(rules, s, a))
        throw IllegalActionError(std::string(action_type_name(a.type)) + ": " + err);
    if (s.fmCalls) ++*s.fmCalls;

    const int player = s.activePlayer;
    Tribe& tribe = s.tribes[player];

    switch (a.type) {
    case ActionType::EndTurn: {
        if (player == 1 && s.turn >= max_turns) {
            // highest score wins; ties go to player 0
            s.winKind = GameResultKind::ScoreWin;
            s.winner = s.tribes[1].score > s.tribes[0].score ? 1 : 0;
            return;
        }
        s.activePlayer = static_cast<std::int8_t>(1 - player);
        if (s.activePlayer == 0) ++s.turn;
        start_of_turn(rules, s);
        detail::refresh_scores(rules, s);
        return;
    }
    case ActionType::BuildRoad:
        detail::spend(tribe, rules.costs.road);
        s.board[a.target].road = true;
        break;
    case ActionType::Research: {
        TechId tech = static_cast<TechId>(a.arg);
        detail::spend(tribe, rules.techs[a.arg].cost);
        tribe.techs |= 1u << a.arg;
        if (tech == TechId::Whaling && !tribe.whalingBonusClaimed) {
            tribe.whalingBonusClaimed = true;
            detail::earn(tribe, rules.costs.whalingStarBonus);
        }
        break;
    }
    case ActionType::Destroy: {
        City& c = *s.city_by_id(a.actor);
        int tx = a.target % s.size, ty = a.target / s.size;
        for (auto it = c.buildings.begin(); it != c.buildings.end(); ++it) {
            if (it->x == tx && it->y == ty) {
                c.population = std::max<std::int16_t>(0, static_cast<std::int16_t>(c.population - it->popGranted));
                c.extraProduction = std::max<std::int16_t>(0, static_cast<std::int16_t>(c.extraProduction - it->prodGranted));
                c.buildings.erase(it);
                break;
            }
        }
        break;
    }
    case ActionType::BurnForest: {
        detail::spend(tribe, rules.costs.burnForest);
        Tile& t = s.board[a.target];
        t.terrain = TerrainKind::Plain;
        t.resource = ResourceKind::Crop;
        break;
    }
    case ActionType::GrowForest:
        detail::spend(tribe, rules.costs.growForest);
        s.board[a.target].terrain = TerrainKind::Forest;
        break;
    case ActionType::GatherResource: {
        detail::spend(tribe, rules.costs.gather);
        s.board[a.target].resource = ResourceKind::None;
        City& c = *s.city_by_id(a.actor);
        c.population += 1;
        break;
    }
    case ActionType::ClearForest: {
        Tile& t = s.board[a.target];
        t.terrain = TerrainKind::Plain;
        t.resource = ResourceKind::None;
        detail::earn(tribe, rules.costs.clearForestRefund);
        break;
    }
    case ActionType::LevelUp: {
        City& c = *s.city_by_id(a.actor);
        c.level += 1;
        if (static_cast<LevelUpBonus>(a.arg) == LevelUpBonus::Growth) {
            c.extraProduction += 1;
        } else {
            // military bonus: a super unit on the city tile, or the first
            // free adjacent land tile
            int sx = -1, sy = -1;
            if (!s.unit_at(c.x, c.y)) {
                sx = c.x; sy = c.y;
            } else {
                for (int dy = -1; dy <= 1 && sx < 0; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int x = c.x + dx, y = c.y + dy;
                        if (!s.in_bounds(x, y) || s.unit_at(x, y)) continue;
                        TerrainKind tk = s.tile(x, y).terrain;
                        if (!is_land(tk) || tk == TerrainKind::Mountain) continue;
                        sx = x; sy = y;
                        break;
                    }
            }
            if (sx >= 0)
                detail::spawn_unit(rules, s, player, UnitTypeId::SuperUnit, sx, sy,
                                   UnitStatus::Finished);
        }
        break;
    }
    case ActionType::Build: {
        City& c = *s.city_by_id(a.actor);
        const BuildingInfo& info = rules.buildings[a.arg];
        detail::spend(tribe, info.cost);
        Building b;
        b.kind = static_cast<BuildingKind>(a.arg);
        b.x = static_cast<std::int8_t>(a.target % s.size);
        b.y = static_cast<std::int8_t>(a.target / s.size);
        int adj = 0;
        if (info.adjSource != BuildingKind::None) {
            for (const auto& other : c.buildings)
                if (other.kind == info.adjSource && chebyshev(b.x, b.y, other.x, other.y) == 1)
                    ++adj;
        }
        b.popGranted = static_cast<std::int8_t>(
            info.population + (info.adjEffect == AdjEffect::Population ? adj : 0));
        b.prodGranted = static_cast<std::int8_t>(info.adjEffect == AdjEffect::Production ? adj : 0);
        c.population += b.popGranted;
        c.extraProduction += b.prodGranted;
        c.buildings.push_back(b);
        break;
    }
    case ActionType::Spawn: {
        City& c = *s.city_by_id(a.actor);
        const UnitStats& us = rules.units[a.arg];
        detail::spend(tribe, us.cost);
        detail::spawn_unit(rules, s, player, static_cast<UnitTypeId>(a.arg), c.x, c.y,
                           UnitStatus::Finished);
        break;
    }
    case ActionType::Examine: {
        Unit& u = *s.unit_by_id(a.actor);
        s.tile(u.x, u.y).terrain = TerrainKind::Plain;
        detail::earn(tribe, rules.costs.examineStarBonus);
        u.status = UnitStatus::Finished;
        break;
    }
    case ActionType::HealOthers: {
        Unit& u = *s.unit_by_id(a.actor);
        for (auto& v : s.units) {
            if (v.owner != player || v.id == u.id) continue;
            if (chebyshev(u.x, u.y, v.x, v.y) <= 1)
                v.hp = static_cast<std::int16_t>(
                    std::min(v.hp + rules.costs.healOthersHP, unit_max_hp(rules, v)));
        }
        u.status = UnitStatus::Finished;
        break;
    }
    case ActionType::Recover: {
        Unit& u = *s.unit_by_id(a.actor);
        u.hp = static_cast<std::int16_t>(
            std::min(u.hp + rules.costs.recoverHP, unit_max_hp(rules, u)));
        u.status = UnitStatus::Finished;
        break;
    }
    case ActionType::Upgrade: {
        Unit& u = *s.unit_by_id(a.actor);
        UnitTypeId to = static_cast<UnitTypeId>(a.arg);
        int cost = rules.units[a.arg].cost - rules.units[static_cast<int>(u.type)].cost;
        detail::spend(tribe, cost);
        int hpGain = rules.units[a.arg].maxHP - rules.units[static_cast<int>(u.type)].maxHP;
        u.type = to;
        u.hp = static_cast<std::int16_t>(u.hp + hpGain);
        u.status = UnitStatus::Finished;
        break;
    }
    case ActionType::MakeVeteran: {
        Unit& u = *s.unit_by_id(a.actor);
        u.veteran = true;
        u.hp = static_cast<std::int16_t>(unit_max_hp(rules, u));
        break;
    }
    case ActionType::Capture: {
        Unit& u = *s.unit_by_id(a.actor);
        Tile& t = s.tile(u.x, u.y);
        if (t.terrain == TerrainKind::Village) {
            t.terrain = TerrainKind::City;
            City c;
            c.id = s.nextCityId++;
            c.owner = static_cast<std::int8_t>(player);
            c.x = u.x;
            c.y = u.y;
            c.level = 1;
            s.cities.push_back(c);
            t.ownerCity = c.id;
            detail::claim_border(s, s.cities.back(), rules.city.borderRadius);
        } else {
            City& c = *s.city_by_id(s.city_at(u.x, u.y)->id);
            c.owner = static_cast<std::int8_t>(player);
        }
        u.status = UnitStatus::Finished;
        detail::check_capital_win(s);
        break;
    }
    case ActionType::Disband: {
        Unit& u = *s.unit_by_id(a.actor);
        int refund = rules.units[static_cast<int>(u.carried)].cost /
                     rules.costs.disbandRefundDivisor;
        detail::earn(tribe, refund);
        detail::remove_unit(s, a.actor);
        break;
    }
    case ActionType::Convert: {
        Unit& u = *s.unit_by_id(a.actor);
        Unit& tgt = *s.unit_by_id(a.target);
        tgt.owner = static_cast<std::int8_t>(player);
        tgt.status = UnitStatus::Finished;
        u.status = u.status == UnitStatus::Fresh ? UnitStatus::Attacked : UnitStatus::Finished;
        break;
    }
    case ActionType::Move: {
        Unit& u = *s.unit_by_id(a.actor);
        int tx = a.target % s.size, ty = a.target / s.size;
        TerrainKind dest = s.tile(tx, ty).terrain;
        if (!is_naval(u.type) && is_water(dest)) {
            u.carried = u.type; // embark at own port
            u.type = UnitTypeId::Boat;
            u.hp = std::min<std::int16_t>(u.hp, static_cast<std::int16_t>(unit_max_hp(rules, u)));
        } else if (is_naval(u.type) && is_land(dest)) {
            u.type = u.carried; // disembark
            u.hp = std::min<std::int16_t>(u.hp, static_cast<std::int16_t>(unit_max_hp(rules, u)));
        }
        u.x = static_cast<std::int8_t>(tx);
        u.y = static_cast<std::int8_t>(ty);
        u.status = u.status == UnitStatus::Fresh ? UnitStatus::Moved : UnitStatus::Finished;
        break;
    }
    case ActionType::Attack: {
        Unit& u = *s.unit_by_id(a.actor);
        Unit& tgt = *s.unit_by_id(a.target);
        int dmg = combat_damage(rules, u, tgt);
        tgt.hp = static_cast<std::int16_t>(tgt.hp - dmg);
        int dist = chebyshev(u.x, u.y, tgt.x, tgt.y);
        if (tgt.hp <= 0) {
            u.kills = static_cast<std::int8_t>(u.kills + 1);
            detail::remove_unit(s, a.target);
        } else {
            const UnitStats& ds = rules.units[static_cast<int>(tgt.type)];
            if (ds.attack > 0 && dist <= ds.range) {
                Unit& atk = *s.unit_by_id(a.actor);
                int ret = combat_damage(rules, tgt, atk);
                atk.hp = static_cast<std::int16_t>(atk.hp - ret);
                if (atk.hp <= 0) {
                    Unit& killer = *s.unit_by_id(a.target);
                    killer.kills = static_cast<std::int8_t>(killer.kills + 1);
                    detail::remove_unit(s, a.actor);
                }
            }
        }
        if (Unit* atk = s.unit_by_id(a.actor))
            atk->status = atk->status == UnitStatus::Fresh ? UnitStatus::Attacked
                                                           : UnitStatus::Finished;
        break;
    }
    default:
        throw IllegalActionError("unhandled action type");
    }

    detail::refresh_scores(rules, s);
}

// Forward model: returns the successor state, leaving the input untouched.
inline GameState apply(const Rules& rules, const GameState& s, const Action& a) {
    GameState next = s;
    apply_inplace(rules, next, a);
    return next;
}

inline void legal_actions(const Rules& rules, const GameState& s, int player,
                          std::vector<Action>& out) {
    out.clear();
    if (terminal_status(s).terminal()) return;
    if (player != s.activePlayer)
        throw ContractViolation("legal_actions: player is not the active player");

    const Tribe& tribe = s.tribes[player];
    auto emit = [&](Action a) {
        if (validate(rules, s, a) == nullptr) out.push_back(a);
    };

    // tribe actions
    out.push_back({ActionType::EndTurn, static_cast<std::int16_t>(player), -1, 0});
    for (int t = 0; t < num_techs; ++t)
        emit({ActionType::Research, static_cast<std::int16_t>(player), -1,
              static_cast<std::uint8_t>(t)});
    if (tribe.has_tech(TechId::Roads) && tribe.stars >= rules.costs.road) {
        for (int i = 0; i < static_cast<int>(s.board.size()); ++i)
            emit({ActionType::BuildRoad, static_cast<std::int16_t>(player),
                  static_cast<std::int16_t>(i), 0});
    }

    // city actions
    for (const auto& c : s.cities) {
        if (c.owner != player) continue;
        std::int16_t cid = c.id;
        emit({ActionType::LevelUp, cid, -1, static_cast<std::uint8_t>(LevelUpBonus::Growth)});
        emit({ActionType::LevelUp, cid, -1, static_cast<std::uint8_t>(LevelUpBonus::Military)});
        for (int t = 0; t < num_unit_types; ++t)
            emit({ActionType::Spawn, cid, -1, static_cast<std::uint8_t>(t)});
        for (int i = 0; i < static_cast<int>(s.board.size()); ++i) {
            if (s.board[i].ownerCity != c.id) continue;
            std::int16_t ti = static_cast<std::int16_t>(i);
            emit({ActionType::Destroy, cid, ti, 0});
            emit({ActionType::BurnForest, cid, ti, 0});
            emit({ActionType::GrowForest, cid, ti, 0});
            emit({ActionType::GatherResource, cid, ti, 0});
            emit({ActionType::ClearForest, cid, ti, 0});
            for (int b = 0; b < num_buildings; ++b)
                emit({ActionType::Build, cid, ti, static_cast<std::uint8_t>(b)});
        }
    }

    // unit actions
    thread_local std::vector<std::int16_t> reach;
    for (const auto& u : s.units) {
        if (u.owner != player || u.status == UnitStatus::Finished) continue;
        std::int16_t uid = u.id;
        emit({ActionType::Examine, uid, -1, 0});
        emit({ActionType::HealOthers, uid, -1, 0});
        emit({ActionType::Recover, uid, -1, 0});
        if (u.type == UnitTypeId::Boat)
            emit({ActionType::Upgrade, uid, -1, static_cast<std::uint8_t>(UnitTypeId::Ship)});
        else if (u.type == UnitTypeId::Ship)
            emit({ActionType::Upgrade, uid, -1, static_cast<std::uint8_t>(UnitTypeId::Battleship)});
        emit({ActionType::MakeVeteran, uid, -1, 0});
        emit({ActionType::Capture, uid, -1, 0});
        emit({ActionType::Disband, uid, -1, 0});

        const UnitStats& us = rules.units[static_cast<int>(u.type)];
        if (u.status == UnitStatus::Fresh || u.status == UnitStatus::Moved) {
            for (const auto& e : s.units) {
                if (e.owner == player) continue;
                if (chebyshev(u.x, u.y, e.x, e.y) > us.range) continue;
                if (us.attack > 0)
                    out.push_back({ActionType::Attack, uid, e.id, 0});
                if (u.type == UnitTypeId::MindBender)
                    out.push_back({ActionType::Convert, uid, e.id, 0});
            }
        }
        if (u.status == UnitStatus::Fresh || u.status == UnitStatus::Attacked) {
            reachable_tiles(rules, s, u, reach);
            for (std::int16_t ti : reach)
                out.push_back({ActionType::Move, uid, ti, 0});
        }
    }
}

inline std::vector<Action> legal_actions(const Rules& rules, const GameState& s, int player) {
    std::vector<Action> out;
    legal_actions(rules, s, player, out);
    return out;
}

// Star-ledger audit: earned - spent must equal the current balance.
inline bool stars_conserved(const GameState& s) {
    for (const auto& t : s.tribes)
        if (t.starsEarned - t.starsSpent != t.stars) return false;
    return true;
}

} // namespace stratsim
