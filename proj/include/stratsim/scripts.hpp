#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratsim/game.hpp"

namespace stratsim {

enum class ScriptKind : std::uint8_t { Wrapper, BestChoice, StyleChoice };

inline const char* script_kind_name(ScriptKind k) {
    switch (k) {
    case ScriptKind::Wrapper: return "Wrapper";
    case ScriptKind::BestChoice: return "BestChoice";
    case ScriptKind::StyleChoice: return "StyleChoice";
    }
    return "?";
}

enum class ActorClass : std::uint8_t { Tribe, City, Unit };

inline ActorClass actor_class_of(ActionType t) {
    if (is_tribe_action(t)) return ActorClass::Tribe;
    if (is_city_action(t)) return ActorClass::City;
    return ActorClass::Unit;
}

inline constexpr int num_scripts = 57;

struct ScriptInfo {
    int index = 0; // 1-based
    ScriptKind kind = ScriptKind::Wrapper;
    ActionType actionType = ActionType::EndTurn;
    const char* actionLabel = ""; // catalog action label (splits Upgrade Boat/Ship)
    const char* style = "";       // play-style name, style-choice scripts only
    const char* description = "";
    TechBranch branch = TechBranch::Count; // research scripts only
};

// The full portfolio, sigma 1..57: 10 wrapper, 4 best-choice, 43 style-choice.
inline const std::array<ScriptInfo, num_scripts>& script_table() {
    using AT = ActionType;
    using SK = ScriptKind;
    static const std::array<ScriptInfo, num_scripts> table = {{
        {1, SK::Wrapper, AT::EndTurn, "End Turn", "", "Ends the current turn."},
        {2, SK::Wrapper, AT::Destroy, "Destroy", "", "Destroys a target building owned by the tribe."},
        {3, SK::Wrapper, AT::Examine, "Examine", "", "Explores ruins for a bonus."},
        {4, SK::Wrapper, AT::HealOthers, "Heal Others", "", "Heals other units around this one (Mind Bender only)."},
        {5, SK::Wrapper, AT::Recover, "Recover", "", "Recovers hit points and finishes movement."},
        {6, SK::Wrapper, AT::Upgrade, "Upgrade Boat", "", "Upgrades a boat to a ship."},
        {7, SK::Wrapper, AT::Upgrade, "Upgrade Ship", "", "Upgrades a ship to a battleship."},
        {8, SK::Wrapper, AT::MakeVeteran, "Make Veteran", "", "Makes this unit a veteran (after killing three units)."},
        {9, SK::Wrapper, AT::Capture, "Capture", "", "Captures an enemy city or a neutral village."},
        {10, SK::Wrapper, AT::Disband, "Disband", "", "Disbands a target unit owned by the tribe."},

        {11, SK::BestChoice, AT::BuildRoad, "Build Road", "", "Builds a road in a non-enemy controlled tile."},
        {12, SK::BestChoice, AT::BurnForest, "Burn Forest", "", "Burns a forest to create a crop resource."},
        {13, SK::BestChoice, AT::GrowForest, "Grow Forest", "", "Grows a forest in a tile."},
        {14, SK::BestChoice, AT::GatherResource, "Get Resource", "", "Gathers a resource from a tile within the city's borders."},

        {15, SK::StyleChoice, AT::Research, "Research", "Farms", "Researches the lowest tier technology possible in the Farms branch of the tech tree.", TechBranch::Farms},
        {16, SK::StyleChoice, AT::Research, "Research", "Naval", "Researches the lowest tier technology possible in the Naval branch of the tech tree.", TechBranch::Naval},
        {17, SK::StyleChoice, AT::Research, "Research", "Mountain", "Researches the lowest tier technology possible in the Mountain branch of the tech tree.", TechBranch::Mountain},
        {18, SK::StyleChoice, AT::Research, "Research", "Range", "Researches the lowest tier technology possible in the Range branch of the tech tree.", TechBranch::Range},
        {19, SK::StyleChoice, AT::Research, "Research", "Roads", "Researches the lowest tier technology possible in the Network branch of the tech tree.", TechBranch::Network},

        {20, SK::StyleChoice, AT::ClearForest, "Clear Forest", "For Custom House", "Removes a forest to create a spot for a custom house."},
        {21, SK::StyleChoice, AT::ClearForest, "Clear Forest", "For Forge", "Removes a forest to create a spot for a forge."},
        {22, SK::StyleChoice, AT::ClearForest, "Clear Forest", "For Sawmill", "Removes a forest to create a spot for a sawmill."},
        {23, SK::StyleChoice, AT::ClearForest, "Clear Forest", "For Windmill", "Removes a forest to create a spot for a windmill."},

        {24, SK::StyleChoice, AT::LevelUp, "Level Up", "Growth", "Levels a city up and chooses a bonus that maximizes city production."},
        {25, SK::StyleChoice, AT::LevelUp, "Level Up", "Military", "Levels a city up and chooses a bonus that maximizes combat strength."},

        {26, SK::StyleChoice, AT::Build, "Build", "Custom House", "Builds a custom house in a tile with maximum neighbouring ports capacity."},
        {27, SK::StyleChoice, AT::Build, "Build", "Windmill", "Builds a windmill in a tile with maximum neighbouring farms capacity."},
        {28, SK::StyleChoice, AT::Build, "Build", "Sawmill", "Builds a sawmill in a tile with maximum neighbouring forest capacity."},
        {29, SK::StyleChoice, AT::Build, "Build", "Forge", "Builds a forge in a tile with maximum neighbouring ore mountains capacity."},
        {30, SK::StyleChoice, AT::Build, "Build", "Port", "Builds a port in a water tile, prioritizing those with neighbouring custom houses."},
        {31, SK::StyleChoice, AT::Build, "Build", "Farm", "Builds a farm in a tile, prioritizing those with neighbouring windmills."},
        {32, SK::StyleChoice, AT::Build, "Build", "Lumber Hut", "Builds a lumber hut in a tile, prioritizing those with neighbouring sawmills."},
        {33, SK::StyleChoice, AT::Build, "Build", "Mine", "Builds a mine in a mountain tile with ore, prioritizing those with neighbouring forges."},
        {34, SK::StyleChoice, AT::Build, "Build", "Monument", "Builds a monument in a tile owned by the city."},
        {35, SK::StyleChoice, AT::Build, "Build", "Temple", "Builds a temple in a tile owned by the city."},

        {36, SK::StyleChoice, AT::Spawn, "Spawn", "Strongest", "Spawns the strongest available unit."},
        {37, SK::StyleChoice, AT::Spawn, "Spawn", "Defensive", "Spawns the unit with the highest defensive value."},
        {38, SK::StyleChoice, AT::Spawn, "Spawn", "Cheapest", "Spawns the cheapest available unit."},
        {39, SK::StyleChoice, AT::Spawn, "Spawn", "Fastest", "Spawns the unit with the highest movement value."},
        {40, SK::StyleChoice, AT::Spawn, "Spawn", "Highest HP", "Spawns the unit with the highest hit points."},
        {41, SK::StyleChoice, AT::Spawn, "Spawn", "Range", "Spawns the unit with the highest range attack value."},

        {42, SK::StyleChoice, AT::Convert, "Convert", "Strongest unit", "Converts to the current tribe the strongest enemy unit in range."},
        {43, SK::StyleChoice, AT::Convert, "Convert", "Highest HP", "Converts to the current tribe the enemy unit in range with highest hit points."},
        {44, SK::StyleChoice, AT::Convert, "Convert", "Highest Defence", "Converts to the current tribe the enemy unit with the highest defence value."},

        {45, SK::StyleChoice, AT::Move, "Move", "To capture", "Moves the unit into an enemy city or neutral village."},
        {46, SK::StyleChoice, AT::Move, "Move", "To city centre", "Moves the unit to the tile of the closest owned city."},
        {47, SK::StyleChoice, AT::Move, "Move", "Defensively", "Moves the unit towards the closest owned city."},
        {48, SK::StyleChoice, AT::Move, "Move", "Offensively", "Moves the unit towards the closest enemy city."},
        {49, SK::StyleChoice, AT::Move, "Move", "To Land", "Moves the unit to a land tile from a water one, disembarking."},
        {50, SK::StyleChoice, AT::Move, "Move", "To Embark", "Moves the unit to a friendly port, embarking."},
        {51, SK::StyleChoice, AT::Move, "Move", "To Attack Range", "Moves the unit to a position from which it can attack most enemy units."},
        {52, SK::StyleChoice, AT::Move, "Move", "To Converge", "Moves the unit closer to other friendly units."},
        {53, SK::StyleChoice, AT::Move, "Move", "To Diverge", "Moves the unit away from other friendly units."},

        {54, SK::StyleChoice, AT::Attack, "Attack", "Closest", "Attacks the closest enemy unit in range."},
        {55, SK::StyleChoice, AT::Attack, "Attack", "Weakest", "Attacks the enemy unit in range with the lowest defence value."},
        {56, SK::StyleChoice, AT::Attack, "Attack", "Most Damaged", "Attacks the enemy unit in range with the lowest hit points remaining."},
        {57, SK::StyleChoice, AT::Attack, "Attack", "Strongest", "Attacks the strongest enemy unit in range."},
    }};
    return table;
}

inline const ScriptInfo& script_info(int sigma) { return script_table()[sigma - 1]; }

// Script weights, indexed by sigma (1..57). Defaults to 0.5 everywhere.
struct ScriptWeights {
    std::array<double, num_scripts + 1> w{};
    ScriptWeights() { w.fill(0.5); }
    double operator[](int sigma) const { return w[sigma]; }
    double& operator[](int sigma) { return w[sigma]; }
};

// tau = <sigma, lambda, a, v(a), w_sigma>
struct ActionAssignment {
    int script = 0;
    std::int16_t actor = 0;
    Action action{};
    double value = 0.5;
    double weight = 0.5;
};

namespace detail {

// All legal actions of one type for one actor, in deterministic order.
inline void candidates_for(const Rules& rules, const GameState& s, ActionType type,
                           std::int16_t actor, std::vector<Action>& out) {
    out.clear();
    auto emit = [&](Action a) {
        if (validate(rules, s, a) == nullptr) out.push_back(a);
    };
    const int boardSize = static_cast<int>(s.board.size());
    switch (actor_class_of(type)) {
    case ActorClass::Tribe:
        switch (type) {
        case ActionType::EndTurn:
            emit({ActionType::EndTurn, actor, -1, 0});
            break;
        case ActionType::Research:
            for (int t = 0; t < num_techs; ++t)
                emit({ActionType::Research, actor, -1, static_cast<std::uint8_t>(t)});
            break;
        case ActionType::BuildRoad:
            if (s.tribes[actor].has_tech(TechId::Roads) &&
                s.tribes[actor].stars >= rules.costs.road)
                for (int i = 0; i < boardSize; ++i)
                    emit({ActionType::BuildRoad, actor, static_cast<std::int16_t>(i), 0});
            break;
        default:
            break;
        }
        return;
    case ActorClass::City: {
        const City* c = s.city_by_id(actor);
        if (!c || c->owner != s.activePlayer) return;
        switch (type) {
        case ActionType::LevelUp:
            emit({type, actor, -1, static_cast<std::uint8_t>(LevelUpBonus::Growth)});
            emit({type, actor, -1, static_cast<std::uint8_t>(LevelUpBonus::Military)});
            return;
        case ActionType::Spawn:
            for (int t = 0; t < num_unit_types; ++t)
                emit({type, actor, -1, static_cast<std::uint8_t>(t)});
            return;
        case ActionType::Build:
            for (int i = 0; i < boardSize; ++i) {
                if (s.board[i].ownerCity != c->id) continue;
                for (int b = 0; b < num_buildings; ++b)
                    emit({type, actor, static_cast<std::int16_t>(i), static_cast<std::uint8_t>(b)});
            }
            return;
        default:
            for (int i = 0; i < boardSize; ++i) {
                if (s.board[i].ownerCity != c->id) continue;
                emit({type, actor, static_cast<std::int16_t>(i), 0});
            }
            return;
        }
    }
    case ActorClass::Unit: {
        const Unit* u = s.unit_by_id(actor);
        if (!u || u->owner != s.activePlayer) return;
        switch (type) {
        case ActionType::Move: {
            if (u->status != UnitStatus::Fresh && u->status != UnitStatus::Attacked) return;
            thread_local std::vector<std::int16_t> reach;
            reachable_tiles(rules, s, *u, reach);
            for (std::int16_t ti : reach) out.push_back({type, actor, ti, 0});
            return;
        }
        case ActionType::Attack:
        case ActionType::Convert:
            for (const auto& e : s.units) {
                if (e.owner == s.activePlayer) continue;
                emit({type, actor, e.id, 0});
            }
            return;
        case ActionType::Upgrade:
            if (u->type == UnitTypeId::Boat)
                emit({type, actor, -1, static_cast<std::uint8_t>(UnitTypeId::Ship)});
            else if (u->type == UnitTypeId::Ship)
                emit({type, actor, -1, static_cast<std::uint8_t>(UnitTypeId::Battleship)});
            return;
        default:
            emit({type, actor, -1, 0});
            return;
        }
    }
    }
}

inline int count_adjacent_buildings(const GameState& s, const City& c, BuildingKind kind,
                                    int x, int y) {
    int n = 0;
    for (const auto& b : c.buildings)
        if (b.kind == kind && chebyshev(x, y, b.x, b.y) == 1) ++n;
    return n;
}

inline int dist_to_closest_city(const GameState& s, int x, int y, int player, bool enemy) {
    int best = 1000;
    for (const auto& c : s.cities) {
        bool mine = c.owner == player;
        if (enemy ? mine || c.owner < 0 : !mine) continue;
        best = std::min(best, chebyshev(x, y, c.x, c.y));
    }
    return best;
}

// Normalized margin of the chosen criterion over the worst candidate,
// mapped to [0.5, 1.0]. Wrapper scripts bypass this and use 0.5 exactly.
inline double margin_value(double best, double worst) {
    if (best <= worst) return 0.5;
    double norm = (best - worst) / (1.0 + std::abs(best) + std::abs(worst));
    return std::clamp(0.5 + 0.5 * norm, 0.5, 1.0);
}

} // namespace detail

// Core of script execution, with the candidate set precomputed (shared
// between all scripts of one action type during assignment enumeration).
inline std::optional<std::pair<Action, double>>
execute_script_on(const Rules& rules, const GameState& s, int sigma, std::int16_t actor,
                  const std::vector<Action>& cands) {
    if (cands.empty()) return std::nullopt;
    const ScriptInfo& info = script_info(sigma);
    const int player = s.activePlayer;

    // Criterion per candidate; argmax wins, first candidate wins ties.
    // Candidates with criterion -inf are filtered out entirely.
    constexpr double reject = -1e300;
    auto choose = [&](auto&& criterion) -> std::optional<std::pair<Action, double>> {
        const Action* best = nullptr;
        double bestC = reject, worstC = 1e300;
        for (const auto& a : cands) {
            double c = criterion(a);
            if (c <= reject) continue;
            if (c < worstC) worstC = c;
            if (!best || c > bestC) {
                best = &a;
                bestC = c;
            }
        }
        if (!best) return std::nullopt;
        if (info.kind == ScriptKind::Wrapper) return std::make_pair(*best, 0.5);
        return std::make_pair(*best, detail::margin_value(bestC, worstC));
    };

    auto tile_xy = [&](const Action& a) {
        return std::pair<int, int>{a.target % s.size, a.target / s.size};
    };

    switch (sigma) {
    // wrappers: any candidate, first one
    case 1: case 2: case 3: case 4: case 5: case 8: case 9: case 10:
        return choose([](const Action&) { return 0.0; });
    case 6: // upgrade boat only
        return choose([&](const Action& a) {
            const Unit* u = s.unit_by_id(a.actor);
            return u && u->type == UnitTypeId::Boat ? 0.0 : reject * 2;
        });
    case 7: // upgrade ship only
        return choose([&](const Action& a) {
            const Unit* u = s.unit_by_id(a.actor);
            return u && u->type == UnitTypeId::Ship ? 0.0 : reject * 2;
        });

    case 11: { // road on the corridor between the capitals
        const City* own = s.city_by_id(s.tribes[player].capitalCityId);
        const City* foe = s.city_by_id(s.tribes[1 - player].capitalCityId);
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            double d = 0;
            if (own) d += chebyshev(x, y, own->x, own->y);
            if (foe) d += chebyshev(x, y, foe->x, foe->y);
            return -d;
        });
    }
    case 12: case 13: { // burn/grow forest close to the city centre
        const City* c = s.city_by_id(actor);
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            return c ? -chebyshev(x, y, c->x, c->y) : 0.0;
        });
    }
    case 14: // any gatherable resource, nearest first
    {
        const City* c = s.city_by_id(actor);
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            return c ? -chebyshev(x, y, c->x, c->y) : 0.0;
        });
    }

    case 15: case 16: case 17: case 18: case 19: // research branch, lowest tier
        return choose([&](const Action& a) {
            const TechInfo& t = rules.techs[a.arg];
            if (t.branch != info.branch) return reject * 2;
            return -static_cast<double>(t.tier);
        });

    case 20: case 21: case 22: case 23: { // clear forest for a building site
        static constexpr BuildingKind wanted[] = {BuildingKind::Port, BuildingKind::Mine,
                                                  BuildingKind::LumberHut, BuildingKind::Farm};
        BuildingKind near = wanted[sigma - 20];
        const City* c = s.city_by_id(actor);
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            return c ? static_cast<double>(detail::count_adjacent_buildings(s, *c, near, x, y)) : 0.0;
        });
    }

    case 24: // level up for growth
        return choose([&](const Action& a) {
            return static_cast<LevelUpBonus>(a.arg) == LevelUpBonus::Growth ? 0.0 : reject * 2;
        });
    case 25: // level up for military strength
        return choose([&](const Action& a) {
            return static_cast<LevelUpBonus>(a.arg) == LevelUpBonus::Military ? 0.0 : reject * 2;
        });

    case 26: case 27: case 28: case 29: case 30: case 31: case 32: case 33:
    case 34: case 35: { // build a specific kind, scored by adjacency synergy
        static constexpr BuildingKind kinds[] = {
            BuildingKind::CustomHouse, BuildingKind::Windmill, BuildingKind::Sawmill,
            BuildingKind::Forge, BuildingKind::Port, BuildingKind::Farm,
            BuildingKind::LumberHut, BuildingKind::Mine, BuildingKind::Monument,
            BuildingKind::Temple};
        static constexpr BuildingKind near[] = {
            BuildingKind::Port, BuildingKind::Farm, BuildingKind::LumberHut,
            BuildingKind::Mine, BuildingKind::CustomHouse, BuildingKind::Windmill,
            BuildingKind::Sawmill, BuildingKind::Forge, BuildingKind::None,
            BuildingKind::None};
        BuildingKind kind = kinds[sigma - 26];
        BuildingKind adj = near[sigma - 26];
        const City* c = s.city_by_id(actor);
        return choose([&](const Action& a) {
            if (static_cast<BuildingKind>(a.arg) != kind) return reject * 2;
            if (adj == BuildingKind::None || !c) return 0.0;
            auto [x, y] = tile_xy(a);
            return static_cast<double>(detail::count_adjacent_buildings(s, *c, adj, x, y));
        });
    }

    case 36: // spawn strongest (attack value)
        return choose([&](const Action& a) { return static_cast<double>(rules.units[a.arg].attack); });
    case 37: // spawn most defensive
        return choose([&](const Action& a) { return static_cast<double>(rules.units[a.arg].defence); });
    case 38: // spawn cheapest
        return choose([&](const Action& a) { return -static_cast<double>(rules.units[a.arg].cost); });
    case 39: // spawn fastest
        return choose([&](const Action& a) { return static_cast<double>(rules.units[a.arg].movement); });
    case 40: // spawn highest hit points
        return choose([&](const Action& a) { return static_cast<double>(rules.units[a.arg].maxHP); });
    case 41: // spawn longest range
        return choose([&](const Action& a) { return static_cast<double>(rules.units[a.arg].range); });

    case 42: // convert strongest
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return t ? static_cast<double>(rules.units[static_cast<int>(t->type)].attack) : reject * 2;
        });
    case 43: // convert highest hp
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return t ? static_cast<double>(t->hp) : reject * 2;
        });
    case 44: // convert highest defence
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return t ? static_cast<double>(rules.units[static_cast<int>(t->type)].defence) : reject * 2;
        });

    case 45: // move onto an enemy city or neutral village
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            const Tile& t = s.board[a.target];
            if (t.terrain == TerrainKind::Village) return 0.0;
            if (t.terrain == TerrainKind::City) {
                const City* c = s.city_at(x, y);
                if (c && c->owner != player) return 0.0;
            }
            return reject * 2;
        });
    case 46: // move to an owned city tile
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            const City* c = s.city_at(x, y);
            return (c && c->owner == player) ? 0.0 : reject * 2;
        });
    case 47: // move towards the closest owned city
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            return -static_cast<double>(detail::dist_to_closest_city(s, x, y, player, false));
        });
    case 48: // move towards the closest enemy city
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            return -static_cast<double>(detail::dist_to_closest_city(s, x, y, player, true));
        });
    case 49: { // disembark
        const Unit* u = s.unit_by_id(actor);
        if (!u || !is_naval(u->type)) return std::nullopt;
        return choose([&](const Action& a) {
            return is_land(s.board[a.target].terrain) ? 0.0 : reject * 2;
        });
    }
    case 50: { // embark at an own port
        const Unit* u = s.unit_by_id(actor);
        if (!u || is_naval(u->type)) return std::nullopt;
        return choose([&](const Action& a) {
            return is_water(s.board[a.target].terrain) ? 0.0 : reject * 2;
        });
    }
    case 51: { // move to maximize enemies in attack range
        const Unit* u = s.unit_by_id(actor);
        if (!u) return std::nullopt;
        int range = rules.units[static_cast<int>(u->type)].range;
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            int n = 0;
            for (const auto& e : s.units)
                if (e.owner != player && chebyshev(x, y, e.x, e.y) <= range) ++n;
            return n > 0 ? static_cast<double>(n) : reject * 2;
        });
    }
    case 52: case 53: { // converge on / diverge from friendly units
        const Unit* u = s.unit_by_id(actor);
        if (!u) return std::nullopt;
        double sign = sigma == 52 ? -1.0 : 1.0;
        bool anyFriend = false;
        for (const auto& v : s.units)
            if (v.owner == player && v.id != actor) { anyFriend = true; break; }
        if (!anyFriend) return std::nullopt;
        return choose([&](const Action& a) {
            auto [x, y] = tile_xy(a);
            double total = 0;
            for (const auto& v : s.units)
                if (v.owner == player && v.id != actor)
                    total += chebyshev(x, y, v.x, v.y);
            return sign * total;
        });
    }

    case 54: { // attack closest
        const Unit* u = s.unit_by_id(actor);
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return (u && t) ? -static_cast<double>(chebyshev(u->x, u->y, t->x, t->y)) : reject * 2;
        });
    }
    case 55: // attack weakest (lowest defence)
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return t ? -static_cast<double>(rules.units[static_cast<int>(t->type)].defence) : reject * 2;
        });
    case 56: // attack most damaged
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return t ? -static_cast<double>(t->hp) : reject * 2;
        });
    case 57: // attack strongest
        return choose([&](const Action& a) {
            const Unit* t = s.unit_by_id(a.target);
            return t ? static_cast<double>(rules.units[static_cast<int>(t->type)].attack) : reject * 2;
        });

    default:
        return std::nullopt;
    }
}

// Runs script sigma for one actor: picks one action among the legal actions
// of the script's type, scored by the script's criterion, plus a value
// v(a) in [0,1]. Empty when the script has nothing legal to do.
inline std::optional<std::pair<Action, double>>
execute_script(const Rules& rules, const GameState& s, int sigma, std::int16_t actor) {
    const ScriptInfo& info = script_info(sigma);
    thread_local std::vector<Action> cands;
    detail::candidates_for(rules, s, info.actionType, actor, cands);
    return execute_script_on(rules, s, sigma, actor, cands);
}

// One assignment per (actor, applicable script); duplicates of the same
// (actor, action) keep the assignment with the highest v*w.
inline void enumerate_assignments(const Rules& rules, const GameState& s, int player,
                                  const ScriptWeights& weights,
                                  std::vector<ActionAssignment>& out) {
    out.clear();
    if (terminal_status(s).terminal()) return;
    if (player != s.activePlayer)
        throw ContractViolation("enumerate_assignments: player is not the active player");

    thread_local std::vector<Action> cands;

    auto run_scripts_for = [&](std::int16_t actor, ActionType type) {
        detail::candidates_for(rules, s, type, actor, cands);
        if (cands.empty()) return;
        for (const auto& info : script_table()) {
            if (info.actionType != type) continue;
            auto picked = execute_script_on(rules, s, info.index, actor, cands);
            if (!picked) continue;
            ActionAssignment tau;
            tau.script = info.index;
            tau.actor = actor;
            tau.action = picked->first;
            tau.value = picked->second;
            tau.weight = weights[info.index];
            // dedup against earlier assignments for the same actor+action
            bool replaced = false, dropped = false;
            for (auto& prev : out) {
                if (prev.actor == tau.actor && prev.action == tau.action) {
                    if (tau.value * tau.weight > prev.value * prev.weight) {
                        prev = tau;
                        replaced = true;
                    } else {
                        dropped = true;
                    }
                    break;
                }
            }
            if (!replaced && !dropped) out.push_back(tau);
        }
    };

    // tribe actions
    std::int16_t tribeActor = static_cast<std::int16_t>(player);
    run_scripts_for(tribeActor, ActionType::EndTurn);
    run_scripts_for(tribeActor, ActionType::Research);
    run_scripts_for(tribeActor, ActionType::BuildRoad);

    static constexpr ActionType cityTypes[] = {
        ActionType::Destroy, ActionType::BurnForest, ActionType::GrowForest,
        ActionType::GatherResource, ActionType::ClearForest, ActionType::LevelUp,
        ActionType::Build, ActionType::Spawn};
    for (const auto& c : s.cities) {
        if (c.owner != player) continue;
        for (ActionType t : cityTypes) run_scripts_for(c.id, t);
    }

    static constexpr ActionType unitTypes[] = {
        ActionType::Examine, ActionType::HealOthers, ActionType::Recover,
        ActionType::Upgrade, ActionType::MakeVeteran, ActionType::Capture,
        ActionType::Disband, ActionType::Convert, ActionType::Move, ActionType::Attack};
    for (const auto& u : s.units) {
        if (u.owner != player || u.status == UnitStatus::Finished) continue;
        for (ActionType t : unitTypes) run_scripts_for(u.id, t);
    }
}

inline std::vector<ActionAssignment>
enumerate_assignments(const Rules& rules, const GameState& s, int player,
                      const ScriptWeights& weights) {
    std::vector<ActionAssignment> out;
    enumerate_assignments(rules, s, player, weights, out);
    return out;
}

// CSV dump of the catalog (one row per script), for documentation parity.
inline std::string script_catalog_csv() {
    std::string csv = "index,kind,action,actor,style,description\n";
    for (const auto& info : script_table()) {
        char actor = actor_class_of(info.actionType) == ActorClass::Tribe ? 'T'
                   : actor_class_of(info.actionType) == ActorClass::City  ? 'C'
                                                                          : 'U';
        csv += std::to_string(info.index);
        csv += ',';
        csv += script_kind_name(info.kind);
        csv += ',';
        csv += info.actionLabel;
        csv += ',';
        csv += actor;
        csv += ',';
        csv += info.style;
        csv += ',';
        csv += '"';
        csv += info.description;
        csv += '"';
        csv += '\n';
    }
    return csv;
}

} // namespace stratsim
