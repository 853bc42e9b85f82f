#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsim/common.hpp"
#include "stratsim/default_rules.hpp"

namespace stratsim {

enum class UnitTypeId : std::uint8_t {
    Warrior, Rider, Defender, Swordsman, Knight, Archer, Catapult,
    MindBender, SuperUnit, Boat, Ship, Battleship,
    Count
};
inline constexpr int num_unit_types = static_cast<int>(UnitTypeId::Count);

enum class TechId : std::uint8_t {
    Farming, Shields, Windmills, Construction, Medicine,
    Fishing, Sailing, Whaling, Navigation, Aquaculture,
    Climbing, Mining, Meditation, Smithery, Philosophy,
    Hunting, Archery, Forestry, Mathematics, Spiritualism,
    Roads, Riding, Trade, Chivalry,
    Count, None
};
inline constexpr int num_techs = static_cast<int>(TechId::Count);

enum class TechBranch : std::uint8_t { Farms, Naval, Mountain, Range, Network, Count };

enum class BuildingKind : std::uint8_t {
    Farm, Windmill, LumberHut, Sawmill, Mine, Forge, Port, CustomHouse,
    Monument, Temple,
    Count, None
};
inline constexpr int num_buildings = static_cast<int>(BuildingKind::Count);

enum class BuildTerrain : std::uint8_t { Plain, Forest, MountainOre, ShallowWater };
enum class AdjEffect : std::uint8_t { None, Population, Production };

struct UnitStats {
    int maxHP = 0;
    int attack = 0;
    int defence = 0;
    int movement = 0;
    int range = 0;
    int cost = 0;
    bool spawnable = false;
    TechId requiredTech = TechId::None;
};

struct TechInfo {
    TechBranch branch = TechBranch::Farms;
    int tier = 1;
    TechId parent = TechId::None;
    int cost = 0;
};

struct BuildingInfo {
    int cost = 0;
    int population = 0;
    TechId requiredTech = TechId::None;
    BuildTerrain terrain = BuildTerrain::Plain;
    BuildingKind adjSource = BuildingKind::None;
    AdjEffect adjEffect = AdjEffect::None;
};

struct ActionCosts {
    int gather = 2;
    int road = 2;
    int burnForest = 2;
    int growForest = 2;
    int clearForestRefund = 1;
    int examineStarBonus = 5;
    int disbandRefundDivisor = 2;
    int recoverHP = 2;
    int healOthersHP = 4;
    int veteranBonusHP = 5;
    int whalingStarBonus = 8;
};

struct CityRules {
    std::vector<int> levelThresholds{2, 5, 9, 14, 20};
    int maxLevel = 6;
    int borderRadius = 1;
    int startStars = 5;
};

struct ScoreWeights {
    int city = 100;
    int population = 10;
    int technology = 40;
    int unitCost = 5;
    int tile = 2;
    int building = 10;
};

struct EvalWeights {
    double production = 3;
    double technologies = 4;
    double cities = 8;
    double units = 2;
    double score = 0.01;
    double tiles = 1;
    double buildings = 2;
    double normalizer = 60;
};

// All balance data: one immutable table, loaded once, checksummed.
struct Rules {
    std::array<UnitStats, num_unit_types> units{};
    std::array<TechInfo, num_techs> techs{};
    std::array<BuildingInfo, num_buildings> buildings{};
    ActionCosts costs{};
    CityRules city{};
    double attackScale = 4.5;
    ScoreWeights score{};
    EvalWeights eval{};
    std::uint64_t checksum = 0;

    static const Rules& builtin();
    static Rules parse(const std::string& text);
    static Rules load_file(const std::string& path);
};

inline const char* unit_type_name(UnitTypeId t) {
    static constexpr const char* names[] = {
        "Warrior", "Rider", "Defender", "Swordsman", "Knight", "Archer",
        "Catapult", "MindBender", "SuperUnit", "Boat", "Ship", "Battleship"};
    return names[static_cast<int>(t)];
}

inline const char* tech_name(TechId t) {
    static constexpr const char* names[] = {
        "Farming", "Shields", "Windmills", "Construction", "Medicine",
        "Fishing", "Sailing", "Whaling", "Navigation", "Aquaculture",
        "Climbing", "Mining", "Meditation", "Smithery", "Philosophy",
        "Hunting", "Archery", "Forestry", "Mathematics", "Spiritualism",
        "Roads", "Riding", "Trade", "Chivalry"};
    return names[static_cast<int>(t)];
}

inline const char* branch_name(TechBranch b) {
    static constexpr const char* names[] = {"Farms", "Naval", "Mountain", "Range", "Network"};
    return names[static_cast<int>(b)];
}

inline const char* building_name(BuildingKind b) {
    static constexpr const char* names[] = {
        "Farm", "Windmill", "LumberHut", "Sawmill", "Mine", "Forge", "Port",
        "CustomHouse", "Monument", "Temple"};
    return names[static_cast<int>(b)];
}

namespace detail {

inline UnitTypeId unit_type_from_name(const std::string& s) {
    for (int i = 0; i < num_unit_types; ++i)
        if (s == unit_type_name(static_cast<UnitTypeId>(i))) return static_cast<UnitTypeId>(i);
    throw std::runtime_error("rules: unknown unit type '" + s + "'");
}

inline TechId tech_from_name(const std::string& s) {
    if (s == "-") return TechId::None;
    for (int i = 0; i < num_techs; ++i)
        if (s == tech_name(static_cast<TechId>(i))) return static_cast<TechId>(i);
    throw std::runtime_error("rules: unknown technology '" + s + "'");
}

inline TechBranch branch_from_name(const std::string& s) {
    for (int i = 0; i < static_cast<int>(TechBranch::Count); ++i)
        if (s == branch_name(static_cast<TechBranch>(i))) return static_cast<TechBranch>(i);
    throw std::runtime_error("rules: unknown tech branch '" + s + "'");
}

inline BuildingKind building_from_name(const std::string& s) {
    if (s == "-") return BuildingKind::None;
    for (int i = 0; i < num_buildings; ++i)
        if (s == building_name(static_cast<BuildingKind>(i))) return static_cast<BuildingKind>(i);
    throw std::runtime_error("rules: unknown building '" + s + "'");
}

} // namespace detail

inline Rules Rules::parse(const std::string& text) {
    Rules r;
    r.checksum = fnv1a_bytes(text);
    std::array<bool, num_unit_types> unitSeen{};
    std::array<bool, num_techs> techSeen{};
    std::array<bool, num_buildings> buildingSeen{};

    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("rules: line " + std::to_string(lineNo) + ": expected 'key = value'");
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::istringstream val(line.substr(eq + 1));

        auto want = [&](auto& field) {
            if (!(val >> field))
                throw std::runtime_error("rules: line " + std::to_string(lineNo) + ": bad value for " + key);
        };

        if (section == "units") {
            UnitTypeId id = detail::unit_type_from_name(key);
            UnitStats& u = r.units[static_cast<int>(id)];
            std::string spawn, tech;
            want(u.maxHP); want(u.attack); want(u.defence);
            want(u.movement); want(u.range); want(u.cost);
            want(spawn); want(tech);
            u.spawnable = (spawn == "yes");
            u.requiredTech = detail::tech_from_name(tech);
            unitSeen[static_cast<int>(id)] = true;
        } else if (section == "techs") {
            TechId id = detail::tech_from_name(key);
            TechInfo& t = r.techs[static_cast<int>(id)];
            std::string branch, parent;
            want(branch); want(t.tier); want(parent); want(t.cost);
            t.branch = detail::branch_from_name(branch);
            t.parent = detail::tech_from_name(parent);
            techSeen[static_cast<int>(id)] = true;
        } else if (section == "buildings") {
            BuildingKind id = detail::building_from_name(key);
            BuildingInfo& bi = r.buildings[static_cast<int>(id)];
            std::string tech, terrain, adjSrc, adjEff;
            want(bi.cost); want(bi.population); want(tech); want(terrain);
            want(adjSrc); want(adjEff);
            bi.requiredTech = detail::tech_from_name(tech);
            if (terrain == "Plain") bi.terrain = BuildTerrain::Plain;
            else if (terrain == "Forest") bi.terrain = BuildTerrain::Forest;
            else if (terrain == "MountainOre") bi.terrain = BuildTerrain::MountainOre;
            else if (terrain == "ShallowWater") bi.terrain = BuildTerrain::ShallowWater;
            else throw std::runtime_error("rules: line " + std::to_string(lineNo) + ": bad terrain " + terrain);
            bi.adjSource = detail::building_from_name(adjSrc);
            bi.adjEffect = adjEff == "pop"    ? AdjEffect::Population
                         : adjEff == "prod"   ? AdjEffect::Production
                         : AdjEffect::None;
            buildingSeen[static_cast<int>(id)] = true;
        } else if (section == "actions") {
            ActionCosts& c = r.costs;
            if (key == "gather_cost") want(c.gather);
            else if (key == "road_cost") want(c.road);
            else if (key == "burn_forest_cost") want(c.burnForest);
            else if (key == "grow_forest_cost") want(c.growForest);
            else if (key == "clear_forest_refund") want(c.clearForestRefund);
            else if (key == "examine_star_bonus") want(c.examineStarBonus);
            else if (key == "disband_refund_divisor") want(c.disbandRefundDivisor);
            else if (key == "recover_hp") want(c.recoverHP);
            else if (key == "heal_others_hp") want(c.healOthersHP);
            else if (key == "veteran_bonus_hp") want(c.veteranBonusHP);
            else if (key == "whaling_star_bonus") want(c.whalingStarBonus);
            else throw std::runtime_error("rules: unknown key " + key);
        } else if (section == "cities") {
            if (key == "level_thresholds") {
                r.city.levelThresholds.clear();
                int v;
                while (val >> v) r.city.levelThresholds.push_back(v);
            } else if (key == "max_level") want(r.city.maxLevel);
            else if (key == "border_radius") want(r.city.borderRadius);
            else if (key == "start_stars") want(r.city.startStars);
            else throw std::runtime_error("rules: unknown key " + key);
        } else if (section == "combat") {
            if (key == "attack_scale") want(r.attackScale);
            else throw std::runtime_error("rules: unknown key " + key);
        } else if (section == "score") {
            ScoreWeights& s = r.score;
            if (key == "city") want(s.city);
            else if (key == "population") want(s.population);
            else if (key == "technology") want(s.technology);
            else if (key == "unit_cost") want(s.unitCost);
            else if (key == "tile") want(s.tile);
            else if (key == "building") want(s.building);
            else throw std::runtime_error("rules: unknown key " + key);
        } else if (section == "eval") {
            EvalWeights& w = r.eval;
            if (key == "production") want(w.production);
            else if (key == "technologies") want(w.technologies);
            else if (key == "cities") want(w.cities);
            else if (key == "units") want(w.units);
            else if (key == "score") want(w.score);
            else if (key == "tiles") want(w.tiles);
            else if (key == "buildings") want(w.buildings);
            else if (key == "normalizer") want(w.normalizer);
            else throw std::runtime_error("rules: unknown key " + key);
        } else if (section.empty()) {
            // format_version, ignored beyond presence
        } else {
            throw std::runtime_error("rules: unknown section [" + section + "]");
        }
    }

    for (int i = 0; i < num_unit_types; ++i)
        if (!unitSeen[i]) throw std::runtime_error(std::string("rules: missing unit ") + unit_type_name(static_cast<UnitTypeId>(i)));
    for (int i = 0; i < num_techs; ++i)
        if (!techSeen[i]) throw std::runtime_error(std::string("rules: missing tech ") + tech_name(static_cast<TechId>(i)));
    for (int i = 0; i < num_buildings; ++i)
        if (!buildingSeen[i]) throw std::runtime_error(std::string("rules: missing building ") + building_name(static_cast<BuildingKind>(i)));
    return r;
}

inline Rules Rules::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("rules: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

inline const Rules& Rules::builtin() {
    static const Rules r = parse(default_rules_text);
    return r;
}

} // namespace stratsim
