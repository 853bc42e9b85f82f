#pragma once

// Built-in copy of data/rules.txt. The engine always works from a parsed
// Rules object; the CLI loads the file from disk when given, otherwise this
// string. Keep the two in sync (test_rules checks the shipped file).

namespace stratsim {

inline constexpr const char* default_rules_text = R"RULES(# stratsim rules data, version 1
# All balance numbers live here and are frozen for reproducibility.
format_version = 1

[units]
# name = maxHP attack defence movement range cost spawnable tech
Warrior    = 10 2 2 1 1 2  yes -
Rider      = 10 2 1 3 1 3  yes Riding
Defender   = 15 1 3 1 1 3  yes Shields
Swordsman  = 15 3 3 1 1 5  yes Smithery
Knight     = 10 4 1 3 1 8  yes Chivalry
Archer     = 10 2 1 1 2 3  yes Archery
Catapult   = 10 4 1 1 3 8  yes Mathematics
MindBender = 10 0 1 1 1 5  yes Medicine
SuperUnit  = 40 5 3 1 1 10 no  -
Boat       = 10 1 1 2 2 3  no  Sailing
Ship       = 15 2 2 3 2 6  no  Navigation
Battleship = 30 4 3 3 2 9  no  Navigation

[techs]
# name = branch tier parent cost
Farming      = Farms    1 - 5
Shields      = Farms    2 Farming 7
Windmills    = Farms    2 Farming 7
Construction = Farms    3 Windmills 9
Medicine     = Farms    3 Shields 9
Fishing      = Naval    1 - 5
Sailing      = Naval    2 Fishing 7
Whaling      = Naval    2 Fishing 7
Navigation   = Naval    3 Sailing 9
Aquaculture  = Naval    3 Whaling 9
Climbing     = Mountain 1 - 5
Mining       = Mountain 2 Climbing 7
Meditation   = Mountain 2 Climbing 7
Smithery     = Mountain 3 Mining 9
Philosophy   = Mountain 3 Meditation 9
Hunting      = Range    1 - 5
Archery      = Range    2 Hunting 7
Forestry     = Range    2 Hunting 7
Mathematics  = Range    3 Forestry 9
Spiritualism = Range    3 Archery 9
Roads        = Network  1 - 5
Riding       = Network  2 Roads 7
Trade        = Network  2 Roads 7
Chivalry     = Network  3 Riding 9

[buildings]
# name = cost population tech terrain adjacency-source adjacency-effect
# adjacency: +1 per adjacent building of the named kind, granting extra
# population (pop) or city production (prod); '-' for none.
Farm        = 3 2 Farming Plain - -
Windmill    = 4 1 Windmills Plain Farm pop
LumberHut   = 2 1 Forestry Forest - -
Sawmill     = 4 1 Mathematics Plain LumberHut pop
Mine        = 4 2 Mining MountainOre - -
Forge       = 4 1 Smithery Plain Mine pop
Port        = 5 1 Sailing ShallowWater - -
CustomHouse = 5 0 Trade Plain Port prod
Monument    = 8 3 Construction Plain - -
Temple      = 6 1 Meditation Plain - -

[actions]
gather_cost = 2
road_cost = 2
burn_forest_cost = 2
grow_forest_cost = 2
clear_forest_refund = 1
examine_star_bonus = 5
disband_refund_divisor = 2
recover_hp = 2
heal_others_hp = 4
veteran_bonus_hp = 5
whaling_star_bonus = 8

[cities]
# population needed to reach level 2..6 (cumulative); production = level
# (+1 for the capital) + growth bonuses + custom house adjacency.
level_thresholds = 2 5 9 14 20
max_level = 6
border_radius = 1
start_stars = 5

[combat]
# damage = round(attack * hp/maxHP * attack_scale / (attack + defence))
attack_scale = 4.5

[score]
city = 100
population = 10
technology = 40
unit_cost = 5
tile = 2
building = 10

[eval]
# evaluate_diff weights; value = clamp(0.5 + sum(w_i * df_i) / normalizer)
production = 3
technologies = 4
cities = 8
units = 2
score = 0.01
tiles = 1
buildings = 2
normalizer = 60
)RULES";

} // namespace stratsim
