#pragma once

#include <algorithm>

#include "stratsim/game.hpp"

namespace stratsim {

struct EvalFeatures {
    double production = 0;
    double technologies = 0;
    double cities = 0;
    double units = 0;
    double score = 0;
    double tiles = 0;
    double buildings = 0;
};

inline EvalFeatures eval_features(const Rules& rules, const GameState& s, int player) {
    Possessions p = possessions(rules, s, player);
    EvalFeatures f;
    f.production = p.production;
    f.technologies = p.techs;
    f.cities = p.cities;
    f.units = p.units;
    f.score = score_of(rules, s, player);
    f.tiles = p.tiles;
    f.buildings = p.buildings;
    return f;
}

// Weighted sum of feature differentials, centred at 0.5 so that "no change"
// is neutral. Differentials are relative: own gains minus opponent gains.
// Terminal end states override with 1 (win) / 0 (loss).
inline double evaluate_diff(const Rules& rules, const GameState& start,
                            const GameState& end, int player) {
    GameResult r = terminal_status(end);
    if (r.terminal()) return r.player == player ? 1.0 : 0.0;

    const int opp = 1 - player;
    EvalFeatures s0 = eval_features(rules, start, player);
    EvalFeatures s1 = eval_features(rules, end, player);
    EvalFeatures o0 = eval_features(rules, start, opp);
    EvalFeatures o1 = eval_features(rules, end, opp);

    const EvalWeights& w = rules.eval;
    double sum = w.production * ((s1.production - s0.production) - (o1.production - o0.production)) +
                 w.technologies * ((s1.technologies - s0.technologies) - (o1.technologies - o0.technologies)) +
                 w.cities * ((s1.cities - s0.cities) - (o1.cities - o0.cities)) +
                 w.units * ((s1.units - s0.units) - (o1.units - o0.units)) +
                 w.score * ((s1.score - s0.score) - (o1.score - o0.score)) +
                 w.tiles * ((s1.tiles - s0.tiles) - (o1.tiles - o0.tiles)) +
                 w.buildings * ((s1.buildings - s0.buildings) - (o1.buildings - o0.buildings));
    return std::clamp(0.5 + sum / w.normalizer, 0.0, 1.0);
}

} // namespace stratsim
