#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "stratsim/eval.hpp"
#include "stratsim/game.hpp"
#include "stratsim/scripts.hpp"

namespace stratsim {

struct AgentConfig {
    double C = std::sqrt(2.0);
    int playoutLength = 20;
    int budgetFMCalls = 2000;
    int rheaPopulation = 1;
    bool portfolio = false;   // edges are action assignments
    bool biasEnabled = false; // progressive bias term
    bool puEnabled = false;   // progressive unpruning
    double alphaK = 0.5;
    double alphaT = 2.0;
    double alphaBeta = 3.0;
    double beta2 = 1.3;
    std::uint64_t rngSeed = 0;
    ScriptWeights weights{};
};

// Adaptive progressive-unpruning schedule, derived from the action count:
// k0 = max(1, ceil(|A| * alpha_k)), T = ceil(|A| * alpha_t),
// beta1 = |A| * alpha_beta.
struct PUSchedule {
    int k0 = 1;
    int T = 1;
    double beta1 = 1;

    static PUSchedule from(int actionCount, const AgentConfig& cfg) {
        PUSchedule p;
        p.k0 = std::max(1, static_cast<int>(std::ceil(actionCount * cfg.alphaK)));
        p.T = static_cast<int>(std::ceil(actionCount * cfg.alphaT));
        p.beta1 = actionCount * cfg.alphaBeta;
        return p;
    }
};

// Number of children that may be selected: all of them until the parent has
// been visited T times, then the k0 best by h, with rank k > k0 re-admitted
// once parentVisits >= beta2 * beta1^(k - k0).
inline int pu_active_count(int actionCount, int parentVisits, const AgentConfig& cfg) {
    PUSchedule p = PUSchedule::from(actionCount, cfg);
    if (parentVisits <= p.T) return actionCount;
    int active = std::min(p.k0, actionCount);
    double threshold = cfg.beta2;
    for (int k = p.k0 + 1; k <= actionCount; ++k) {
        threshold *= p.beta1; // beta2 * beta1^(k - k0)
        if (static_cast<double>(parentVisits) >= threshold)
            ++active;
        else
            break; // thresholds are increasing in k
    }
    return active;
}

// Eq. 1 with the Eq. 2 bias term: Q + C*sqrt(ln N(s) / N(s,a)) + phi,
// phi = v(a)*w_sigma / (1 + N(s,a)). Unvisited children score infinity.
// When the node's player to move is the opponent, Q is inverted first.
struct EdgeStats {
    double meanQ = 0;
    int visits = 0;
    double value = 0.5;  // v(a); meaningful on assignment edges
    double weight = 0.5; // w_sigma
};

inline double ucb_score(const EdgeStats& child, int parentVisits, double C,
                        bool biasEnabled, bool opponentToMove = false) {
    if (child.visits == 0) return std::numeric_limits<double>::infinity();
    double q = opponentToMove ? 1.0 - child.meanQ : child.meanQ;
    double score = q + C * std::sqrt(std::log(static_cast<double>(parentVisits)) / child.visits);
    if (biasEnabled) score += child.value * child.weight / (1.0 + child.visits);
    return score;
}

struct MoveDiagnostics {
    int iterations = 0;
    int maxDepth = 0;
    std::uint64_t fmCalls = 0;
    int rootActions = 0;
    int rootActive = 0;
    bool budgetWarning = false;
};

class Agent {
public:
    virtual ~Agent() = default;
    virtual Action act(const GameState& state) = 0;
    virtual const std::string& name() const = 0;
    virtual const MoveDiagnostics& diagnostics() const { return diag_; }
    virtual void reseed(std::uint64_t seed) = 0;

protected:
    MoveDiagnostics diag_{};
};

namespace detail {

struct TreeNode;

struct TreeEdge {
    Action action{};
    int script = 0;       // 0 on raw-action edges
    double value = 0.5;   // v(a)
    double weight = 0.5;  // w_sigma
    int visits = 0;
    double total = 0;
    std::unique_ptr<TreeNode> child;

    double mean() const { return visits ? total / visits : 0.0; }
    double h() const { return value * weight; }
};

struct TreeNode {
    int playerToMove = 0;
    int visits = 0;
    bool terminal = false;
    std::vector<TreeEdge> edges;
};

} // namespace detail

// MCTS family: vanilla MCTS on raw actions and the portfolio variants
// (P-MCTS, P-MCTS(B), P-MCTS(PU)) on action assignments.
class SearchAgent : public Agent {
public:
    SearchAgent(const Rules& rules, AgentConfig cfg, std::string name)
        : rules_(rules), cfg_(std::move(cfg)), name_(std::move(name)), rng_(cfg_.rngSeed) {}

    const std::string& name() const override { return name_; }
    const AgentConfig& config() const { return cfg_; }
    void reseed(std::uint64_t seed) override { rng_.seed(seed); }

    Action act(const GameState& rootState) override {
        diag_ = {};
        fm_ = 0;

        auto root = std::make_unique<detail::TreeNode>();
        init_node(*root, rootState);
        diag_.rootActions = static_cast<int>(root->edges.size());
        if (root->edges.empty())
            throw ContractViolation("act: no legal actions (terminal state?)");
        if (root->edges.size() == 1) return root->edges[0].action;

        const int budget = cfg_.budgetFMCalls;
        if (budget < 1) {
            diag_.budgetWarning = true;
            return root->edges[0].action;
        }

        while (fm_ < static_cast<std::uint64_t>(budget)) {
            iterate(*root, rootState);
            ++diag_.iterations;
        }
        diag_.fmCalls = fm_;
        diag_.rootActive = active_count(*root);

        // most visits; ties by mean value, then by index
        int best = 0;
        for (int i = 1; i < static_cast<int>(root->edges.size()); ++i) {
            const auto& e = root->edges[i];
            const auto& b = root->edges[best];
            if (e.visits > b.visits ||
                (e.visits == b.visits && e.mean() > b.mean()))
                best = i;
        }
        return root->edges[best].action;
    }

private:
    const Rules& rules_;
    AgentConfig cfg_;
    std::string name_;
    Rng rng_;
    std::uint64_t fm_ = 0;

    bool can_apply() const {
        return fm_ < static_cast<std::uint64_t>(cfg_.budgetFMCalls + cfg_.playoutLength);
    }

    void apply_counted(GameState& s, const Action& a) {
        apply_inplace(rules_, s, a);
        ++fm_;
    }

    void init_node(detail::TreeNode& node, const GameState& s) {
        node.playerToMove = s.activePlayer;
        node.terminal = terminal_status(s).terminal();
        if (node.terminal) return;
        if (cfg_.portfolio) {
            thread_local std::vector<ActionAssignment> taus;
            enumerate_assignments(rules_, s, s.activePlayer, cfg_.weights, taus);
            node.edges.reserve(taus.size());
            for (const auto& tau : taus) {
                detail::TreeEdge e;
                e.action = tau.action;
                e.script = tau.script;
                e.value = tau.value;
                e.weight = tau.weight;
                node.edges.push_back(std::move(e));
            }
            // rank children by heuristic h = v*w (stable: enumeration order
            // breaks ties), so progressive unpruning keeps the best prefix
            std::stable_sort(node.edges.begin(), node.edges.end(),
                             [](const detail::TreeEdge& a, const detail::TreeEdge& b) {
                                 return a.h() > b.h();
                             });
        } else {
            thread_local std::vector<Action> acts;
            legal_actions(rules_, s, s.activePlayer, acts);
            node.edges.reserve(acts.size());
            for (const auto& a : acts) {
                detail::TreeEdge e;
                e.action = a;
                node.edges.push_back(std::move(e));
            }
        }
    }

    int active_count(const detail::TreeNode& node) const {
        int n = static_cast<int>(node.edges.size());
        if (!cfg_.puEnabled || n == 0) return n;
        return pu_active_count(n, node.visits, cfg_);
    }

    int select_edge(const detail::TreeNode& node, int rootPlayer) {
        const int active = active_count(node);
        // first-play urgency: first unvisited active child
        for (int i = 0; i < active; ++i)
            if (node.edges[i].visits == 0) return i;
        const bool invert = node.playerToMove != rootPlayer;
        int best = 0;
        double bestScore = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < active; ++i) {
            const auto& e = node.edges[i];
            EdgeStats stats{e.mean(), e.visits, e.value, e.weight};
            double score =
                ucb_score(stats, node.visits, cfg_.C, cfg_.biasEnabled && e.script != 0, invert);
            if (score > bestScore) {
                bestScore = score;
                best = i;
            }
        }
        return best;
    }

    void iterate(detail::TreeNode& root, const GameState& rootState) {
        GameState state = rootState;
        state.fmCalls = nullptr; // counted locally
        const int rootPlayer = rootState.activePlayer;

        detail::TreeNode* node = &root;
        thread_local std::vector<detail::TreeEdge*> path;
        path.clear();
        int depth = 0;

        // selection; stops at an unvisited edge, a terminal node, or the budget
        while (!node->terminal && can_apply()) {
            int idx = select_edge(*node, rootPlayer);
            detail::TreeEdge& e = node->edges[idx];
            apply_counted(state, e.action);
            path.push_back(&e);
            ++depth;
            if (!e.child) {
                // expansion: one new node per iteration
                e.child = std::make_unique<detail::TreeNode>();
                init_node(*e.child, state);
                node = e.child.get();
                break;
            }
            node = e.child.get();
            if (e.visits == 0) break; // newly expanded elsewhere on this path
        }
        diag_.maxDepth = std::max(diag_.maxDepth, depth);

        // rollout
        double reward;
        if (node->terminal) {
            reward = evaluate_diff(rules_, rootState, state, rootPlayer);
        } else {
            rollout(state);
            reward = evaluate_diff(rules_, rootState, state, rootPlayer);
        }

        // backpropagation
        root.visits += 1;
        detail::TreeNode* n = &root;
        for (detail::TreeEdge* e : path) {
            e->visits += 1;
            e->total += reward;
            if (e->child) {
                e->child->visits += 1;
                n = e->child.get();
            }
        }
        (void)n;
    }

    void rollout(GameState& state) {
        for (int step = 0; step < cfg_.playoutLength; ++step) {
            if (!can_apply() || terminal_status(state).terminal()) return;
            if (cfg_.portfolio) {
                thread_local std::vector<ActionAssignment> taus;
                enumerate_assignments(rules_, state, state.activePlayer, cfg_.weights, taus);
                if (taus.empty()) return;
                const auto& tau = taus[rng_() % taus.size()];
                apply_counted(state, tau.action);
            } else {
                thread_local std::vector<Action> acts;
                legal_actions(rules_, state, state.activePlayer, acts);
                if (acts.empty()) return;
                apply_counted(state, acts[rng_() % acts.size()]);
            }
        }
    }
};

// (1+1) rolling-horizon evolution over a fixed-length action sequence.
class RheaAgent : public Agent {
public:
    RheaAgent(const Rules& rules, AgentConfig cfg, std::string name = "rhea")
        : rules_(rules), cfg_(std::move(cfg)), name_(std::move(name)), rng_(cfg_.rngSeed) {}

    const std::string& name() const override { return name_; }
    void reseed(std::uint64_t seed) override { rng_.seed(seed); }

    Action act(const GameState& rootState) override {
        diag_ = {};
        fm_ = 0;
        const int len = cfg_.playoutLength;
        const auto rootActs = legal_actions(rules_, rootState, rootState.activePlayer);
        diag_.rootActions = static_cast<int>(rootActs.size());
        if (rootActs.empty())
            throw ContractViolation("act: no legal actions (terminal state?)");
        if (rootActs.size() == 1) return rootActs[0];
        if (cfg_.budgetFMCalls < len) {
            diag_.budgetWarning = true;
            return rootActs[0];
        }

        std::vector<Action> best(len, unset_action());
        double bestReward = evaluate(rootState, best);

        while (fm_ + static_cast<std::uint64_t>(len) <=
               static_cast<std::uint64_t>(cfg_.budgetFMCalls)) {
            std::vector<Action> cand = best;
            cand[rng_() % len] = unset_action(); // re-randomized during repair
            double reward = evaluate(rootState, cand);
            ++diag_.iterations;
            if (reward > bestReward) {
                bestReward = reward;
                best = cand;
            }
        }
        diag_.fmCalls = fm_;
        return best[0];
    }

private:
    const Rules& rules_;
    AgentConfig cfg_;
    std::string name_;
    Rng rng_;
    std::uint64_t fm_ = 0;

    static Action unset_action() { return {ActionType::Count, -1, -1, 0}; }

    // Applies the sequence, repairing unset or illegal entries in place with
    // uniformly random legal actions.
    double evaluate(const GameState& rootState, std::vector<Action>& genome) {
        GameState state = rootState;
        state.fmCalls = nullptr;
        thread_local std::vector<Action> acts;
        for (auto& a : genome) {
            if (terminal_status(state).terminal()) break;
            if (a.type == ActionType::Count || validate(rules_, state, a) != nullptr) {
                legal_actions(rules_, state, state.activePlayer, acts);
                a = acts[rng_() % acts.size()];
            }
            apply_inplace(rules_, state, a);
            ++fm_;
        }
        return evaluate_diff(rules_, rootState, state, rootState.activePlayer);
    }
};

// Baseline that always ends the turn; handy as a sanity-check opponent.
class EndTurnAgent : public Agent {
public:
    explicit EndTurnAgent(std::string name = "endturn") : name_(std::move(name)) {}
    const std::string& name() const override { return name_; }
    void reseed(std::uint64_t) override {}
    Action act(const GameState& s) override {
        return {ActionType::EndTurn, s.activePlayer, -1, 0};
    }

private:
    std::string name_;
};

// Uniformly random over legal actions.
class RandomAgent : public Agent {
public:
    RandomAgent(const Rules& rules, std::uint64_t seed, std::string name = "random")
        : rules_(rules), name_(std::move(name)), rng_(seed) {}
    const std::string& name() const override { return name_; }
    void reseed(std::uint64_t seed) override { rng_.seed(seed); }
    Action act(const GameState& s) override {
        auto acts = legal_actions(rules_, s, s.activePlayer);
        if (acts.empty()) throw ContractViolation("act: terminal state");
        return acts[rng_() % acts.size()];
    }

private:
    const Rules& rules_;
    std::string name_;
    Rng rng_;
};

inline AgentConfig agent_config_for(const std::string& kind) {
    AgentConfig cfg;
    if (kind == "mcts") {
        // defaults
    } else if (kind == "pmcts") {
        cfg.portfolio = true;
    } else if (kind == "pmcts-b") {
        cfg.portfolio = true;
        cfg.biasEnabled = true;
    } else if (kind == "pmcts-pu") {
        cfg.portfolio = true;
        cfg.biasEnabled = true;
        cfg.puEnabled = true;
    } else if (kind == "rhea" || kind == "random" || kind == "endturn") {
        // no search tree settings
    } else {
        throw std::invalid_argument("unknown agent kind: " + kind);
    }
    return cfg;
}

inline std::unique_ptr<Agent> make_agent(const Rules& rules, const std::string& kind,
                                         AgentConfig cfg) {
    if (kind == "rhea") return std::make_unique<RheaAgent>(rules, cfg);
    if (kind == "random") return std::make_unique<RandomAgent>(rules, cfg.rngSeed);
    if (kind == "endturn") return std::make_unique<EndTurnAgent>();
    return std::make_unique<SearchAgent>(rules, cfg, kind);
}

inline std::unique_ptr<Agent> make_agent(const Rules& rules, const std::string& kind,
                                         std::uint64_t seed) {
    AgentConfig cfg = agent_config_for(kind);
    cfg.rngSeed = seed;
    return make_agent(rules, kind, cfg);
}

} // namespace stratsim
