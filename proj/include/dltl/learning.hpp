#pragma once

#include "dltl/mdp.hpp"

#include <map>
#include <random>

namespace dltl {

struct Observation {
    std::uint32_t state;
    Letter letter;
};

// What a learner may see: states, labels, enabled actions. Never the transition table.
class Environment {
public:
    virtual ~Environment() = default;
    virtual Observation reset() = 0;
    virtual Observation step(std::uint32_t action) = 0;
    virtual std::vector<std::uint32_t> enabled(std::uint32_t state) const = 0;
    virtual const Alphabet& alphabet() const = 0;
    virtual std::size_t num_states() const = 0;
    virtual std::size_t num_actions() const = 0;
    std::size_t steps_taken() const { return steps_; }

protected:
    std::size_t steps_ = 0;
};

class MdpEnvironment : public Environment {
public:
    MdpEnvironment(const LabeledMdp& m, std::uint64_t seed) : m_(m), rng_(seed) {}
    Observation reset() override;
    Observation step(std::uint32_t action) override;
    std::vector<std::uint32_t> enabled(std::uint32_t s) const override { return m_.enabled_actions(s); }
    const Alphabet& alphabet() const override { return m_.alphabet; }
    std::size_t num_states() const override { return m_.num_states(); }
    std::size_t num_actions() const override { return m_.num_actions(); }

private:
    const LabeledMdp& m_;
    std::mt19937_64 rng_;
    std::uint32_t cur_ = 0;
};

// Prefix tree of label histories; id 0 is the empty history.
class HistoryTrie {
public:
    HistoryTrie() : parent_{0}, letter_{0}, depth_{0} {}
    std::uint32_t child(std::uint32_t h, Letter l);
    std::int64_t find_child(std::uint32_t h, Letter l) const;
    FiniteWord word(std::uint32_t h) const;
    std::size_t depth(std::uint32_t h) const { return depth_[h]; }
    std::uint32_t parent(std::uint32_t h) const { return parent_[h]; }
    Letter letter(std::uint32_t h) const { return letter_[h]; }
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<Letter> letter_;
    std::vector<std::size_t> depth_;
    std::map<std::pair<std::uint32_t, Letter>, std::uint32_t> kids_;
};

struct HistoryPolicy {
    HistoryTrie trie;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> act;  // (history, state) -> action
    std::size_t horizon = 0;
    // history is the label word up to and including the current state
    std::uint32_t action(const FiniteWord& history, std::uint32_t state, const std::vector<std::uint32_t>& enabled) const;
};

struct UnrolledNode {
    std::uint32_t state;
    std::uint32_t history;
    std::size_t depth;
    std::vector<std::uint32_t> actions;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> children;  // per listed action
    double leaf_reward = 0;
    bool leaf = false;
};

struct UnrolledMdp {
    std::size_t horizon = 0;
    Alphabet alphabet;
    HistoryTrie trie;
    std::vector<UnrolledNode> nodes;  // node 0 is the root; children come after parents
};

UnrolledMdp unroll(const LabeledMdp& m, const Formula& f, const Rational& eps, std::size_t node_budget = 5000000);

struct FiniteHorizonSolution {
    std::vector<double> value;
    std::vector<std::uint32_t> best;  // action per non-leaf node
    double root() const { return value.front(); }
};

FiniteHorizonSolution backward_induction(const UnrolledMdp& u);
HistoryPolicy policy_of(const UnrolledMdp& u, const FiniteHorizonSolution& sol);
// Expected leaf reward of a history policy on the known unrolled model.
double evaluate_history_policy(const UnrolledMdp& u, const HistoryPolicy& pi);

struct LearnReport {
    std::string mode;
    std::uint64_t seed = 0;
    std::size_t episodes = 0, env_steps = 0;
    bool converged = false;          // false means the episode budget ran out first
    double estimate = 0;             // learner's own value estimate at the root
    double evaluated = -1;           // true value of the output, when a model was available
    double optimum = -1;
    std::vector<double> trace;       // per-checkpoint estimates
    nlohmann::json extra = nlohmann::json::object();
    nlohmann::json to_json() const;
};

struct PacOptions {
    Rational eps{1, 20};
    Rational conf{1, 10};
    std::size_t known_threshold = 0;   // 0 picks ceil(ln(2|A|/p) / eps)
    std::size_t max_episodes = 200000;
    std::size_t checkpoint_every = 100;
    // nodes whose reachable values span at most this are treated as settled; 0 picks eps/4
    Rational resolve_tol{0};
};

struct PacResult {
    HistoryPolicy policy;
    LearnReport report;
};

PacResult pac_learn(Environment& env, const Formula& f, const PacOptions& opt, std::uint64_t seed);

struct RlOptions {
    std::size_t episodes = 4000;
    std::size_t steps_per_episode = 600;   // long enough to reach the absorbing part of the product
    double alpha = 1.0;          // learning rate at the first visit of a pair
    double alpha_decay = 0.0;    // alpha_n = alpha / (1 + decay * (n - 1))
    double alpha_min = 0.0;
    double epsilon = 0.2;        // exploration at episode 0
    double epsilon_decay = 0.999;
    double epsilon_min = 0.01;
    // Rewards are nonnegative, so 0 is a safe floor. Optimistic 1 stalls: an untried action in an absorbing
    // state keeps every upstream value at 1 until epsilon happens to try it.
    double q_init = 0.0;
    bool replay = true;          // after each episode, repeat its updates last to first
    std::size_t checkpoint_every = 100;
    nlohmann::json to_json() const;
};

struct RlResult {
    FinitePolicy policy;
    LearnReport report;
    double min_reward = 0, max_reward = 0, min_q = 0, max_q = 0;
};

// Q-learning on the product discovered on the fly; the environment must be a LabeledMdp wrapper for
// the output policy to name states, so names are passed in.
RlResult rl_product(Environment& env, const RewardMachine& r, const std::vector<std::string>& state_names,
                    const std::vector<std::string>& action_names, const RlOptions& opt, std::uint64_t seed);

}  // namespace dltl
