#pragma once

#include "dltl/reward_machine.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dltl {

struct Transition {
    std::uint32_t to;
    Rational prob;
    double p;
};

class LabeledMdp {
public:
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    Alphabet alphabet;
    std::vector<Letter> labels;
    std::vector<std::vector<bool>> enabled;                    // [s][a]
    std::vector<std::vector<std::vector<Transition>>> trans;   // [s][a]
    std::uint32_t initial = 0;

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_actions() const { return action_names.size(); }
    std::vector<std::uint32_t> enabled_actions(std::uint32_t s) const;
    std::uint32_t state_index(const std::string& name) const;
    std::uint32_t action_index(const std::string& name) const;

    // Checks distributions sum exactly to one and every state has an enabled action.
    void validate() const;
};

LabeledMdp load_mdp(const nlohmann::json& j);
nlohmann::json mdp_to_json(const LabeledMdp& m);

// Sample a successor of (s, a).
std::uint32_t sample_next(const LabeledMdp& m, std::uint32_t s, std::uint32_t a, std::mt19937_64& rng);

struct ProductMdp {
    Rational lambda;
    double lam = 0;
    std::vector<std::uint32_t> mdp_state, rm_state;   // per product state
    std::vector<double> step_reward;                  // r(q, L(s))
    std::vector<Rational> step_reward_exact;
    // CSR layout: choices of state i are choice_begin[i]..choice_begin[i+1]
    std::vector<std::uint32_t> choice_begin;
    std::vector<std::uint32_t> choice_action;
    std::vector<std::uint32_t> succ_begin;           // per choice
    std::vector<std::uint32_t> succ;
    std::vector<double> prob;
    std::uint32_t initial = 0;

    std::size_t num_states() const { return mdp_state.size(); }
    // product index of (s, q), or -1
    std::int64_t find(std::uint32_t s, std::uint32_t q) const;
    std::vector<std::int64_t> index;                  // dense (s * |Q| + q) -> product id
    std::size_t machine_states = 0;
};

ProductMdp product(const LabeledMdp& m, const RewardMachine& r);

enum class Exec { Serial, Parallel };

struct ValueFunction {
    std::vector<double> v;
    std::size_t iterations = 0;
    double residual = 0;
    double at_initial(const ProductMdp& p) const { return v[p.initial]; }
};

ValueFunction value_iteration(const ProductMdp& p, double tol = 1e-9, Exec exec = Exec::Parallel,
                              std::size_t max_iter = 10000000);
// One Jacobi sweep; returns max |new - old|.
double bellman_sweep(const ProductMdp& p, const std::vector<double>& v, std::vector<double>& out, Exec exec);

struct FinitePolicy {
    RewardMachine machine;
    std::vector<std::string> state_names, action_names;
    std::vector<std::uint32_t> act;  // [q * |S| + s]
    std::uint32_t action(std::uint32_t q, std::uint32_t s) const { return act[q * state_names.size() + s]; }
};

// Greedy in V; ties go to the smallest action index.
FinitePolicy extract_policy(const LabeledMdp& m, const RewardMachine& r, const ProductMdp& p, const ValueFunction& v);
// Policy table for a choice per product state; unreachable pairs take the smallest enabled action.
FinitePolicy policy_from_choices(const LabeledMdp& m, const RewardMachine& r, const ProductMdp& p,
                                 const std::vector<std::uint32_t>& action_of_state);

double policy_value(const LabeledMdp& m, const RewardMachine& r, const FinitePolicy& pi, double tol = 1e-9);

nlohmann::json policy_to_json(const FinitePolicy& pi);
FinitePolicy policy_from_json(const nlohmann::json& j);

struct Run {
    std::vector<std::uint32_t> states, actions;
    FiniteWord word;
};

Run simulate(const LabeledMdp& m, const FinitePolicy& pi, std::size_t steps, std::uint64_t seed);
// Index of the first letter without p; word length when p always holds.
std::size_t switch_time(const Alphabet& a, const FiniteWord& w, const std::string& p);

// argmax over k1 in [0, kmax] of min(l1^k0 (1 - l2^k1), l2^(k0 + k1)).
std::size_t best_block_search(const Rational& l1, const Rational& l2, std::size_t k0, std::size_t kmax);
Rational block_value(const Rational& l1, const Rational& l2, std::size_t k0, std::size_t k1);

// Models from the examples: two-hazard safety and stay-or-leave.
LabeledMdp two_hazard_mdp(const Rational& p1, const Rational& p2);
LabeledMdp stay_or_leave_mdp();

}  // namespace dltl
