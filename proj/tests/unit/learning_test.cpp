#include "helpers.hpp"

#include "doctest.h"

using namespace dltl;
using testing::R;

namespace {

// s0 -go-> s1 -go-> s2 (p); "off" leads to a dead state without p.
LabeledMdp corridor() {
    auto j = nlohmann::json::parse(R"({
      "props": ["p"], "actions": ["go", "off"], "initial": "s0",
      "states": [
        {"id": "s0", "label": [], "enabled": ["go", "off"]},
        {"id": "s1", "label": [], "enabled": ["go", "off"]},
        {"id": "s2", "label": ["p"], "enabled": ["go"]},
        {"id": "dead", "label": [], "enabled": ["go"]}
      ],
      "transitions": [
        {"from": "s0", "action": "go", "to": "s1", "prob": "1"},
        {"from": "s0", "action": "off", "to": "dead", "prob": "1"},
        {"from": "s1", "action": "go", "to": "s2", "prob": "1"},
        {"from": "s1", "action": "off", "to": "dead", "prob": "1"},
        {"from": "s2", "action": "go", "to": "s2", "prob": "1"},
        {"from": "dead", "action": "go", "to": "dead", "prob": "1"}
      ]})");
    return load_mdp(j);
}

}  // namespace

TEST_CASE("unrolled leaves carry the finite semantics") {
    auto m = two_hazard_mdp(R("1/10"), R("1/5"));
    auto f = parse("G[1/2] safe");
    auto u = unroll(m, f, R("1/16"));
    CHECK(u.horizon == 4);
    std::size_t leaves = 0;
    for (const auto& n : u.nodes)
        if (n.leaf) {
            ++leaves;
            CHECK(n.depth == u.horizon);
            CHECK(n.leaf_reward == doctest::Approx(eval_finite(f, u.alphabet, u.trie.word(n.history)).to_double()));
        }
    CHECK(leaves > 0);
    std::size_t bound = 0, layer = m.num_states();
    for (std::size_t t = 0; t <= u.horizon; ++t, layer *= m.alphabet.size()) bound += layer;
    CHECK(u.nodes.size() <= bound);

    auto prop = unroll(m, parse("safe"), R("1/16"));
    CHECK(prop.horizon == 0);
    CHECK(prop.nodes.size() == 1);
    CHECK(prop.nodes[0].leaf_reward == 1.0);

    CHECK_THROWS_AS(unroll(m, parse("G[0.99] safe"), R("1/100"), 1000), BudgetExceeded);
}

TEST_CASE("backward induction on the unrolled example") {
    auto m = stay_or_leave_mdp();
    auto f = parse("G[0.99] p & F[0.99] !p");
    auto u = unroll(m, f, R("1/20"));
    auto sol = backward_induction(u);
    CHECK(std::abs(sol.root() - 0.49987) <= 0.1);
    auto pi = policy_of(u, sol);
    CHECK(evaluate_history_policy(u, pi) == doctest::Approx(sol.root()));
}

TEST_CASE("pac learner on a deterministic corridor") {
    auto m = corridor();
    auto f = parse("F[1/2] p");
    PacOptions opt;
    opt.eps = R("1/20");
    MdpEnvironment env(m, 1);
    auto res = pac_learn(env, f, opt, 1);
    CHECK(res.report.converged);
    auto u = unroll(m, f, opt.eps / 2);
    CHECK(evaluate_history_policy(u, res.policy) == doctest::Approx(0.25));
    CHECK(backward_induction(u).root() == doctest::Approx(0.25));
}

TEST_CASE("pac learner picks the safe action") {
    auto f = parse("G[0.9] safe");
    PacOptions opt;
    opt.eps = R("1/20");
    opt.conf = R("1/10");
    for (int scenario = 0; scenario < 2; ++scenario) {
        auto m = scenario == 0 ? two_hazard_mdp(R("0"), R("1/20")) : two_hazard_mdp(R("1/20"), R("0"));
        MdpEnvironment env(m, 7);
        auto res = pac_learn(env, f, opt, 7);
        std::uint32_t a = res.policy.action(FiniteWord{m.labels[m.initial]}, m.initial, m.enabled_actions(m.initial));
        CHECK(m.action_names[a] == (scenario == 0 ? "a1" : "a2"));
    }
}

TEST_CASE("q-learning stays in range and learns safety") {
    auto m = two_hazard_mdp(R("0"), R("1/20"));
    auto r = compile(parse("G[0.9] safe"), m.alphabet);
    RlOptions opt;
    opt.episodes = 300;
    opt.steps_per_episode = 200;
    MdpEnvironment env(m, 3);
    auto res = rl_product(env, r, m.state_names, m.action_names, opt, 3);
    CHECK(res.min_q >= 0.0);
    CHECK(res.max_q <= 1.0 + 1e-12);
    CHECK(res.max_reward <= (1 - r.lambda()).to_double() + 1e-12);
    CHECK(policy_value(m, r, res.policy) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("q-learning on the stay or leave example") {
    auto m = stay_or_leave_mdp();
    BuildOptions b;
    b.reduce = true;
    auto r = compile(parse("G[0.99] p & F[0.99] !p"), m.alphabet, b);
    MdpEnvironment env(m, 0);
    auto res = rl_product(env, r, m.state_names, m.action_names, RlOptions{}, 0);
    auto run = simulate(m, res.policy, 300, 0);
    auto k = switch_time(m.alphabet, run.word, "p");
    CHECK(k >= 67);
    CHECK(k <= 71);
}
