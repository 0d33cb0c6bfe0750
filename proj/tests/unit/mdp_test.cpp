#include "helpers.hpp"

#include "doctest.h"

#include <cmath>
#include <fstream>

using namespace dltl;
using testing::R;

namespace {

nlohmann::json load_json(const char* name) {
    std::ifstream in(testing::data_path(name));
    return nlohmann::json::parse(in);
}

Rational example_optimum() {
    // best switch step for G p & F !p at 0.99
    auto lam = R("99/100");
    Rational best(0);
    for (unsigned k = 0; k <= 200; ++k) best = max(best, 1 - max(pow(lam, k), 1 - pow(lam, k)));
    return best;
}

}  // namespace

TEST_CASE("loading models") {
    auto stay = load_mdp(load_json("stay_or_leave.json"));
    CHECK(stay.num_states() == 2);
    CHECK(stay.num_actions() == 2);
    auto hazard = load_mdp(load_json("two_hazard_a1_safe.json"));
    CHECK(hazard.num_states() == 3);

    auto j = mdp_to_json(hazard);
    CHECK(mdp_to_json(load_mdp(j)) == j);

    auto bad = load_json("two_hazard_a1_safe.json");
    for (auto& t : bad["transitions"])
        if (t["from"] == "s0" && t["action"] == "a2" && t["to"] == "s0") t["prob"] = "17/20";
    CHECK_THROWS_AS(load_mdp(bad), ValidationError);

    auto missing = load_json("stay_or_leave.json");
    missing["transitions"][0]["to"] = "nowhere";
    CHECK_THROWS_AS(load_mdp(missing), ValidationError);
}

TEST_CASE("product") {
    auto m = stay_or_leave_mdp();
    auto r = compile(parse("G[1/2] p & F[1/2] !p"), m.alphabet);
    auto p = product(m, r);
    CHECK(p.num_states() <= m.num_states() * r.num_states());
    for (std::size_t i = 0; i < p.num_states(); ++i)
        CHECK(p.step_reward_exact[i] == r.reward(p.rm_state[i], m.labels[p.mdp_state[i]]));

    auto narrow = compile(parse("F[1/2] q"));
    CHECK_THROWS(product(m, narrow));
}

TEST_CASE("safety example") {
    auto m = two_hazard_mdp(R("0"), R("1/20"));
    auto r = compile(parse("G[0.9] safe"), m.alphabet);
    auto p = product(m, r);
    auto v = value_iteration(p, 1e-9);
    CHECK(v.at_initial(p) == doctest::Approx(1.0).epsilon(1e-8));
    auto pi = extract_policy(m, r, p, v);
    CHECK(pi.action_names[pi.action(r.initial(), m.initial)] == "a1");
    for (double x : v.v) {
        CHECK(x >= -1e-12);
        CHECK(x <= 1 + 1e-12);
    }
}

TEST_CASE("stay or leave example") {
    auto m = stay_or_leave_mdp();
    BuildOptions opt;
    opt.reduce = true;
    auto r = compile(parse("G[0.99] p & F[0.99] !p"), m.alphabet, opt);
    auto p = product(m, r);
    const double tol = 1e-9;
    auto vs = value_iteration(p, tol, Exec::Serial);
    auto vp = value_iteration(p, tol, Exec::Parallel);
    CHECK(vs.v == vp.v);
    double best = example_optimum().to_double();
    CHECK(std::abs(vs.at_initial(p) - best) <= 1e-6);

    auto pi = extract_policy(m, r, p, vs);
    CHECK(std::abs(policy_value(m, r, pi, tol) - vs.at_initial(p)) <= 2 * tol * 99);
    auto run = simulate(m, pi, 200, 0);
    CHECK(switch_time(m.alphabet, run.word, "p") == 69);

    // always leave: the start state carries p, so the earliest switch is at step 1
    std::vector<std::uint32_t> leave(p.num_states(), m.action_index("a2"));
    auto always = policy_from_choices(m, r, p, leave);
    CHECK(std::abs(policy_value(m, r, always, tol) - 0.01) <= 1e-6);

    auto back = policy_from_json(policy_to_json(pi));
    CHECK(back.act == pi.act);
    CHECK(policy_to_json(back) == policy_to_json(pi));
}

TEST_CASE("simulation is seeded") {
    auto m = two_hazard_mdp(R("1/20"), R("1/20"));
    auto r = compile(parse("G[0.9] safe"), m.alphabet);
    auto p = product(m, r);
    std::vector<std::uint32_t> risky(p.num_states(), m.action_index("a2"));
    auto pi = policy_from_choices(m, r, p, risky);
    auto a = simulate(m, pi, 300, 42), b = simulate(m, pi, 300, 42);
    CHECK(a.states == b.states);
    CHECK(a.actions == b.actions);
    CHECK(a.word == b.word);
}

TEST_CASE("monte carlo agrees with policy evaluation") {
    auto m = two_hazard_mdp(R("1/20"), R("1/10"));
    auto f = parse("G[0.8] safe");
    auto r = compile(f, m.alphabet);
    auto p = product(m, r);
    std::vector<std::uint32_t> first(p.num_states(), m.action_index("a1"));
    auto pi = policy_from_choices(m, r, p, first);
    double exact = policy_value(m, r, pi, 1e-10);
    double sum = 0;
    const int runs = 4000;
    for (int s = 0; s < runs; ++s) sum += rm_eval_finite(r, simulate(m, pi, 80, static_cast<std::uint64_t>(s)).word).to_double();
    CHECK(std::abs(sum / runs - exact) < 0.03);
}

TEST_CASE("block search") {
    auto l1 = R("3/5"), l2 = R("9/10");
    auto k0 = best_block_search(l1, l2, 0, 400);
    auto k10 = best_block_search(l1, l2, 10, 400);
    CHECK(k10 > k0);
    for (std::size_t k = 0; k <= 400; ++k) CHECK(block_value(l1, l2, 0, k) <= block_value(l1, l2, 0, k0));
    CHECK_THROWS_AS(best_block_search(l1, l2, 0, 2), ValidationError);
    CHECK_THROWS_AS(best_block_search(l2, l1, 0, 100), ValidationError);
}
