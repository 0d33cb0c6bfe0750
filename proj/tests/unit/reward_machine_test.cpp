#include "helpers.hpp"

#include "doctest.h"

#include <random>

using namespace dltl;
using testing::L;
using testing::R;
using testing::W;

namespace {

const Alphabet P({"p"});
const Alphabet PQ({"p", "q"});

FiniteWord random_word(std::mt19937_64& rng, std::size_t len, std::size_t letters) {
    FiniteWord w(len);
    for (auto& l : w) l = static_cast<Letter>(rng() % letters);
    return w;
}

PayloadRef base(const char* tag) {
    auto p = std::make_shared<Payload>();
    p->tag = tag;
    return p;
}

}  // namespace

TEST_CASE("atomic machine") {
    auto lam = R("2/3");
    auto m = rm_atomic("p", P, lam);
    CHECK(m.num_states() == 3);
    CHECK(rm_eval_finite(m, W(P, R"([["p"],["p"]])")) == R("5/9"));
    CHECK(rm_eval_lasso(m, L(P, R"({"prefix":[["p"]],"cycle":[[]]})")) == R("1"));
    CHECK(rm_eval_lasso(m, L(P, R"({"prefix":[[]],"cycle":[["p"]]})")) == R("0"));
    CHECK(rm_eval_finite(m, {}) == R("0"));
    CHECK(rm_eval_bounds(rm_atomic("p", P, R("1/2")), W(P, R"([["p"]])")) == Interval{R("1/2"), R("1")});
    CHECK(rm_eval_bounds(m, {}) == Interval{R("0"), R("1")});
}

TEST_CASE("negation") {
    auto lam = R("2/3");
    auto m = rm_atomic("p", PQ, lam);
    auto n = rm_negation(m);
    auto nn = rm_negation(n);
    for (StateId q = 0; q < m.num_states(); ++q)
        for (Letter l = 0; l < m.num_letters(); ++l) CHECK(nn.reward(q, l) == m.reward(q, l));
    CHECK(rm_eval_lasso(n, L(PQ, R"({"prefix":[["p"]],"cycle":[[]]})")) == R("0"));

    std::mt19937_64 rng(3);
    auto c = compile(parse("p U[2/3] X[2/3] q"), PQ);
    auto nc = rm_negation(c);
    for (int t = 0; t < 50; ++t) {
        auto w = random_word(rng, rng() % 9, 4);
        CHECK(rm_eval_finite(nc, w) == (1 - pow(lam, static_cast<unsigned>(w.size()))) - rm_eval_finite(c, w));
    }
}

TEST_CASE("next") {
    auto lam = R("2/3");
    auto a = rm_atomic("q", PQ, lam);
    auto x = rm_next(a);
    CHECK(x.num_states() == a.num_states() + 1);
    for (Letter l = 0; l < x.num_letters(); ++l) CHECK(x.reward(x.initial(), l) == R("0"));
    CHECK(rm_eval_lasso(x, L(PQ, R"({"prefix":[[],["q"]],"cycle":[[]]})")) == lam);
}

TEST_CASE("disjunction takes the max on every prefix") {
    auto lam = R("2/3");
    auto r1 = rm_atomic("p", PQ, lam);
    auto r2 = rm_next(rm_atomic("q", PQ, lam));
    auto d = rm_disjunction(r1, r2);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto w = random_word(rng, 10, 4);
        CHECK(rm_eval_finite(d, w) == max(rm_eval_finite(r1, w), rm_eval_finite(r2, w)));
    }
    auto px = compile(parse("p | X[2/3] q"), PQ);
    CHECK(rm_eval_finite(px, W(PQ, R"([[],["q"]])")) == R("2/9"));
    CHECK(rm_eval_lasso(px, L(PQ, R"({"prefix":[[],["q"]],"cycle":[[]]})")) == R("2/3"));
    CHECK_THROWS(rm_disjunction(r1, rm_atomic("q", PQ, R("1/2"))));
}

TEST_CASE("eventually") {
    auto lam = R("2/3");
    auto f = compile(parse("F[2/3] p"), P);
    CHECK(f.num_states() == 6);
    for (unsigned n = 0; n < 6; ++n) {
        LassoWord w;
        w.prefix.assign(n, 0);
        w.cycle = {1};
        CHECK(rm_eval_lasso(f, w) == pow(lam, n));
    }
    auto scc = scc_decompose(f);
    StateId last = f.run(W(P, R"([["p"],["p"],["p"],["p"]])"));
    auto comp = scc.component_of[last];
    REQUIRE(scc.has_internal[comp]);
    CHECK(scc.type[comp] == R("1/3"));
}

TEST_CASE("until agrees with eventually and the semantics") {
    auto lam = R("1/2");
    auto u = rm_until(rm_constant(true, P, lam), rm_atomic("p", P, lam));
    auto e = rm_eventually(rm_atomic("p", P, lam));
    for (std::size_t len = 0; len <= 8; ++len)
        for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
            FiniteWord w(len);
            for (std::size_t i = 0; i < len; ++i) w[i] = (bits >> i) & 1;
            CHECK(rm_eval_finite(u, w) == rm_eval_finite(e, w));
        }

    auto pq = compile(parse("p U[1/2] q"), PQ);
    CHECK(rm_eval_finite(pq, W(PQ, R"([["p"],["q"]])")) == R("1/4"));
    CHECK(rm_eval_lasso(pq, L(PQ, R"({"prefix":[["p"],["q"]],"cycle":[[]]})")) == R("1/2"));
    CHECK(eval_finite(parse("p U[1/2] q"), PQ, W(PQ, R"([["p"],["q"]])")) == R("1/2"));
    CHECK(rm_eval_lasso(pq, L(PQ, R"({"prefix":[["q"]],"cycle":[[]]})")) == R("1"));
}

TEST_CASE("compiled machines match the semantics on random words") {
    std::mt19937_64 rng(17);
    for (const char* s : {"G[1/2] p", "p U[2/3] q", "G[2/3] (p | F[2/3] q)", "X[1/2] p & F[1/2] !q"}) {
        auto f = parse(s);
        auto m = compile(f, PQ);
        for (int t = 0; t < 60; ++t) {
            auto w = random_word(rng, rng() % 8, 4);
            CHECK(rm_eval_lasso(m, LassoWord{w, {0}}) == eval_finite(f, PQ, w));
            CHECK(rm_eval_bounds(m, w).intersects(eval_interval(f, PQ, w)));
        }
    }
}

TEST_CASE("globally on lassos") {
    auto lam = R("2/3");
    auto g = compile(parse("G[2/3] p"), P);
    for (unsigned n = 0; n < 6; ++n) {
        LassoWord w;
        w.prefix.assign(n, 1);
        w.cycle = {0};
        CHECK(rm_eval_lasso(g, w) == 1 - pow(lam, n));
    }
}

TEST_CASE("reduced eventually keeps infinite-word values") {
    BuildOptions opt;
    opt.reduce = true;
    auto f = parse("G[2/3] p & F[2/3] !p");
    auto full = compile(f, P);
    auto small = compile(f, P, opt);
    CHECK(small.num_states() <= full.num_states());
    for (unsigned k = 0; k < 12; ++k) {
        LassoWord w;
        w.prefix.assign(k, 1);
        w.cycle = {0};
        CHECK(rm_eval_lasso(small, w) == rm_eval_lasso(full, w));
    }
}

TEST_CASE("scc decomposition") {
    auto lam = R("1/2");
    auto a = rm_atomic("p", P, lam);
    auto scc = scc_decompose(a);
    CHECK(scc.components.size() == 3);
    std::vector<Rational> types;
    for (std::size_t c = 0; c < scc.components.size(); ++c)
        if (scc.has_internal[c]) types.push_back(scc.type[c]);
    std::sort(types.begin(), types.end());
    CHECK(types == std::vector<Rational>{R("0"), R("1/2")});

    RewardMachine bad(P, lam);
    bad.add_state(base("x"));
    bad.set_edge(0, 0, 0, R("0"));
    bad.set_edge(0, 1, 0, R("1/2"));
    CHECK_THROWS_AS(scc_decompose(bad), InvariantI2Violation);
    CHECK_NOTHROW(scc_partition(bad));
}

TEST_CASE("invariant checker") {
    auto g = compile(parse("G[1/2] p"), P);
    CHECK(check_invariants(g, parse("G[1/2] p"), 200, 8, 1).ok());

    auto u = parse("p U[2/3] q");
    CHECK(check_invariants(compile(u, PQ), u, 500, 10, 2).ok());

    auto a = rm_atomic("p", P, R("1/2"));
    a.set_reward(a.initial(), 1, R("1"));
    auto rep = check_invariants(a, atom("p"), 10, 4, 3);
    CHECK_FALSE(rep.i3);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("dot and json") {
    auto m = rm_atomic("p", P, R("2/3"));
    auto dot = to_dot(m);
    CHECK(dot.find("p, 1/3") != std::string::npos);
    CHECK(dot == to_dot(rm_atomic("p", P, R("2/3"))));

    auto c = compile(parse("p U[1/2] X[1/2] q"), PQ);
    auto back = machine_from_json(machine_to_json(c));
    REQUIRE(back.num_states() == c.num_states());
    CHECK(back.initial() == c.initial());
    CHECK(back.lambda() == c.lambda());
    for (StateId q = 0; q < c.num_states(); ++q) {
        CHECK(payload_equal(back.payload(q), c.payload(q)));
        for (Letter l = 0; l < c.num_letters(); ++l) {
            CHECK(back.next(q, l) == c.next(q, l));
            CHECK(back.reward(q, l) == c.reward(q, l));
        }
    }
    CHECK(machine_to_json(back) == machine_to_json(c));
}
