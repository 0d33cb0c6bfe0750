// Serial vs OpenMP value iteration, plus machine evaluation throughput.
#include "dltl/learning.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace dltl;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Random labeled MDP over {p, q}: n states, 4 actions, 3 successors each.
LabeledMdp random_mdp(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LabeledMdp m;
    m.alphabet = Alphabet({"p", "q"});
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<Letter> lab(0, 3);
    for (std::size_t s = 0; s < n; ++s) m.state_names.push_back("s" + std::to_string(s));
    m.action_names = {"a0", "a1", "a2", "a3"};
    m.labels.resize(n);
    m.enabled.assign(n, std::vector<bool>(4, true));
    m.trans.resize(n, std::vector<std::vector<Transition>>(4));
    for (std::size_t s = 0; s < n; ++s) {
        m.labels[s] = lab(rng);
        for (std::size_t a = 0; a < 4; ++a) {
            const Rational w[3] = {Rational::parse("1/2"), Rational::parse("1/3"), Rational::parse("1/6")};
            for (const auto& pr : w) m.trans[s][a].push_back({static_cast<std::uint32_t>(pick(rng)), pr, pr.to_double()});
        }
    }
    m.initial = 0;
    m.validate();
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = argc > 1 ? std::stoul(argv[1]) : 500;
    LabeledMdp m = random_mdp(n, 7);
    Formula f = parse("G[0.9] (!p | F[0.9] q)");
    BuildOptions opt;
    opt.reduce = true;
    RewardMachine r = compile(f, m.alphabet, opt);
    ProductMdp p = product(m, r);
    std::printf("mdp states %zu, machine states %zu, product states %zu\n", n, r.num_states(), p.num_states());

    auto t0 = std::chrono::steady_clock::now();
    ValueFunction vs = value_iteration(p, 1e-9, Exec::Serial);
    double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    ValueFunction vp = value_iteration(p, 1e-9, Exec::Parallel);
    double tp = seconds_since(t0);
    double gap = 0;
    for (std::size_t i = 0; i < vs.v.size(); ++i) gap = std::max(gap, std::abs(vs.v[i] - vp.v[i]));
    std::printf("value iteration serial   %.3fs (%zu sweeps)\n", ts, vs.iterations);
    std::printf("value iteration parallel %.3fs (%zu sweeps), max gap %.3g\n", tp, vp.iterations, gap);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Letter> lab(0, 3);
    std::vector<FiniteWord> words(2000);
    for (auto& w : words) {
        w.resize(40);
        for (auto& l : w) l = lab(rng);
    }
    t0 = std::chrono::steady_clock::now();
    double acc = 0;
    for (const auto& w : words) acc += rm_eval_finite(r, w).to_double();
    std::printf("machine eval %zu words x 40 letters %.3fs (sum %.6f)\n", words.size(), seconds_since(t0), acc);
    return 0;
}
