#include "dltl/errors.hpp"
#include "dltl/reward_machine.hpp"

#include <random>

namespace dltl {

using nlohmann::json;

SccReport scc_partition(const RewardMachine& r) {
    const std::size_t n = r.num_states(), k = r.num_letters();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<StateId> stack;
    SccReport rep;
    rep.component_of.assign(n, 0);
    std::size_t counter = 0;

    struct Frame { StateId q; Letter next_letter; };
    for (StateId root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& fr = call.back();
            if (fr.next_letter < k) {
                StateId t = r.next(fr.q, fr.next_letter++);
                if (index[t] == unvisited) {
                    index[t] = low[t] = counter++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    call.push_back({t, 0});
                } else if (on_stack[t]) {
                    low[fr.q] = std::min(low[fr.q], index[t]);
                }
                continue;
            }
            StateId q = fr.q;
            call.pop_back();
            if (!call.empty()) low[call.back().q] = std::min(low[call.back().q], low[q]);
            if (low[q] == index[q]) {
                std::vector<StateId> comp;
                StateId t;
                do {
                    t = stack.back();
                    stack.pop_back();
                    on_stack[t] = false;
                    rep.component_of[t] = static_cast<StateId>(rep.components.size());
                    comp.push_back(t);
                } while (t != q);
                std::sort(comp.begin(), comp.end());
                rep.components.push_back(std::move(comp));
            }
        }
    }
    rep.has_internal.assign(rep.components.size(), false);
    rep.type.assign(rep.components.size(), Rational(0));
    return rep;
}

SccReport scc_decompose(const RewardMachine& r) {
    SccReport rep = scc_partition(r);
    std::vector<Edge> witness(rep.components.size());
    const Rational hi = 1 - r.lambda();
    for (StateId q = 0; q < r.num_states(); ++q) {
        for (Letter l = 0; l < r.num_letters(); ++l) {
            StateId t = r.next(q, l);
            auto c = rep.component_of[q];
            if (rep.component_of[t] != c) continue;
            Edge e{q, l, t, r.reward(q, l)};
            if (!rep.has_internal[c]) {
                if (e.reward != 0 && e.reward != hi)
                    throw InvariantI2Violation("internal reward " + e.reward.to_string() + " in component " +
                                                   std::to_string(c) + " is neither 0 nor 1-lambda",
                                               e, e);
                rep.has_internal[c] = true;
                rep.type[c] = e.reward;
                witness[c] = e;
            } else if (rep.type[c] != e.reward) {
                throw InvariantI2Violation("component " + std::to_string(c) + " mixes internal rewards " +
                                               rep.type[c].to_string() + " and " + e.reward.to_string(),
                                           witness[c], e);
            }
        }
    }
    return rep;
}

json InvariantReport::to_json() const {
    json v = json::array();
    for (const auto& x : violations) v.push_back({{"invariant", x.invariant}, {"detail", x.detail}});
    return {{"ok", ok()}, {"I1", i1}, {"I2", i2}, {"I3", i3}, {"trials", trials}, {"violations", v}};
}

InvariantReport check_invariants(const RewardMachine& r, const Formula& f, std::size_t trials,
                                 std::size_t max_len, std::uint64_t seed) {
    InvariantReport rep;
    const Rational hi = r.zero_discount ? Rational(1) : 1 - r.lambda();
    for (StateId q = 0; q < r.num_states(); ++q)
        for (Letter l = 0; l < r.num_letters(); ++l) {
            const Rational& c = r.reward(q, l);
            if (c < 0 || c > hi) {
                rep.i3 = false;
                rep.violations.push_back({"I3", "reward " + c.to_string() + " on state " + std::to_string(q) +
                                                    " letter " + std::to_string(l)});
            }
        }
    try {
        scc_decompose(r);
    } catch (const InvariantI2Violation& e) {
        rep.i2 = false;
        rep.violations.push_back({"I2", e.what()});
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(r.num_letters() - 1));
    const Rational lmax = has_temporal(f) ? max_discount(f) : Rational(0);
    for (std::size_t t = 0; t < trials; ++t) {
        FiniteWord w(len(rng));
        for (auto& l : w) l = letter(rng);
        Interval machine = rm_eval_bounds(r, w);
        Interval oracle = eval_interval(f, r.alphabet(), w);
        Rational value = rm_eval_finite(r, w);
        const auto n = static_cast<unsigned>(w.size());
        Rational slack = 2 * pow(r.lambda(), n);
        bool ok = machine.intersects(oracle) && abs(value - oracle.mid()) <= slack;
        if (has_temporal(f) && oracle.width() > pow(lmax, n)) ok = false;
        if (!ok) {
            rep.i1 = false;
            rep.violations.push_back({"I1", "word " + word_to_json(r.alphabet(), w).dump() + ": machine [" +
                                                machine.lo.to_string() + ", " + machine.hi.to_string() +
                                                "] oracle [" + oracle.lo.to_string() + ", " +
                                                oracle.hi.to_string() + "]"});
        }
    }
    rep.trials = trials;
    return rep;
}

std::vector<Interval> future_bounds(const RewardMachine& r) {
    const std::size_t n = r.num_states(), k = r.num_letters();
    std::vector<Interval> out(n, Interval{Rational(0), Rational(1)});
    auto closed_with = [&](const Rational& c) {
        std::vector<char> in(n, 1);
        for (bool changed = true; changed;) {
            changed = false;
            for (StateId q = 0; q < n; ++q) {
                if (!in[q]) continue;
                for (Letter l = 0; l < k; ++l)
                    if (r.reward(q, l) != c || !in[r.next(q, l)]) {
                        in[q] = 0;
                        changed = true;
                        break;
                    }
            }
        }
        return in;
    };
    auto zero = closed_with(Rational(0)), full = closed_with(1 - r.lambda());
    for (StateId q = 0; q < n; ++q) {
        if (zero[q]) out[q] = {Rational(0), Rational(0)};
        if (full[q]) out[q] = {Rational(1), Rational(1)};
    }
    return out;
}

}  // namespace dltl
