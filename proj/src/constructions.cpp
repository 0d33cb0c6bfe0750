#include "dltl/errors.hpp"
#include "dltl/reward_machine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace dltl {

namespace {

PayloadRef base(std::string tag) {
    auto p = std::make_shared<Payload>();
    p->tag = std::move(tag);
    return p;
}

PayloadRef wrap(PayloadKind kind, PayloadRef inner) {
    auto p = std::make_shared<Payload>();
    p->kind = kind;
    p->a = std::move(inner);
    return p;
}

// Reachable-set exploration over hashable-by-order keys.
template <class Key, class Step, class Describe>
RewardMachine explore(const Alphabet& a, const Rational& lambda, Key init, Step step, Describe to_payload,
                      std::size_t budget) {
    std::map<Key, StateId> ids;
    std::vector<const Key*> keys;
    std::deque<StateId> queue;
    struct Out { StateId to; Rational r; };
    std::vector<std::vector<Out>> edges;

    auto intern = [&](Key k) {
        auto [it, fresh] = ids.emplace(std::move(k), static_cast<StateId>(keys.size()));
        if (fresh) {
            if (keys.size() >= budget)
                throw BudgetExceeded("construction exceeded state budget of " + std::to_string(budget));
            keys.push_back(&it->first);
            edges.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(std::move(init));
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        std::vector<Out> out;
        out.reserve(a.size());
        for (Letter l = 0; l < a.size(); ++l) {
            auto [k, r] = step(*keys[s], l);
            StateId t = intern(std::move(k));
            out.push_back({t, std::move(r)});
        }
        edges[s] = std::move(out);
    }

    RewardMachine m(a, lambda);
    for (const Key* k : keys) m.add_state(to_payload(*k));
    for (StateId s = 0; s < keys.size(); ++s)
        for (Letter l = 0; l < a.size(); ++l) m.set_edge(s, l, edges[s][l].to, edges[s][l].r);
    m.set_initial(0);
    return m;
}

void require_same(const RewardMachine& r1, const RewardMachine& r2) {
    if (r1.lambda() != r2.lambda()) throw ValidationError("operand machines use different discount factors");
    if (!(r1.alphabet() == r2.alphabet())) throw ValidationError("operand machines use different alphabets");
}

void require_discount(const Rational& lambda) {
    if (lambda <= 0 || lambda >= 1) throw ValidationError("machine discount must lie in (0,1)");
}

}  // namespace

RewardMachine rm_atomic(const std::string& p, const Alphabet& a, const Rational& lambda) {
    require_discount(lambda);
    int bit = a.index_of(p);
    if (bit < 0) throw ValidationError("proposition '" + p + "' not in alphabet");
    RewardMachine m(a, lambda);
    StateId q0 = m.add_state(base("q0")), q1 = m.add_state(base("q1")), q2 = m.add_state(base("q2"));
    Rational hi = 1 - lambda;
    for (Letter l = 0; l < a.size(); ++l) {
        if (l >> bit & 1)
            m.set_edge(q0, l, q1, hi);
        else
            m.set_edge(q0, l, q2, 0);
        m.set_edge(q1, l, q1, hi);
        m.set_edge(q2, l, q2, 0);
    }
    m.set_initial(q0);
    return m;
}

RewardMachine rm_constant(bool value, const Alphabet& a, const Rational& lambda) {
    require_discount(lambda);
    RewardMachine m(a, lambda);
    StateId q = m.add_state(base(value ? "top" : "bot"));
    for (Letter l = 0; l < a.size(); ++l) m.set_edge(q, l, q, value ? 1 - lambda : Rational(0));
    return m;
}

RewardMachine rm_negation(const RewardMachine& r) {
    RewardMachine m(r.alphabet(), r.lambda());
    Rational hi = 1 - r.lambda();
    for (StateId q = 0; q < r.num_states(); ++q) m.add_state(r.payload_ref(q));
    for (StateId q = 0; q < r.num_states(); ++q)
        for (Letter l = 0; l < r.num_letters(); ++l) m.set_edge(q, l, r.next(q, l), hi - r.reward(q, l));
    m.set_initial(r.initial());
    return m;
}

RewardMachine rm_next(const RewardMachine& r) {
    RewardMachine m(r.alphabet(), r.lambda());
    StateId init = m.add_state(base("init"));
    for (StateId q = 0; q < r.num_states(); ++q) m.add_state(wrap(PayloadKind::Wrapped, r.payload_ref(q)));
    for (Letter l = 0; l < r.num_letters(); ++l) m.set_edge(init, l, r.initial() + 1, 0);
    for (StateId q = 0; q < r.num_states(); ++q)
        for (Letter l = 0; l < r.num_letters(); ++l) m.set_edge(q + 1, l, r.next(q, l) + 1, r.reward(q, l));
    m.set_initial(init);
    return m;
}

// ---- disjunction

namespace {

struct OrKey {
    int mode;  // 0 pair, 1 left copy, 2 right copy
    StateId q1, q2;
    Rational zeta;
    auto operator<=>(const OrKey&) const = default;
};

}  // namespace

RewardMachine rm_disjunction(const RewardMachine& r1, const RewardMachine& r2, const BuildOptions& opt) {
    require_same(r1, r2);
    const Rational lam = r1.lambda();
    require_discount(lam);
    auto step = [&](const OrKey& k, Letter l) -> std::pair<OrKey, Rational> {
        if (k.mode == 1) return {{1, r1.next(k.q1, l), 0, 0}, r1.reward(k.q1, l)};
        if (k.mode == 2) return {{2, 0, r2.next(k.q2, l), 0}, r2.reward(k.q2, l)};
        const Rational& a = r1.reward(k.q1, l);
        const Rational& b = r2.reward(k.q2, l);
        Rational f = a - b + k.zeta;
        Rational reward = f.sign() >= 0 ? a + min(Rational(0), k.zeta) : b - max(Rational(0), k.zeta);
        if (k.zeta >= 1) return {{1, r1.next(k.q1, l), 0, 0}, reward};
        if (k.zeta <= -1) return {{2, 0, r2.next(k.q2, l), 0}, reward};
        return {{0, r1.next(k.q1, l), r2.next(k.q2, l), f / lam}, reward};
    };
    auto describe_key = [&](const OrKey& k) -> PayloadRef {
        if (k.mode == 1) return wrap(PayloadKind::Left, r1.payload_ref(k.q1));
        if (k.mode == 2) return wrap(PayloadKind::Right, r2.payload_ref(k.q2));
        auto p = std::make_shared<Payload>();
        p->kind = PayloadKind::Pair;
        p->a = r1.payload_ref(k.q1);
        p->b = r2.payload_ref(k.q2);
        p->value = k.zeta;
        return p;
    };
    return explore(r1.alphabet(), lam, OrKey{0, r1.initial(), r2.initial(), 0}, step, describe_key,
                   opt.state_budget);
}

// ---- eventually

namespace {

struct EvKey {
    Rational v;
    std::vector<std::pair<StateId, Rational>> s;  // sorted, unique
    auto operator<=>(const EvKey&) const = default;
};

// Keep the element with the best guaranteed total; drop every other element that cannot beat it.
void prune_dominated(std::vector<std::pair<StateId, Rational>>& s, const std::vector<Interval>& fb) {
    if (s.size() < 2) return;
    std::size_t best = 0;
    Rational best_lo = s[0].second + fb[s[0].first].lo;
    for (std::size_t i = 1; i < s.size(); ++i) {
        Rational lo = s[i].second + fb[s[i].first].lo;
        if (lo > best_lo) {
            best = i;
            best_lo = std::move(lo);
        }
    }
    std::vector<std::pair<StateId, Rational>> kept;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (i == best || s[i].second + fb[s[i].first].hi > best_lo) kept.push_back(std::move(s[i]));
    s = std::move(kept);
}

}  // namespace

RewardMachine rm_eventually(const RewardMachine& r1, const BuildOptions& opt) {
    const Rational lam = r1.lambda();
    require_discount(lam);
    const Rational minus_one = -1;
    std::vector<Interval> fb;
    if (opt.reduce) fb = future_bounds(r1);
    auto step = [&](const EvKey& k, Letter l) -> std::pair<EvKey, Rational> {
        std::vector<Rational> f;
        f.reserve(k.s.size());
        for (const auto& [q, z] : k.s) f.push_back(r1.reward(q, l) + z);
        if (f.empty()) throw InvariantViolation("eventually state with empty set");
        // Without pruning some element has zero deficit, so the floor at 0 only matters after a drop.
        Rational m = max(Rational(0), *std::max_element(f.begin(), f.end()));
        EvKey out;
        for (std::size_t i = 0; i < k.s.size(); ++i) {
            Rational z = (f[i] - m) / lam;
            if (z > minus_one) out.s.emplace_back(r1.next(k.s[i].first, l), std::move(z));
        }
        Rational v = (k.v - m) / lam;
        if (v > minus_one) {
            out.s.emplace_back(r1.initial(), v);
            out.v = std::move(v);
        } else {
            out.v = minus_one;
        }
        std::sort(out.s.begin(), out.s.end());
        out.s.erase(std::unique(out.s.begin(), out.s.end()), out.s.end());
        if (opt.eventually_dedup) {
            // keep only the largest deficit per operand state
            std::vector<std::pair<StateId, Rational>> kept;
            for (auto& e : out.s) {
                if (!kept.empty() && kept.back().first == e.first)
                    kept.back() = std::move(e);
                else
                    kept.push_back(std::move(e));
            }
            out.s = std::move(kept);
        }
        if (opt.reduce) prune_dominated(out.s, fb);
        return {std::move(out), m};
    };
    auto describe_key = [&](const EvKey& k) -> PayloadRef {
        auto p = std::make_shared<Payload>();
        p->kind = PayloadKind::Ev;
        p->value = k.v;
        for (const auto& [q, z] : k.s) p->set.push_back({1, r1.payload_ref(q), z});
        return p;
    };
    EvKey init{0, {{r1.initial(), Rational(0)}}};
    return explore(r1.alphabet(), lam, std::move(init), step, describe_key, opt.state_budget);
}

// ---- until

namespace {

struct UnElem {
    int side;
    StateId q;
    Rational zeta;
    auto operator<=>(const UnElem&) const = default;
};
using UnSet = std::vector<UnElem>;

struct UnKey {
    Rational v;
    UnSet i;
    std::vector<UnSet> x;
    auto operator<=>(const UnKey&) const = default;
};

void canonical(UnSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

}  // namespace

RewardMachine rm_until(const RewardMachine& r1, const RewardMachine& r2, const BuildOptions& opt) {
    require_same(r1, r2);
    const Rational lam = r1.lambda();
    require_discount(lam);
    const Rational minus_one = -1, one = 1;
    auto f_star = [&](const UnElem& e, Letter l) {
        return (e.side == 1 ? r1.reward(e.q, l) : r2.reward(e.q, l)) + e.zeta;
    };
    auto next_q = [&](const UnElem& e, Letter l) { return e.side == 1 ? r1.next(e.q, l) : r2.next(e.q, l); };
    auto delta = [&](const UnSet& s, Letter l, const Rational& m) {
        UnSet out;
        for (const auto& e : s) {
            Rational z = (f_star(e, l) - m) / lam;
            if (z < one) out.push_back({e.side, next_q(e, l), std::move(z)});
        }
        canonical(out);
        return out;
    };
    auto step = [&](const UnKey& k, Letter l) -> std::pair<UnKey, Rational> {
        if (k.x.empty()) throw InvariantViolation("until state with empty family");
        std::vector<Rational> n;
        n.reserve(k.x.size());
        for (const auto& s : k.x) {
            if (s.empty()) throw InvariantViolation("until state with empty set");
            Rational lo = f_star(s.front(), l);
            for (std::size_t i = 1; i < s.size(); ++i) lo = min(lo, f_star(s[i], l));
            n.push_back(std::move(lo));
        }
        Rational m = *std::max_element(n.begin(), n.end());
        UnKey out;
        for (std::size_t i = 0; i < k.x.size(); ++i)
            if (n[i] > minus_one) out.x.push_back(delta(k.x[i], l, m));
        Rational v = (k.v - m) / lam;
        if (v > minus_one) {
            // the operand-1 copy for the current position reads this letter, so it enters at scale v
            UnSet grown = k.i;
            grown.push_back({1, r1.initial(), k.v});
            canonical(grown);
            out.i = delta(grown, l, m);
            UnSet fresh = out.i;
            fresh.push_back({2, r2.initial(), v});
            canonical(fresh);
            out.x.push_back(std::move(fresh));
            out.v = std::move(v);
        } else {
            out.v = minus_one;
        }
        std::sort(out.x.begin(), out.x.end());
        out.x.erase(std::unique(out.x.begin(), out.x.end()), out.x.end());
        return {std::move(out), m};
    };
    auto elem = [&](const UnElem& e) {
        return Element{e.side, e.side == 1 ? r1.payload_ref(e.q) : r2.payload_ref(e.q), e.zeta};
    };
    auto describe_key = [&](const UnKey& k) -> PayloadRef {
        auto p = std::make_shared<Payload>();
        p->kind = PayloadKind::Un;
        p->value = k.v;
        for (const auto& e : k.i) p->set.push_back(elem(e));
        for (const auto& s : k.x) {
            std::vector<Element> set;
            for (const auto& e : s) set.push_back(elem(e));
            p->sets.push_back(std::move(set));
        }
        return p;
    };
    UnKey init{0, {}, {{UnElem{2, r2.initial(), 0}}}};
    return explore(r1.alphabet(), lam, std::move(init), step, describe_key, opt.state_budget);
}

}  // namespace dltl
