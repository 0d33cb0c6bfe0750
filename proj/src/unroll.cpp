#include "dltl/errors.hpp"
#include "dltl/learning.hpp"

namespace dltl {

using nlohmann::json;

Observation MdpEnvironment::reset() {
    cur_ = m_.initial;
    return {cur_, m_.labels[cur_]};
}

Observation MdpEnvironment::step(std::uint32_t action) {
    ++steps_;
    cur_ = sample_next(m_, cur_, action, rng_);
    return {cur_, m_.labels[cur_]};
}

std::uint32_t HistoryTrie::child(std::uint32_t h, Letter l) {
    auto [it, fresh] = kids_.emplace(std::make_pair(h, l), static_cast<std::uint32_t>(parent_.size()));
    if (fresh) {
        parent_.push_back(h);
        letter_.push_back(l);
        depth_.push_back(depth_[h] + 1);
    }
    return it->second;
}

std::int64_t HistoryTrie::find_child(std::uint32_t h, Letter l) const {
    auto it = kids_.find({h, l});
    return it == kids_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

FiniteWord HistoryTrie::word(std::uint32_t h) const {
    FiniteWord w(depth_[h]);
    for (std::size_t i = w.size(); i-- > 0;) {
        w[i] = letter_[h];
        h = parent_[h];
    }
    return w;
}

std::uint32_t HistoryPolicy::action(const FiniteWord& history, std::uint32_t state,
                                    const std::vector<std::uint32_t>& enabled) const {
    std::uint32_t h = 0;
    for (Letter l : history) {
        auto c = trie.find_child(h, l);
        if (c < 0) return enabled.front();
        h = static_cast<std::uint32_t>(c);
    }
    auto it = act.find({h, state});
    return it == act.end() ? enabled.front() : it->second;
}

UnrolledMdp unroll(const LabeledMdp& m, const Formula& f, const Rational& eps, std::size_t node_budget) {
    if (eps <= 0 || eps >= 1) throw ValidationError("eps must lie in (0,1)");
    UnrolledMdp u;
    u.horizon = horizon(f, eps);
    u.alphabet = m.alphabet.merged(Alphabet(props(f)));
    std::vector<Letter> letter(m.num_states());
    for (std::uint32_t s = 0; s < m.num_states(); ++s) letter[s] = u.alphabet.translate(m.labels[s], m.alphabet);

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> layer, next_layer;
    auto add = [&](std::uint32_t s, std::uint32_t h, std::size_t depth) {
        if (u.nodes.size() >= node_budget)
            throw BudgetExceeded("unrolled model exceeds " + std::to_string(node_budget) +
                                 " nodes; use a larger eps or fewer propositions");
        u.nodes.push_back({s, h, depth, {}, {}, 0, false});
        return static_cast<std::uint32_t>(u.nodes.size() - 1);
    };
    std::uint32_t root_h = u.trie.child(0, letter[m.initial]);
    layer[{root_h, m.initial}] = add(m.initial, root_h, 0);
    for (std::size_t depth = 0; depth < u.horizon; ++depth) {
        next_layer.clear();
        for (const auto& [key, id] : layer) {
            std::uint32_t s = key.second, h = key.first;
            for (std::uint32_t a : m.enabled_actions(s)) {
                std::vector<std::pair<std::uint32_t, double>> kids;
                for (const auto& t : m.trans[s][a]) {
                    std::uint32_t h2 = u.trie.child(h, letter[t.to]);
                    auto [it, fresh] = next_layer.emplace(std::make_pair(h2, t.to), 0);
                    if (fresh) it->second = add(t.to, h2, depth + 1);
                    kids.emplace_back(it->second, t.p);
                }
                u.nodes[id].actions.push_back(a);
                u.nodes[id].children.push_back(std::move(kids));
            }
        }
        layer.swap(next_layer);
    }
    for (const auto& [key, id] : layer) {
        u.nodes[id].leaf = true;
        u.nodes[id].leaf_reward = eval_finite(f, u.alphabet, u.trie.word(key.first)).to_double();
    }
    return u;
}

FiniteHorizonSolution backward_induction(const UnrolledMdp& u) {
    FiniteHorizonSolution sol;
    sol.value.assign(u.nodes.size(), 0.0);
    sol.best.assign(u.nodes.size(), 0);
    for (std::size_t i = u.nodes.size(); i-- > 0;) {
        const auto& n = u.nodes[i];
        if (n.leaf) {
            sol.value[i] = n.leaf_reward;
            continue;
        }
        double best = -1;
        for (std::size_t k = 0; k < n.actions.size(); ++k) {
            double acc = 0;
            for (const auto& [c, p] : n.children[k]) acc += p * sol.value[c];
            if (acc > best) {
                best = acc;
                sol.best[i] = n.actions[k];
            }
        }
        sol.value[i] = best;
    }
    return sol;
}

HistoryPolicy policy_of(const UnrolledMdp& u, const FiniteHorizonSolution& sol) {
    HistoryPolicy pi;
    pi.trie = u.trie;
    pi.horizon = u.horizon;
    for (std::size_t i = 0; i < u.nodes.size(); ++i)
        if (!u.nodes[i].leaf) pi.act[{u.nodes[i].history, u.nodes[i].state}] = sol.best[i];
    return pi;
}

double evaluate_history_policy(const UnrolledMdp& u, const HistoryPolicy& pi) {
    std::vector<double> reach(u.nodes.size(), 0.0);
    // history ids of u mapped into the policy's trie; -1 once the policy never saw the prefix
    std::vector<std::int64_t> map(u.trie.size(), -1);
    map[0] = 0;
    for (std::uint32_t h = 1; h < u.trie.size(); ++h) {
        std::int64_t p = map[u.trie.parent(h)];
        map[h] = p < 0 ? -1 : pi.trie.find_child(static_cast<std::uint32_t>(p), u.trie.letter(h));
    }
    reach[0] = 1.0;
    double total = 0;
    for (std::size_t i = 0; i < u.nodes.size(); ++i) {
        const auto& n = u.nodes[i];
        if (reach[i] == 0) continue;
        if (n.leaf) {
            total += reach[i] * n.leaf_reward;
            continue;
        }
        std::uint32_t a = n.actions.front();
        if (std::int64_t h = map[n.history]; h >= 0) {
            auto it = pi.act.find({static_cast<std::uint32_t>(h), n.state});
            if (it != pi.act.end()) a = it->second;
        }
        std::size_t k = 0;
        while (k < n.actions.size() && n.actions[k] != a) ++k;
        if (k == n.actions.size()) throw ValidationError("history policy picks a disabled action");
        for (const auto& [c, p] : n.children[k]) reach[c] += reach[i] * p;
    }
    return total;
}

json LearnReport::to_json() const {
    json j{{"mode", mode},           {"seed", seed},       {"episodes", episodes}, {"env_steps", env_steps},
           {"converged", converged}, {"estimate", estimate}, {"trace", trace}};
    if (evaluated >= 0) j["evaluated_value"] = evaluated;
    if (optimum >= 0) {
        j["optimum"] = optimum;
        j["suboptimality"] = optimum - evaluated;
    }
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

}  // namespace dltl
