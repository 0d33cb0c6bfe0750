#include "dltl/errors.hpp"
#include "dltl/mdp.hpp"

#include <algorithm>
#include <cmath>

namespace dltl {

using nlohmann::json;

FinitePolicy policy_from_choices(const LabeledMdp& m, const RewardMachine& r, const ProductMdp& p,
                                 const std::vector<std::uint32_t>& action_of_state) {
    FinitePolicy pi;
    pi.machine = r;
    pi.state_names = m.state_names;
    pi.action_names = m.action_names;
    const std::size_t ns = m.num_states();
    pi.act.resize(r.num_states() * ns);
    for (std::uint32_t q = 0; q < r.num_states(); ++q)
        for (std::uint32_t s = 0; s < ns; ++s) pi.act[q * ns + s] = m.enabled_actions(s).front();
    for (std::uint32_t i = 0; i < p.num_states(); ++i) pi.act[p.rm_state[i] * ns + p.mdp_state[i]] = action_of_state[i];
    return pi;
}

FinitePolicy extract_policy(const LabeledMdp& m, const RewardMachine& r, const ProductMdp& p, const ValueFunction& v) {
    std::vector<std::uint32_t> choice(p.num_states());
    for (std::uint32_t i = 0; i < p.num_states(); ++i) {
        double best = -1;
        for (std::uint32_t c = p.choice_begin[i]; c < p.choice_begin[i + 1]; ++c) {
            double acc = 0;
            for (std::uint32_t k = p.succ_begin[c]; k < p.succ_begin[c + 1]; ++k) acc += p.prob[k] * v.v[p.succ[k]];
            if (acc > best) {
                best = acc;
                choice[i] = p.choice_action[c];
            }
        }
    }
    return policy_from_choices(m, r, p, choice);
}

double policy_value(const LabeledMdp& m, const RewardMachine& r, const FinitePolicy& pi, double tol) {
    if (pi.machine.num_states() != r.num_states() || pi.state_names.size() != m.num_states())
        throw ValidationError("policy memory or state space does not match");
    ProductMdp p = product(m, r);
    const std::size_t n = p.num_states();
    std::vector<std::uint32_t> chosen(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t a = pi.action(p.rm_state[i], p.mdp_state[i]);
        bool found = false;
        for (std::uint32_t c = p.choice_begin[i]; c < p.choice_begin[i + 1]; ++c)
            if (p.choice_action[c] == a) {
                chosen[i] = c;
                found = true;
            }
        if (!found) throw ValidationError("policy picks a disabled action in state " + m.state_names[p.mdp_state[i]]);
    }
    std::vector<double> v(n, 0.0), nv(n, 0.0);
    const double stop = p.lam > 0 ? tol * (1 - p.lam) / (2 * p.lam) : 0.0;
    for (std::size_t it = 0; it < 100000000; ++it) {
        double diff = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint32_t c = chosen[i];
            double acc = 0;
            for (std::uint32_t k = p.succ_begin[c]; k < p.succ_begin[c + 1]; ++k) acc += p.prob[k] * v[p.succ[k]];
            nv[i] = p.step_reward[i] + p.lam * acc;
            diff = std::max(diff, std::fabs(nv[i] - v[i]));
        }
        v.swap(nv);
        if (diff <= stop) break;
    }
    return v[p.initial];
}

json policy_to_json(const FinitePolicy& pi) {
    json table = json::array();
    const std::size_t ns = pi.state_names.size();
    for (std::uint32_t q = 0; q < pi.machine.num_states(); ++q)
        for (std::uint32_t s = 0; s < ns; ++s) table.push_back({q, pi.state_names[s], pi.action_names[pi.act[q * ns + s]]});
    return {{"machine", machine_to_json(pi.machine)},
            {"states", pi.state_names},
            {"actions", pi.action_names},
            {"table", table}};
}

FinitePolicy policy_from_json(const json& j) {
    try {
        FinitePolicy pi;
        pi.machine = machine_from_json(j.at("machine"));
        pi.state_names = j.at("states").get<std::vector<std::string>>();
        pi.action_names = j.at("actions").get<std::vector<std::string>>();
        const std::size_t ns = pi.state_names.size();
        pi.act.assign(pi.machine.num_states() * ns, 0);
        std::vector<bool> seen(pi.act.size(), false);
        auto find = [](const std::vector<std::string>& v, const std::string& x) {
            auto it = std::find(v.begin(), v.end(), x);
            if (it == v.end()) throw ValidationError("unknown name '" + x + "' in policy");
            return static_cast<std::uint32_t>(it - v.begin());
        };
        for (const auto& row : j.at("table")) {
            auto q = row.at(0).get<std::uint32_t>();
            auto s = find(pi.state_names, row.at(1).get<std::string>());
            if (q >= pi.machine.num_states()) throw ValidationError("policy memory state out of range");
            pi.act[q * ns + s] = find(pi.action_names, row.at(2).get<std::string>());
            seen[q * ns + s] = true;
        }
        for (bool b : seen)
            if (!b) throw ValidationError("policy table must be total");
        return pi;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed policy JSON: ") + e.what());
    }
}

Run simulate(const LabeledMdp& m, const FinitePolicy& pi, std::size_t steps, std::uint64_t seed) {
    if (pi.state_names != m.state_names || pi.action_names != m.action_names)
        throw ValidationError("policy was built for a different MDP");
    std::mt19937_64 rng(seed);
    Run run;
    std::uint32_t s = m.initial;
    StateId q = pi.machine.initial();
    for (std::size_t t = 0; t < steps; ++t) {
        std::uint32_t a = pi.action(q, s);
        Letter l = pi.machine.alphabet().translate(m.labels[s], m.alphabet);
        run.states.push_back(s);
        run.actions.push_back(a);
        run.word.push_back(l);
        q = pi.machine.next(q, l);
        s = sample_next(m, s, a, rng);
    }
    return run;
}

std::size_t switch_time(const Alphabet& a, const FiniteWord& w, const std::string& p) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!a.holds(w[i], p)) return i;
    return w.size();
}

}  // namespace dltl
