#include "dltl/errors.hpp"
#include "dltl/learning.hpp"

#include <cmath>
#include <unordered_map>

namespace dltl {

using nlohmann::json;

json RlOptions::to_json() const {
    return {{"episodes", episodes},     {"steps_per_episode", steps_per_episode},
            {"alpha", alpha},           {"alpha_decay", alpha_decay},
            {"alpha_min", alpha_min},   {"epsilon", epsilon},
            {"epsilon_decay", epsilon_decay}, {"epsilon_min", epsilon_min},
            {"q_init", q_init}, {"replay", replay}};
}

RlResult rl_product(Environment& env, const RewardMachine& r, const std::vector<std::string>& state_names,
                    const std::vector<std::string>& action_names, const RlOptions& opt, std::uint64_t seed) {
    for (const auto& p : env.alphabet().props())
        if (!r.alphabet().contains(p)) throw ValidationError("environment proposition '" + p + "' outside the machine alphabet");
    if (state_names.size() != env.num_states() || action_names.size() != env.num_actions())
        throw ValidationError("state/action names do not match the environment");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const double lam = r.lambda().to_double();
    const std::size_t na = env.num_actions(), nq = r.num_states();

    std::vector<double> reward_d(nq * r.num_letters());
    for (StateId q = 0; q < nq; ++q)
        for (Letter l = 0; l < r.num_letters(); ++l) reward_d[q * r.num_letters() + l] = r.reward(q, l).to_double();

    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<std::vector<double>> qtab;
    std::vector<std::vector<std::size_t>> count;
    std::vector<std::vector<std::uint32_t>> acts;
    std::vector<std::pair<std::uint32_t, StateId>> keyof;
    auto get = [&](std::uint32_t s, StateId q) {
        std::uint64_t key = static_cast<std::uint64_t>(s) * nq + q;
        auto [it, fresh] = index.emplace(key, static_cast<std::uint32_t>(qtab.size()));
        if (fresh) {
            qtab.emplace_back(na, opt.q_init);
            count.emplace_back(na, 0);
            acts.push_back(env.enabled(s));
            keyof.emplace_back(s, q);
        }
        return it->second;
    };
    auto greedy = [&](std::uint32_t i) {
        std::uint32_t best = acts[i].front();
        double bv = -1e300;
        for (std::uint32_t a : acts[i])
            if (qtab[i][a] > bv) bv = qtab[i][a], best = a;
        return best;
    };
    auto vmax = [&](std::uint32_t i) {
        double bv = -1e300;
        for (std::uint32_t a : acts[i]) bv = std::max(bv, qtab[i][a]);
        return bv;
    };

    RlResult res;
    res.min_reward = 1e300;
    res.max_reward = -1e300;
    res.min_q = opt.q_init;
    res.max_q = opt.q_init;
    struct Step {
        std::uint32_t from, a, to;
        double rew;
    };
    std::vector<Step> trail;
    auto update = [&](const Step& st, bool fresh) {
        std::size_t n = fresh ? ++count[st.from][st.a] : count[st.from][st.a];
        double alpha = std::max(opt.alpha_min, opt.alpha / (1.0 + opt.alpha_decay * static_cast<double>(n - 1)));
        double& qa = qtab[st.from][st.a];
        qa += alpha * (st.rew + lam * vmax(st.to) - qa);
        res.min_q = std::min(res.min_q, qa);
        res.max_q = std::max(res.max_q, qa);
    };
    double eps = opt.epsilon;
    for (std::size_t ep = 0; ep < opt.episodes; ++ep) {
        trail.clear();
        Observation o = env.reset();
        StateId q = r.initial();
        std::uint32_t cur = get(o.state, q);
        for (std::size_t t = 0; t < opt.steps_per_episode; ++t) {
            std::uint32_t a;
            if (coin(rng) < eps) {
                std::uniform_int_distribution<std::size_t> pick(0, acts[cur].size() - 1);
                a = acts[cur][pick(rng)];
            } else {
                a = greedy(cur);
            }
            Letter l = r.alphabet().translate(o.letter, env.alphabet());
            double rew = reward_d[q * r.num_letters() + l];
            res.min_reward = std::min(res.min_reward, rew);
            res.max_reward = std::max(res.max_reward, rew);
            StateId q2 = r.next(q, l);
            Observation o2 = env.step(a);
            std::uint32_t nxt = get(o2.state, q2);
            Step st{cur, a, nxt, rew};
            update(st, true);
            if (opt.replay) trail.push_back(st);
            o = o2;
            q = q2;
            cur = nxt;
        }
        for (auto it = trail.rbegin(); it != trail.rend(); ++it) update(*it, false);
        eps = std::max(opt.epsilon_min, eps * opt.epsilon_decay);
        if (opt.checkpoint_every && (ep + 1) % opt.checkpoint_every == 0)
            res.report.trace.push_back(vmax(get(env.reset().state, r.initial())));
    }

    FinitePolicy& pi = res.policy;
    pi.machine = r;
    pi.state_names = state_names;
    pi.action_names = action_names;
    const std::size_t ns = state_names.size();
    pi.act.resize(nq * ns);
    for (StateId qq = 0; qq < nq; ++qq)
        for (std::uint32_t s = 0; s < ns; ++s) pi.act[qq * ns + s] = env.enabled(s).front();
    for (std::uint32_t i = 0; i < qtab.size(); ++i) pi.act[keyof[i].second * ns + keyof[i].first] = greedy(i);

    Observation o0 = env.reset();
    res.report.mode = "rl";
    res.report.seed = seed;
    res.report.episodes = opt.episodes;
    res.report.env_steps = env.steps_taken();
    res.report.estimate = vmax(get(o0.state, r.initial()));
    res.report.converged = true;
    res.report.extra = {{"hyper", opt.to_json()},
                        {"product_states_seen", qtab.size()},
                        {"reward_range", {res.min_reward, res.max_reward}},
                        {"q_range", {res.min_q, res.max_q}}};
    return res;
}

}  // namespace dltl
