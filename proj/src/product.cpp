#include "dltl/errors.hpp"
#include "dltl/mdp.hpp"

#include <deque>

namespace dltl {

std::int64_t ProductMdp::find(std::uint32_t s, std::uint32_t q) const {
    return index[static_cast<std::size_t>(s) * machine_states + q];
}

ProductMdp product(const LabeledMdp& m, const RewardMachine& r) {
    for (const auto& p : m.alphabet.props())
        if (!r.alphabet().contains(p))
            throw ValidationError("MDP label proposition '" + p + "' outside the machine alphabet");
    std::vector<Letter> letter(m.num_states());
    for (std::uint32_t s = 0; s < m.num_states(); ++s) letter[s] = r.alphabet().translate(m.labels[s], m.alphabet);

    ProductMdp p;
    p.lambda = r.lambda();
    p.lam = r.lambda().to_double();
    p.machine_states = r.num_states();
    p.index.assign(m.num_states() * r.num_states(), -1);

    std::deque<std::uint32_t> queue;
    auto intern = [&](std::uint32_t s, std::uint32_t q) {
        auto& slot = p.index[static_cast<std::size_t>(s) * r.num_states() + q];
        if (slot < 0) {
            slot = static_cast<std::int64_t>(p.mdp_state.size());
            p.mdp_state.push_back(s);
            p.rm_state.push_back(q);
            queue.push_back(static_cast<std::uint32_t>(slot));
        }
        return static_cast<std::uint32_t>(slot);
    };
    p.initial = intern(m.initial, r.initial());

    // successor lists are filled per discovered state, then reordered into CSR by id
    std::vector<std::vector<std::pair<std::uint32_t, std::vector<std::pair<std::uint32_t, double>>>>> rows;
    while (!queue.empty()) {
        std::uint32_t i = queue.front();
        queue.pop_front();
        std::uint32_t s = p.mdp_state[i], q = p.rm_state[i];
        Letter l = letter[s];
        StateId q2 = r.next(q, l);
        if (rows.size() <= i) rows.resize(i + 1);
        for (std::uint32_t a = 0; a < m.num_actions(); ++a) {
            if (!m.enabled[s][a]) continue;
            std::vector<std::pair<std::uint32_t, double>> out;
            for (const auto& t : m.trans[s][a]) out.emplace_back(intern(t.to, q2), t.p);
            rows[i].emplace_back(a, std::move(out));
        }
    }
    const std::size_t n = p.mdp_state.size();
    rows.resize(n);
    p.step_reward.resize(n);
    p.step_reward_exact.resize(n);
    p.choice_begin.push_back(0);
    for (std::uint32_t i = 0; i < n; ++i) {
        p.step_reward_exact[i] = r.reward(p.rm_state[i], letter[p.mdp_state[i]]);
        p.step_reward[i] = p.step_reward_exact[i].to_double();
        for (auto& [a, out] : rows[i]) {
            p.choice_action.push_back(a);
            p.succ_begin.push_back(static_cast<std::uint32_t>(p.succ.size()));
            for (auto& [t, pr] : out) {
                p.succ.push_back(t);
                p.prob.push_back(pr);
            }
        }
        p.choice_begin.push_back(static_cast<std::uint32_t>(p.choice_action.size()));
    }
    p.succ_begin.push_back(static_cast<std::uint32_t>(p.succ.size()));
    return p;
}

}  // namespace dltl
