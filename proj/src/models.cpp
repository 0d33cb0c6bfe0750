#include "dltl/errors.hpp"
#include "dltl/mdp.hpp"

namespace dltl {

namespace {

void add(LabeledMdp& m, std::uint32_t s, std::uint32_t a, std::uint32_t to, const Rational& p) {
    if (p.is_zero()) return;
    m.trans[s][a].push_back({to, p, p.to_double()});
}

LabeledMdp skeleton(std::vector<std::string> states, std::vector<std::string> actions, std::vector<std::string> props) {
    LabeledMdp m;
    m.state_names = std::move(states);
    m.action_names = std::move(actions);
    m.alphabet = Alphabet(std::move(props));
    m.labels.assign(m.num_states(), 0);
    m.enabled.assign(m.num_states(), std::vector<bool>(m.num_actions(), true));
    m.trans.assign(m.num_states(), std::vector<std::vector<Transition>>(m.num_actions()));
    return m;
}

}  // namespace

// s0 is safe; a_i falls into sink s_i with probability p_i.
LabeledMdp two_hazard_mdp(const Rational& p1, const Rational& p2) {
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1) throw ValidationError("hazard probabilities must lie in [0,1]");
    LabeledMdp m = skeleton({"s0", "s1", "s2"}, {"a1", "a2"}, {"safe"});
    m.labels[0] = m.alphabet.letter({"safe"});
    add(m, 0, 0, 1, p1);
    add(m, 0, 0, 0, 1 - p1);
    add(m, 0, 1, 2, p2);
    add(m, 0, 1, 0, 1 - p2);
    for (std::uint32_t s : {1u, 2u})
        for (std::uint32_t a : {0u, 1u}) add(m, s, a, s, 1);
    m.validate();
    return m;
}

// p holds in s0; a1 stays, a2 leaves to the absorbing s1.
LabeledMdp stay_or_leave_mdp() {
    LabeledMdp m = skeleton({"s0", "s1"}, {"a1", "a2"}, {"p"});
    m.labels[0] = m.alphabet.letter({"p"});
    add(m, 0, 0, 0, 1);
    add(m, 0, 1, 1, 1);
    add(m, 1, 0, 1, 1);
    add(m, 1, 1, 1, 1);
    m.validate();
    return m;
}

}  // namespace dltl
