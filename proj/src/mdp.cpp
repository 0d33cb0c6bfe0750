#include "dltl/errors.hpp"
#include "dltl/mdp.hpp"

#include <algorithm>
#include <set>

namespace dltl {

using nlohmann::json;

std::vector<std::uint32_t> LabeledMdp::enabled_actions(std::uint32_t s) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < num_actions(); ++a)
        if (enabled[s][a]) out.push_back(a);
    return out;
}

std::uint32_t LabeledMdp::state_index(const std::string& name) const {
    auto it = std::find(state_names.begin(), state_names.end(), name);
    if (it == state_names.end()) throw ValidationError("unknown state '" + name + "'");
    return static_cast<std::uint32_t>(it - state_names.begin());
}

std::uint32_t LabeledMdp::action_index(const std::string& name) const {
    auto it = std::find(action_names.begin(), action_names.end(), name);
    if (it == action_names.end()) throw ValidationError("unknown action '" + name + "'");
    return static_cast<std::uint32_t>(it - action_names.begin());
}

void LabeledMdp::validate() const {
    if (num_states() == 0) throw ValidationError("MDP has no states");
    if (num_actions() == 0) throw ValidationError("MDP has no actions");
    if (initial >= num_states()) throw ValidationError("initial state out of range");
    for (std::uint32_t s = 0; s < num_states(); ++s) {
        bool any = false;
        for (std::uint32_t a = 0; a < num_actions(); ++a) {
            const auto& d = trans[s][a];
            if (!enabled[s][a]) {
                if (!d.empty())
                    throw ValidationError("transitions given for disabled action " + action_names[a] + " in state " +
                                          state_names[s]);
                continue;
            }
            any = true;
            Rational total = 0;
            for (const auto& t : d) {
                if (t.prob < 0) throw ValidationError("negative probability");
                total += t.prob;
            }
            if (total != 1)
                throw ValidationError("distribution of (" + state_names[s] + ", " + action_names[a] + ") sums to " +
                                      total.to_string());
        }
        if (!any) throw ValidationError("state " + state_names[s] + " has no enabled action");
    }
}

namespace {

Rational prob_of(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number()) return Rational::parse(j.dump());
    throw ValidationError("probability must be a string or number");
}

}  // namespace

LabeledMdp load_mdp(const json& j) {
    LabeledMdp m;
    try {
        for (const auto& a : j.at("actions")) m.action_names.push_back(a.get<std::string>());
        std::set<std::string> uniq(m.action_names.begin(), m.action_names.end());
        if (uniq.size() != m.action_names.size()) throw ValidationError("duplicate action name");

        std::vector<std::string> props;
        if (j.contains("props")) props = j.at("props").get<std::vector<std::string>>();
        std::vector<std::vector<std::string>> label_names;
        for (const auto& s : j.at("states")) {
            m.state_names.push_back(s.at("id").get<std::string>());
            auto lab = s.value("label", std::vector<std::string>{});
            props.insert(props.end(), lab.begin(), lab.end());
            label_names.push_back(std::move(lab));
        }
        std::set<std::string> suniq(m.state_names.begin(), m.state_names.end());
        if (suniq.size() != m.state_names.size()) throw ValidationError("duplicate state id");
        m.alphabet = Alphabet(props);
        const std::size_t ns = m.num_states(), na = m.num_actions();
        m.enabled.assign(ns, std::vector<bool>(na, false));
        m.trans.assign(ns, std::vector<std::vector<Transition>>(na));
        std::size_t i = 0;
        for (const auto& s : j.at("states")) {
            m.labels.push_back(m.alphabet.letter(label_names[i]));
            if (s.contains("enabled")) {
                for (const auto& a : s.at("enabled")) m.enabled[i][m.action_index(a.get<std::string>())] = true;
            } else {
                std::fill(m.enabled[i].begin(), m.enabled[i].end(), true);
            }
            ++i;
        }
        m.initial = m.state_index(j.at("initial").get<std::string>());
        for (const auto& t : j.at("transitions")) {
            auto s = m.state_index(t.at("from").get<std::string>());
            auto a = m.action_index(t.at("action").get<std::string>());
            auto to = m.state_index(t.at("to").get<std::string>());
            Rational p = prob_of(t.at("prob"));
            if (p.is_zero()) continue;
            m.trans[s][a].push_back({to, p, p.to_double()});
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed MDP JSON: ") + e.what());
    }
    m.validate();
    return m;
}

json mdp_to_json(const LabeledMdp& m) {
    json states = json::array(), trans = json::array();
    for (std::uint32_t s = 0; s < m.num_states(); ++s) {
        json en = json::array();
        for (auto a : m.enabled_actions(s)) en.push_back(m.action_names[a]);
        states.push_back({{"id", m.state_names[s]}, {"label", m.alphabet.names(m.labels[s])}, {"enabled", en}});
        for (std::uint32_t a = 0; a < m.num_actions(); ++a)
            for (const auto& t : m.trans[s][a])
                trans.push_back({{"from", m.state_names[s]},
                                 {"action", m.action_names[a]},
                                 {"to", m.state_names[t.to]},
                                 {"prob", t.prob.to_fraction()}});
    }
    return {{"props", m.alphabet.props()},
            {"states", states},
            {"actions", m.action_names},
            {"initial", m.state_names[m.initial]},
            {"transitions", trans}};
}

std::uint32_t sample_next(const LabeledMdp& m, std::uint32_t s, std::uint32_t a, std::mt19937_64& rng) {
    const auto& d = m.trans[s][a];
    if (d.empty()) throw ValidationError("action " + m.action_names[a] + " not enabled in " + m.state_names[s]);
    if (d.size() == 1) return d.front().to;
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0;
    for (const auto& t : d) {
        acc += t.p;
        if (u < acc) return t.to;
    }
    return d.back().to;
}

}  // namespace dltl
