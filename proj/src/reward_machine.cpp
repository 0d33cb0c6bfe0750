#include "dltl/reward_machine.hpp"

#include "dltl/errors.hpp"

#include <map>

namespace dltl {

using nlohmann::json;

RewardMachine::RewardMachine(Alphabet alphabet, Rational lambda)
    : alphabet_(std::move(alphabet)), lambda_(std::move(lambda)) {}

StateId RewardMachine::add_state(PayloadRef p) {
    payloads_.push_back(std::move(p));
    next_.resize(payloads_.size() * num_letters(), 0);
    rewards_.resize(payloads_.size() * num_letters());
    return static_cast<StateId>(payloads_.size() - 1);
}

void RewardMachine::set_edge(StateId q, Letter l, StateId to, Rational r) {
    next_[q * num_letters() + l] = to;
    rewards_[q * num_letters() + l] = std::move(r);
}

StateId RewardMachine::run(const FiniteWord& w, StateId from) const {
    StateId q = from;
    for (Letter l : w) q = next(q, l);
    return q;
}

// ---- payloads

namespace {

bool element_equal(const Element& x, const Element& y) {
    return x.side == y.side && x.zeta == y.zeta && payload_equal(*x.q, *y.q);
}

bool set_equal(const std::vector<Element>& x, const std::vector<Element>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!element_equal(x[i], y[i])) return false;
    return true;
}

std::string describe_set(const std::vector<Element>& s, bool sided) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += "(";
        if (sided) out += std::to_string(s[i].side) + ":";
        out += describe(*s[i].q) + ", " + s[i].zeta.to_string() + ")";
    }
    return out + "}";
}

json element_to_json(const Element& e, bool sided) {
    json j{{"q", payload_to_json(*e.q)}, {"zeta", e.zeta.to_fraction()}};
    if (sided) j["side"] = e.side;
    return j;
}

Element element_from_json(const json& j) {
    return {j.value("side", 1), payload_from_json(j.at("q")), Rational::parse(j.at("zeta").get<std::string>())};
}

}  // namespace

bool payload_equal(const Payload& x, const Payload& y) {
    if (&x == &y) return true;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case PayloadKind::Base: return x.tag == y.tag;
    case PayloadKind::Wrapped:
    case PayloadKind::Left:
    case PayloadKind::Right: return payload_equal(*x.a, *y.a);
    case PayloadKind::Pair:
        return x.value == y.value && payload_equal(*x.a, *y.a) && payload_equal(*x.b, *y.b);
    case PayloadKind::Ev: return x.value == y.value && set_equal(x.set, y.set);
    case PayloadKind::Un:
        if (x.value != y.value || !set_equal(x.set, y.set) || x.sets.size() != y.sets.size()) return false;
        for (std::size_t i = 0; i < x.sets.size(); ++i)
            if (!set_equal(x.sets[i], y.sets[i])) return false;
        return true;
    }
    return false;
}

std::string describe(const Payload& p) {
    switch (p.kind) {
    case PayloadKind::Base: return p.tag;
    case PayloadKind::Wrapped: return "X." + describe(*p.a);
    case PayloadKind::Left: return "L." + describe(*p.a);
    case PayloadKind::Right: return "R." + describe(*p.a);
    case PayloadKind::Pair:
        return "(" + describe(*p.a) + ", " + describe(*p.b) + ", " + p.value.to_string() + ")";
    case PayloadKind::Ev: return "(" + p.value.to_string() + ", " + describe_set(p.set, false) + ")";
    case PayloadKind::Un: {
        std::string out = "(" + p.value.to_string() + ", " + describe_set(p.set, true) + ", {";
        for (std::size_t i = 0; i < p.sets.size(); ++i) {
            if (i) out += ", ";
            out += describe_set(p.sets[i], true);
        }
        return out + "})";
    }
    }
    return "?";
}

json payload_to_json(const Payload& p) {
    switch (p.kind) {
    case PayloadKind::Base: return {{"kind", "Base"}, {"tag", p.tag}};
    case PayloadKind::Wrapped: return {{"kind", "Wrapped"}, {"inner", payload_to_json(*p.a)}};
    case PayloadKind::Left: return {{"kind", "Left"}, {"q", payload_to_json(*p.a)}};
    case PayloadKind::Right: return {{"kind", "Right"}, {"q", payload_to_json(*p.a)}};
    case PayloadKind::Pair:
        return {{"kind", "Pair"},
                {"q1", payload_to_json(*p.a)},
                {"q2", payload_to_json(*p.b)},
                {"zeta", p.value.to_fraction()}};
    case PayloadKind::Ev: {
        json s = json::array();
        for (const auto& e : p.set) s.push_back(element_to_json(e, false));
        return {{"kind", "Ev"}, {"v", p.value.to_fraction()}, {"S", s}};
    }
    case PayloadKind::Un: {
        json i = json::array(), x = json::array();
        for (const auto& e : p.set) i.push_back(element_to_json(e, true));
        for (const auto& s : p.sets) {
            json js = json::array();
            for (const auto& e : s) js.push_back(element_to_json(e, true));
            x.push_back(js);
        }
        return {{"kind", "Un"}, {"v", p.value.to_fraction()}, {"I", i}, {"X", x}};
    }
    }
    return {};
}

PayloadRef payload_from_json(const json& j) {
    auto p = std::make_shared<Payload>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "Base") {
        p->kind = PayloadKind::Base;
        p->tag = j.at("tag").get<std::string>();
    } else if (kind == "Wrapped") {
        p->kind = PayloadKind::Wrapped;
        p->a = payload_from_json(j.at("inner"));
    } else if (kind == "Left" || kind == "Right") {
        p->kind = kind == "Left" ? PayloadKind::Left : PayloadKind::Right;
        p->a = payload_from_json(j.at("q"));
    } else if (kind == "Pair") {
        p->kind = PayloadKind::Pair;
        p->a = payload_from_json(j.at("q1"));
        p->b = payload_from_json(j.at("q2"));
        p->value = Rational::parse(j.at("zeta").get<std::string>());
    } else if (kind == "Ev") {
        p->kind = PayloadKind::Ev;
        p->value = Rational::parse(j.at("v").get<std::string>());
        for (const auto& e : j.at("S")) p->set.push_back(element_from_json(e));
    } else if (kind == "Un") {
        p->kind = PayloadKind::Un;
        p->value = Rational::parse(j.at("v").get<std::string>());
        for (const auto& e : j.at("I")) p->set.push_back(element_from_json(e));
        for (const auto& s : j.at("X")) {
            std::vector<Element> set;
            for (const auto& e : s) set.push_back(element_from_json(e));
            p->sets.push_back(std::move(set));
        }
    } else {
        throw ValidationError("unknown payload kind '" + kind + "'");
    }
    return p;
}

// ---- evaluation

Rational rm_eval_finite(const RewardMachine& r, const FiniteWord& w) {
    Rational total = 0, scale = 1;
    StateId q = r.initial();
    for (Letter l : w) {
        total += scale * r.reward(q, l);
        scale *= r.lambda();
        q = r.next(q, l);
    }
    return total;
}

Interval rm_eval_bounds(const RewardMachine& r, const FiniteWord& w) {
    Rational v = rm_eval_finite(r, w);
    return {v, v + pow(r.lambda(), static_cast<unsigned>(w.size()))};
}

Rational rm_eval_lasso(const RewardMachine& r, const LassoWord& w) {
    if (w.cycle.empty()) throw ValidationError("lasso cycle must be nonempty");
    const Rational& lam = r.lambda();
    Rational total = 0, scale = 1;
    StateId q = r.initial();
    auto step = [&](Letter l) {
        total += scale * r.reward(q, l);
        scale *= lam;
        q = r.next(q, l);
    };
    for (Letter l : w.prefix) step(l);
    if (lam.is_zero()) return total;

    // iterate the cycle until its entry state repeats
    std::map<StateId, std::size_t> seen;
    std::vector<Rational> totals, scales;
    while (!seen.count(q)) {
        seen[q] = totals.size();
        totals.push_back(total);
        scales.push_back(scale);
        for (Letter l : w.cycle) step(l);
    }
    std::size_t j = seen[q];
    Rational loop_gain = total - totals[j];          // discounted sum over the repeating block
    Rational loop_scale = scale / scales[j];          // lambda^(block length)
    return totals[j] + loop_gain / (1 - loop_scale);
}

// ---- JSON

json machine_to_json(const RewardMachine& r) {
    json alphabet = json::array();
    for (Letter l = 0; l < r.num_letters(); ++l) alphabet.push_back(r.alphabet().names(l));
    json states = json::array(), delta = json::array(), reward = json::array();
    for (StateId q = 0; q < r.num_states(); ++q) {
        states.push_back({{"id", q}, {"payload", payload_to_json(r.payload(q))}});
        for (Letter l = 0; l < r.num_letters(); ++l) {
            delta.push_back({q, l, r.next(q, l)});
            reward.push_back({q, l, r.reward(q, l).to_fraction()});
        }
    }
    json j{{"lambda", r.lambda().to_fraction()},
           {"props", r.alphabet().props()},
           {"alphabet", alphabet},
           {"states", states},
           {"delta", delta},
           {"reward", reward},
           {"initial", r.initial()}};
    if (r.zero_discount) j["zero_discount"] = true;
    return j;
}

RewardMachine machine_from_json(const json& j) {
    try {
        std::vector<std::string> props;
        if (j.contains("props")) {
            props = j.at("props").get<std::vector<std::string>>();
        } else {
            for (const auto& letter : j.at("alphabet"))
                for (const auto& p : letter) props.push_back(p.get<std::string>());
        }
        Alphabet a(props);
        const auto& letters = j.at("alphabet");
        if (letters.size() != a.size()) throw ValidationError("machine alphabet must list every letter");
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (a.letter(letters[i].get<std::vector<std::string>>()) != i)
                throw ValidationError("machine alphabet letters out of canonical order");

        RewardMachine r(a, Rational::parse(j.at("lambda").get<std::string>()));
        const auto& states = j.at("states");
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (states[i].at("id").get<std::size_t>() != i) throw ValidationError("state ids must be 0..n-1");
            r.add_state(payload_from_json(states[i].at("payload")));
        }
        const std::size_t n = r.num_states(), k = r.num_letters();
        std::vector<bool> seen_d(n * k), seen_r(n * k);
        std::vector<StateId> to(n * k);
        std::vector<Rational> rew(n * k);
        for (const auto& e : j.at("delta")) {
            auto q = e.at(0).get<std::size_t>(), l = e.at(1).get<std::size_t>(), t = e.at(2).get<std::size_t>();
            if (q >= n || l >= k || t >= n) throw ValidationError("delta entry out of range");
            to[q * k + l] = static_cast<StateId>(t);
            seen_d[q * k + l] = true;
        }
        for (const auto& e : j.at("reward")) {
            auto q = e.at(0).get<std::size_t>(), l = e.at(1).get<std::size_t>();
            if (q >= n || l >= k) throw ValidationError("reward entry out of range");
            rew[q * k + l] = Rational::parse(e.at(2).get<std::string>());
            seen_r[q * k + l] = true;
        }
        for (std::size_t i = 0; i < n * k; ++i)
            if (!seen_d[i] || !seen_r[i]) throw ValidationError("delta and reward must be total");
        for (StateId q = 0; q < n; ++q)
            for (Letter l = 0; l < k; ++l) r.set_edge(q, l, to[q * k + l], rew[q * k + l]);
        auto init = j.at("initial").get<std::size_t>();
        if (init >= n) throw ValidationError("initial state out of range");
        r.set_initial(static_cast<StateId>(init));
        r.zero_discount = j.value("zero_discount", false);
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed machine JSON: ") + e.what());
    }
}

}  // namespace dltl
