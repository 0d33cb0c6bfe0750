#include "dltl/errors.hpp"
#include "dltl/learning.hpp"

#include <cmath>

namespace dltl {

namespace {

struct Node {
    std::uint32_t state;
    std::uint32_t history;
    std::size_t depth;
    bool terminal = false;
    double terminal_value = 0;
    double optimistic = 1;   // upper bound over every continuation
    std::vector<std::uint32_t> actions;
    std::vector<std::size_t> visits;
    std::vector<std::map<std::uint32_t, std::size_t>> succ;
};

class Rmax {
public:
    Rmax(Environment& env, const Formula& f, const Alphabet& a, std::size_t horizon, std::size_t known,
         const Rational& resolve_tol)
        : env_(env), f_(f), a_(a), horizon_(horizon), known_(known), resolve_tol_(resolve_tol) {}

    std::uint32_t node(std::uint32_t parent_h, const Observation& o, std::size_t depth) {
        Letter l = a_.translate(o.letter, env_.alphabet());
        std::uint32_t h = pi_.trie.child(parent_h, l);
        auto [it, fresh] = index_.emplace(std::make_pair(h, o.state), 0);
        if (!fresh) return it->second;
        it->second = static_cast<std::uint32_t>(nodes_.size());
        Node n;
        n.state = o.state;
        n.history = h;
        n.depth = depth;
        FiniteWord w = pi_.trie.word(h);
        Interval bound = eval_interval(f_, a_, w);
        n.optimistic = bound.hi.to_double();
        if (depth >= horizon_ || bound.width() <= resolve_tol_) {
            n.terminal = true;
            n.terminal_value = eval_finite(f_, a_, w).to_double();
        } else {
            n.actions = env_.enabled(o.state);
            n.visits.assign(n.actions.size(), 0);
            n.succ.resize(n.actions.size());
        }
        nodes_.push_back(std::move(n));
        value_.push_back(0);
        return it->second;
    }

    double q(std::uint32_t i, std::size_t k) const {
        const Node& n = nodes_[i];
        if (n.visits[k] < known_) return n.optimistic;
        double acc = 0;
        for (const auto& [c, cnt] : n.succ[k]) acc += static_cast<double>(cnt) * value_[c];
        return acc / static_cast<double>(n.visits[k]);
    }

    std::size_t greedy(std::uint32_t i) const {
        std::size_t best = 0;
        double bv = -1;
        for (std::size_t k = 0; k < nodes_[i].actions.size(); ++k)
            if (double v = q(i, k); v > bv) bv = v, best = k;
        return best;
    }

    // children are always created after their parents
    void solve() {
        for (std::size_t i = nodes_.size(); i-- > 0;) {
            const Node& n = nodes_[i];
            value_[i] = n.terminal ? n.terminal_value : q(static_cast<std::uint32_t>(i), greedy(static_cast<std::uint32_t>(i)));
        }
    }

    void episode() {
        Observation o = env_.reset();
        std::uint32_t cur = node(0, o, 0);
        while (!nodes_[cur].terminal) {
            std::size_t k = greedy(cur);
            Observation nx = env_.step(nodes_[cur].actions[k]);
            std::uint32_t child = node(nodes_[cur].history, nx, nodes_[cur].depth + 1);
            Node& n = nodes_[cur];
            ++n.visits[k];
            ++n.succ[k][child];
            cur = child;
        }
        solve();
    }

    // True when the greedy policy only reaches known pairs.
    bool settled() const {
        if (nodes_.empty()) return false;
        std::vector<std::uint32_t> stack{0};
        std::vector<bool> seen(nodes_.size(), false);
        seen[0] = true;
        while (!stack.empty()) {
            std::uint32_t i = stack.back();
            stack.pop_back();
            const Node& n = nodes_[i];
            if (n.terminal) continue;
            std::size_t k = greedy(i);
            if (n.visits[k] < known_) return false;
            for (const auto& [c, cnt] : n.succ[k])
                if (!seen[c]) seen[c] = true, stack.push_back(c);
        }
        return true;
    }

    HistoryPolicy policy() {
        HistoryPolicy out = pi_;
        out.horizon = horizon_;
        for (std::uint32_t i = 0; i < nodes_.size(); ++i)
            if (!nodes_[i].terminal) out.act[{nodes_[i].history, nodes_[i].state}] = nodes_[i].actions[greedy(i)];
        return out;
    }

    double root_value() const { return value_.empty() ? 1.0 : value_[0]; }
    std::size_t size() const { return nodes_.size(); }

private:
    Environment& env_;
    Formula f_;
    const Alphabet& a_;
    std::size_t horizon_, known_;
    Rational resolve_tol_;
    HistoryPolicy pi_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index_;
    std::vector<Node> nodes_;
    std::vector<double> value_;
};

}  // namespace

PacResult pac_learn(Environment& env, const Formula& f, const PacOptions& opt, std::uint64_t seed) {
    if (opt.eps <= 0 || opt.eps >= 1) throw ValidationError("eps must lie in (0,1)");
    if (opt.conf <= 0 || opt.conf >= 1) throw ValidationError("confidence parameter must lie in (0,1)");
    const Alphabet a = env.alphabet().merged(Alphabet(props(f)));
    const std::size_t horizon_T = horizon(f, opt.eps / 2);
    std::size_t known = opt.known_threshold;
    if (known == 0) {
        double na = static_cast<double>(env.num_actions());
        known = static_cast<std::size_t>(std::ceil(std::log(2 * na / opt.conf.to_double()) / opt.eps.to_double()));
    }
    Rational tol = opt.resolve_tol.is_zero() ? opt.eps / 4 : opt.resolve_tol;

    Rmax learner(env, f, a, horizon_T, known, tol);
    PacResult res;
    res.report.mode = "pac";
    res.report.seed = seed;
    std::size_t ep = 0;
    for (; ep < opt.max_episodes; ++ep) {
        learner.episode();
        if (opt.checkpoint_every && (ep + 1) % opt.checkpoint_every == 0) res.report.trace.push_back(learner.root_value());
        if (learner.settled()) {
            res.report.converged = true;
            ++ep;
            break;
        }
    }
    res.report.episodes = ep;
    res.report.env_steps = env.steps_taken();
    res.report.estimate = learner.root_value();
    res.report.extra = {{"horizon", horizon_T},
                        {"known_threshold", known},
                        {"resolve_tol", tol.to_fraction()},
                        {"tree_nodes", learner.size()},
                        {"eps", opt.eps.to_fraction()},
                        {"conf", opt.conf.to_fraction()}};
    if (!res.report.converged) res.report.extra["status"] = "episode budget exhausted before the policy settled";
    res.policy = learner.policy();
    return res;
}

}  // namespace dltl
