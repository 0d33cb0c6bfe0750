#include "dltl/errors.hpp"
#include "dltl/reward_machine.hpp"

#include <map>

namespace dltl {

namespace {

class Compiler {
public:
    Compiler(const Alphabet& a, const Rational& lambda, const BuildOptions& opt) : a_(a), lam_(lambda), opt_(opt) {}

    RewardMachine build(const Formula& f) {
        std::string key = to_string(f);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        RewardMachine m = build_fresh(f);
        memo_.emplace(std::move(key), m);
        return m;
    }

private:
    RewardMachine build_fresh(const Formula& f) {
        switch (f->op) {
        case Op::Atom: return rm_atomic(f->name, a_, lam_);
        case Op::True: return rm_constant(true, a_, lam_);
        case Op::False: return rm_constant(false, a_, lam_);
        case Op::Not: return rm_negation(build(f->lhs));
        case Op::Or: return rm_disjunction(build(f->lhs), build(f->rhs), opt_);
        case Op::And:
            return rm_negation(rm_disjunction(rm_negation(build(f->lhs)), rm_negation(build(f->rhs)), opt_));
        case Op::Next: return rm_next(build(f->lhs));
        case Op::Until: return rm_until(build(f->lhs), build(f->rhs), opt_);
        case Op::Finally: return rm_eventually(build(f->lhs), opt_);
        case Op::Globally: return rm_negation(rm_eventually(rm_negation(build(f->lhs)), opt_));
        }
        throw InvariantViolation("unknown operator");
    }

    const Alphabet& a_;
    Rational lam_;
    BuildOptions opt_;
    std::map<std::string, RewardMachine> memo_;
};

// Every temporal operand sits behind a zero factor, so the first letter fixes the value.
RewardMachine compile_zero(const Formula& f, const Alphabet& a) {
    RewardMachine m(a, 0);
    auto init = std::make_shared<Payload>();
    init->tag = "init";
    auto sink = std::make_shared<Payload>();
    sink->tag = "sink";
    StateId q0 = m.add_state(init), q1 = m.add_state(sink);
    for (Letter l = 0; l < a.size(); ++l) {
        m.set_edge(q0, l, q1, eval_finite(f, a, {l}));
        m.set_edge(q1, l, q1, 0);
    }
    m.set_initial(q0);
    m.zero_discount = true;
    return m;
}

}  // namespace

RewardMachine compile(const Formula& f, const Alphabet& a, const Rational& lambda, const BuildOptions& opt) {
    if (lambda < 0 || lambda >= 1) throw ValidationError("machine discount must lie in [0,1)");
    Uniformity u = is_uniform(f);
    if (u.kind == Uniformity::NonUniform)
        throw ValidationError("formula is not uniformly discounted; no finite reward machine exists in general");
    if (u.kind == Uniformity::Uniform && u.lambda != lambda)
        throw ValidationError("formula discount " + u.lambda.to_string() + " differs from requested " +
                              lambda.to_string());
    for (const auto& p : props(f))
        if (!a.contains(p)) throw ValidationError("proposition '" + p + "' not in alphabet");
    if (lambda.is_zero()) return compile_zero(f, a);
    return Compiler(a, lambda, opt).build(f);
}

RewardMachine compile(const Formula& f, const Alphabet& a, const BuildOptions& opt) {
    Uniformity u = is_uniform(f);
    if (u.kind == Uniformity::NonUniform)
        throw ValidationError("formula is not uniformly discounted; no finite reward machine exists in general");
    return compile(f, a, u.kind == Uniformity::Uniform ? u.lambda : Rational(1, 2), opt);
}

RewardMachine compile(const Formula& f, const BuildOptions& opt) { return compile(f, Alphabet(props(f)), opt); }

}  // namespace dltl
