#include "dltl/formula.hpp"

#include "dltl/errors.hpp"

#include <algorithm>
#include <set>

namespace dltl {

namespace {

Formula make(Op op, Formula l = nullptr, Formula r = nullptr, Rational lam = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->lambda = std::move(lam);
    return n;
}

void check_discount(const Rational& l) {
    if (l < 0 || l >= 1) throw ValidationError("discount " + l.to_string() + " outside [0,1)");
}

}  // namespace

Formula atom(std::string name) {
    auto n = std::make_shared<Node>();
    n->op = Op::Atom;
    n->name = std::move(name);
    return n;
}
Formula top() { return make(Op::True); }
Formula bottom() { return make(Op::False); }
Formula neg(Formula f) { return make(Op::Not, std::move(f)); }
Formula lor(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
Formula next(Rational l, Formula f) {
    check_discount(l);
    return make(Op::Next, std::move(f), nullptr, std::move(l));
}
Formula until(Rational l, Formula a, Formula b) {
    check_discount(l);
    return make(Op::Until, std::move(a), std::move(b), std::move(l));
}
Formula finally(Rational l, Formula f) {
    check_discount(l);
    return make(Op::Finally, std::move(f), nullptr, std::move(l));
}
Formula globally(Rational l, Formula f) {
    check_discount(l);
    return make(Op::Globally, std::move(f), nullptr, std::move(l));
}

bool is_temporal(Op op) {
    return op == Op::Next || op == Op::Until || op == Op::Finally || op == Op::Globally;
}

bool equal(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (!a || !b || a->op != b->op) return false;
    if (a->op == Op::Atom) return a->name == b->name;
    if (is_temporal(a->op) && a->lambda != b->lambda) return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::string op_name(Op op) {
    switch (op) {
    case Op::Atom: return "Atom";
    case Op::True: return "True";
    case Op::False: return "False";
    case Op::Not: return "Not";
    case Op::Or: return "Or";
    case Op::And: return "And";
    case Op::Next: return "Next";
    case Op::Until: return "Until";
    case Op::Finally: return "Finally";
    case Op::Globally: return "Globally";
    }
    return "?";
}

namespace {

// precedence levels: 0 or, 1 and, 2 until, 3 unary/atomic
int level(Op op) {
    switch (op) {
    case Op::Or: return 0;
    case Op::And: return 1;
    case Op::Until: return 2;
    default: return 3;
    }
}

void print(const Formula& f, int need, std::string& out) {
    bool paren = level(f->op) < need;
    if (paren) out += '(';
    switch (f->op) {
    case Op::Atom: out += f->name; break;
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Not:
        out += '!';
        print(f->lhs, 3, out);
        break;
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
        out += f->op == Op::Next ? "X[" : f->op == Op::Finally ? "F[" : "G[";
        out += f->lambda.to_string();
        out += "] ";
        print(f->lhs, 3, out);
        break;
    case Op::Or:
        print(f->lhs, 0, out);
        out += " | ";
        print(f->rhs, 1, out);
        break;
    case Op::And:
        print(f->lhs, 1, out);
        out += " & ";
        print(f->rhs, 2, out);
        break;
    case Op::Until:
        print(f->lhs, 3, out);
        out += " U[" + f->lambda.to_string() + "] ";
        print(f->rhs, 2, out);
        break;
    }
    if (paren) out += ')';
}

}  // namespace

std::string to_string(const Formula& f) {
    std::string out;
    print(f, 0, out);
    return out;
}

Formula desugar(const Formula& f) {
    switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False: return f;
    case Op::Not: return neg(desugar(f->lhs));
    case Op::Or: return lor(desugar(f->lhs), desugar(f->rhs));
    case Op::And: return neg(lor(neg(desugar(f->lhs)), neg(desugar(f->rhs))));
    case Op::Next: return next(f->lambda, desugar(f->lhs));
    case Op::Until: return until(f->lambda, desugar(f->lhs), desugar(f->rhs));
    case Op::Finally: return until(f->lambda, top(), desugar(f->lhs));
    case Op::Globally: return neg(until(f->lambda, top(), neg(desugar(f->lhs))));
    }
    return f;
}

bool is_core(const Formula& f) {
    if (!f) return true;
    if (f->op == Op::And || f->op == Op::Finally || f->op == Op::Globally) return false;
    return is_core(f->lhs) && is_core(f->rhs);
}

namespace {

void collect_discounts(const Formula& f, std::vector<Rational>& out) {
    if (!f) return;
    if (is_temporal(f->op)) out.push_back(f->lambda);
    collect_discounts(f->lhs, out);
    collect_discounts(f->rhs, out);
}

void collect_props(const Formula& f, std::set<std::string>& out) {
    if (!f) return;
    if (f->op == Op::Atom) out.insert(f->name);
    collect_props(f->lhs, out);
    collect_props(f->rhs, out);
}

}  // namespace

Uniformity is_uniform(const Formula& f) {
    std::vector<Rational> ls;
    collect_discounts(f, ls);
    if (ls.empty()) return {};
    for (const auto& l : ls)
        if (l != ls.front()) return {Uniformity::NonUniform, 0};
    return {Uniformity::Uniform, ls.front()};
}

bool has_temporal(const Formula& f) {
    if (!f) return false;
    return is_temporal(f->op) || has_temporal(f->lhs) || has_temporal(f->rhs);
}

Rational max_discount(const Formula& f) {
    std::vector<Rational> ls;
    collect_discounts(f, ls);
    if (ls.empty()) throw ValidationError("formula has no temporal operator");
    return *std::max_element(ls.begin(), ls.end());
}

std::size_t formula_size(const Formula& f) {
    auto count = [](auto&& self, const Formula& g) -> std::size_t {
        if (!g) return 0;
        return 1 + self(self, g->lhs) + self(self, g->rhs);
    };
    return count(count, is_core(f) ? f : desugar(f));
}

std::size_t temporal_depth(const Formula& f) {
    if (!f) return 0;
    std::size_t d = std::max(temporal_depth(f->lhs), temporal_depth(f->rhs));
    return d + (is_temporal(f->op) ? 1 : 0);
}

std::vector<std::string> props(const Formula& f) {
    std::set<std::string> s;
    collect_props(f, s);
    return {s.begin(), s.end()};
}

}  // namespace dltl
