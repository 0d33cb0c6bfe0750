#include "dltl/semantics.hpp"

#include "dltl/errors.hpp"

namespace dltl {

namespace {

using Track = std::vector<Interval>;

Interval scale(const Rational& l, const Interval& i) { return {l * i.lo, l * i.hi}; }

// Intervals for positions 0..n; position n stands for an arbitrary suffix.
Track interval_track(const Formula& f, const Alphabet& a, const FiniteWord& w) {
    const std::size_t n = w.size();
    Track out(n + 1);
    switch (f->op) {
    case Op::Atom: {
        int bit = a.index_of(f->name);
        for (std::size_t k = 0; k < n; ++k) {
            Rational v = bit >= 0 && (w[k] >> bit & 1) ? 1 : 0;
            out[k] = {v, v};
        }
        out[n] = {0, 1};
        return out;
    }
    case Op::True:
        for (auto& i : out) i = {1, 1};
        return out;
    case Op::False:
        for (auto& i : out) i = {0, 0};
        return out;
    case Op::Not: {
        Track s = interval_track(f->lhs, a, w);
        for (std::size_t k = 0; k <= n; ++k) out[k] = {1 - s[k].hi, 1 - s[k].lo};
        return out;
    }
    case Op::Or: {
        Track l = interval_track(f->lhs, a, w), r = interval_track(f->rhs, a, w);
        for (std::size_t k = 0; k <= n; ++k) out[k] = {max(l[k].lo, r[k].lo), max(l[k].hi, r[k].hi)};
        return out;
    }
    case Op::Next: {
        Track s = interval_track(f->lhs, a, w);
        for (std::size_t k = 0; k < n; ++k) out[k] = scale(f->lambda, s[k + 1]);
        out[n] = scale(f->lambda, s[n]);
        return out;
    }
    case Op::Until: {
        Track l = interval_track(f->lhs, a, w), r = interval_track(f->rhs, a, w);
        for (std::size_t k = 0; k <= n; ++k) {
            // sup over i of min(l^i r(k+i), min_{j<i} l^j l(k+j)); terms past n are dominated by i = n-k
            Interval best{0, 0};
            Interval guard{1, 1};
            Rational li = 1;
            for (std::size_t i = 0; k + i <= n; ++i) {
                Interval term = scale(li, r[k + i]);
                term = {min(term.lo, guard.lo), min(term.hi, guard.hi)};
                best = {max(best.lo, term.lo), max(best.hi, term.hi)};
                Interval g = scale(li, l[k + i]);
                guard = {min(guard.lo, g.lo), min(guard.hi, g.hi)};
                li *= f->lambda;
            }
            out[k] = best;
        }
        return out;
    }
    default:
        return interval_track(desugar(f), a, w);
    }
}

// Exact values on w followed by the empty letter forever.
std::vector<Rational> finite_track(const Formula& f, const Alphabet& a, const FiniteWord& w) {
    const std::size_t n = w.size();
    std::vector<Rational> out(n + 1);
    switch (f->op) {
    case Op::Atom: {
        int bit = a.index_of(f->name);
        for (std::size_t k = 0; k < n; ++k) out[k] = bit >= 0 && (w[k] >> bit & 1) ? 1 : 0;
        out[n] = 0;
        return out;
    }
    case Op::True:
        for (auto& v : out) v = 1;
        return out;
    case Op::False:
        return out;
    case Op::Not: {
        auto s = finite_track(f->lhs, a, w);
        for (std::size_t k = 0; k <= n; ++k) out[k] = 1 - s[k];
        return out;
    }
    case Op::Or: {
        auto l = finite_track(f->lhs, a, w), r = finite_track(f->rhs, a, w);
        for (std::size_t k = 0; k <= n; ++k) out[k] = max(l[k], r[k]);
        return out;
    }
    case Op::Next: {
        auto s = finite_track(f->lhs, a, w);
        for (std::size_t k = 0; k < n; ++k) out[k] = f->lambda * s[k + 1];
        out[n] = f->lambda * s[n];
        return out;
    }
    case Op::Until: {
        auto l = finite_track(f->lhs, a, w), r = finite_track(f->rhs, a, w);
        // on a constant suffix the i = 0 term dominates
        out[n] = r[n];
        for (std::size_t k = n; k-- > 0;) out[k] = max(r[k], min(l[k], f->lambda * out[k + 1]));
        return out;
    }
    default:
        return finite_track(desugar(f), a, w);
    }
}

}  // namespace

Interval eval_interval(const Formula& f, const Alphabet& a, const FiniteWord& w) {
    return interval_track(f, a, w).front();
}

Rational eval_finite(const Formula& f, const Alphabet& a, const FiniteWord& w) {
    return finite_track(f, a, w).front();
}

std::vector<Rational> eval_finite_suffixes(const Formula& f, const Alphabet& a, const FiniteWord& w) {
    return finite_track(f, a, w);
}

std::size_t horizon_for(const Rational& lambda_max, const Rational& eps) {
    if (eps <= 0) throw ValidationError("horizon tolerance must be positive");
    std::size_t t = 0;
    Rational p = 1;
    while (p > eps) {
        p *= lambda_max;
        ++t;
    }
    return t;
}

std::size_t horizon(const Formula& f, const Rational& eps) {
    if (!has_temporal(f)) return 0;
    return horizon_for(max_discount(f), eps);
}

Interval eval_lasso(const Formula& f, const Alphabet& a, const LassoWord& w, const Rational& tol) {
    std::size_t t = std::max<std::size_t>(1, horizon(f, tol));
    return eval_interval(f, a, w.unroll(t));
}

}  // namespace dltl
