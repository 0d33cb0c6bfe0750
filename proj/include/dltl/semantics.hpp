#pragma once

#include "dltl/formula.hpp"
#include "dltl/word.hpp"

namespace dltl {

struct Interval {
    Rational lo, hi;
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool operator==(const Interval&) const = default;
};

// Bounds on the value over every infinite extension of w.
Interval eval_interval(const Formula& f, const Alphabet& a, const FiniteWord& w);

// Value of w followed by the all-false letter forever.
Rational eval_finite(const Formula& f, const Alphabet& a, const FiniteWord& w);

// Value of every suffix w_{k:} followed by the all-false letter, k = 0..|w|.
std::vector<Rational> eval_finite_suffixes(const Formula& f, const Alphabet& a, const FiniteWord& w);

Interval eval_lasso(const Formula& f, const Alphabet& a, const LassoWord& w, const Rational& tol);

// Smallest T with lambda_max^T <= eps; 0 for propositional formulas.
std::size_t horizon(const Formula& f, const Rational& eps);
std::size_t horizon_for(const Rational& lambda_max, const Rational& eps);

}  // namespace dltl
