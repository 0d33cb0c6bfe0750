#pragma once

#include "dltl/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dltl {

enum class Op { Atom, True, False, Not, Or, And, Next, Until, Finally, Globally };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string name;   // Atom only
    Rational lambda;    // temporal operators only
    Formula lhs, rhs;   // unary ops use lhs
};

Formula atom(std::string name);
Formula top();
Formula bottom();
Formula neg(Formula f);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula next(Rational lambda, Formula f);
Formula until(Rational lambda, Formula a, Formula b);
Formula finally(Rational lambda, Formula f);
Formula globally(Rational lambda, Formula f);

bool is_temporal(Op op);
bool equal(const Formula& a, const Formula& b);

Formula parse(std::string_view text);
std::string to_string(const Formula& f);

// Rewrites And/Finally/Globally into the core grammar plus True/False.
Formula desugar(const Formula& f);
bool is_core(const Formula& f);

struct Uniformity {
    enum Kind { Any, Uniform, NonUniform } kind = Any;
    Rational lambda;  // meaningful when kind == Uniform
    bool operator==(const Uniformity&) const = default;
};
Uniformity is_uniform(const Formula& f);

bool has_temporal(const Formula& f);
Rational max_discount(const Formula& f);
std::size_t formula_size(const Formula& f);
std::size_t temporal_depth(const Formula& f);
std::vector<std::string> props(const Formula& f);

std::string op_name(Op op);

}  // namespace dltl
