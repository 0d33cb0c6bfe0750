#pragma once

#include "dltl/errors.hpp"
#include "dltl/formula.hpp"
#include "dltl/semantics.hpp"
#include "dltl/word.hpp"

#include "json.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dltl {

using StateId = std::uint32_t;

enum class PayloadKind { Base, Wrapped, Pair, Left, Right, Ev, Un };

struct Payload;
using PayloadRef = std::shared_ptr<const Payload>;

struct Element {
    int side;  // 1 or 2 for until operands; 1 for eventually
    PayloadRef q;
    Rational zeta;
};

struct Payload {
    PayloadKind kind = PayloadKind::Base;
    std::string tag;                        // Base
    PayloadRef a, b;                        // Wrapped/Left/Right: a; Pair: a, b
    Rational value;                         // Pair: zeta; Ev/Un: v
    std::vector<Element> set;               // Ev: S; Un: I
    std::vector<std::vector<Element>> sets; // Un: X
};

bool payload_equal(const Payload& x, const Payload& y);
std::string describe(const Payload& p);
nlohmann::json payload_to_json(const Payload& p);
PayloadRef payload_from_json(const nlohmann::json& j);

class RewardMachine {
public:
    RewardMachine() = default;
    RewardMachine(Alphabet alphabet, Rational lambda);

    const Alphabet& alphabet() const { return alphabet_; }
    const Rational& lambda() const { return lambda_; }
    std::size_t num_states() const { return payloads_.size(); }
    std::size_t num_letters() const { return alphabet_.size(); }
    StateId initial() const { return initial_; }

    StateId next(StateId q, Letter l) const { return next_[q * num_letters() + l]; }
    const Rational& reward(StateId q, Letter l) const { return rewards_[q * num_letters() + l]; }
    const Payload& payload(StateId q) const { return *payloads_[q]; }
    const PayloadRef& payload_ref(StateId q) const { return payloads_[q]; }

    StateId add_state(PayloadRef p);
    void set_edge(StateId q, Letter l, StateId to, Rational r);
    void set_initial(StateId q) { initial_ = q; }
    void set_reward(StateId q, Letter l, Rational r) { rewards_[q * num_letters() + l] = std::move(r); }

    // Follow w from `from`; returns end state.
    StateId run(const FiniteWord& w, StateId from) const;
    StateId run(const FiniteWord& w) const { return run(w, initial_); }

    // Set when this machine is the first-letter special case for lambda = 0.
    bool zero_discount = false;

private:
    Alphabet alphabet_;
    Rational lambda_;
    StateId initial_ = 0;
    std::vector<PayloadRef> payloads_;
    std::vector<StateId> next_;
    std::vector<Rational> rewards_;
};

struct BuildOptions {
    std::size_t state_budget = 1000000;
    bool eventually_dedup = false;
    // Drop subset elements in the eventually construction that can never attain the max.
    // Preserves the value of every infinite word; finite-word values stay within the usual lambda^n window.
    bool reduce = false;
};

// Scaled future value bounds per state: exact on closed sets with constant reward, [0,1] elsewhere.
std::vector<Interval> future_bounds(const RewardMachine& r);

RewardMachine rm_atomic(const std::string& p, const Alphabet& a, const Rational& lambda);
RewardMachine rm_constant(bool value, const Alphabet& a, const Rational& lambda);
RewardMachine rm_negation(const RewardMachine& r);
RewardMachine rm_next(const RewardMachine& r);
RewardMachine rm_disjunction(const RewardMachine& r1, const RewardMachine& r2, const BuildOptions& opt = {});
RewardMachine rm_eventually(const RewardMachine& r1, const BuildOptions& opt = {});
RewardMachine rm_until(const RewardMachine& r1, const RewardMachine& r2, const BuildOptions& opt = {});

// Alphabet defaults to props(f); lambda defaults to the formula's own factor or 1/2.
RewardMachine compile(const Formula& f, const Alphabet& a, const Rational& lambda, const BuildOptions& opt = {});
RewardMachine compile(const Formula& f, const Alphabet& a, const BuildOptions& opt = {});
RewardMachine compile(const Formula& f, const BuildOptions& opt = {});

Rational rm_eval_finite(const RewardMachine& r, const FiniteWord& w);
Interval rm_eval_bounds(const RewardMachine& r, const FiniteWord& w);
// Exact value on an ultimately periodic word.
Rational rm_eval_lasso(const RewardMachine& r, const LassoWord& w);

struct Edge {
    StateId from;
    Letter letter;
    StateId to;
    Rational reward;
};

struct SccReport {
    std::vector<std::vector<StateId>> components;   // sinks first
    std::vector<StateId> component_of;
    std::vector<bool> has_internal;
    std::vector<Rational> type;                     // valid where has_internal
};

class InvariantI2Violation : public InvariantViolation {
public:
    InvariantI2Violation(const std::string& msg, Edge a, Edge b)
        : InvariantViolation(msg), first(std::move(a)), second(std::move(b)) {}
    Edge first, second;
};

// Plain Tarjan partition, no reward checks.
SccReport scc_partition(const RewardMachine& r);
// Partition plus I2 check; throws InvariantI2Violation.
SccReport scc_decompose(const RewardMachine& r);

struct Violation {
    std::string invariant;  // "I1", "I2", "I3"
    std::string detail;
};

struct InvariantReport {
    bool i1 = true, i2 = true, i3 = true;
    std::size_t trials = 0;
    std::vector<Violation> violations;
    bool ok() const { return i1 && i2 && i3; }
    nlohmann::json to_json() const;
};

InvariantReport check_invariants(const RewardMachine& r, const Formula& f, std::size_t trials,
                                 std::size_t max_len, std::uint64_t seed);

std::string to_dot(const RewardMachine& r);
nlohmann::json machine_to_json(const RewardMachine& r);
RewardMachine machine_from_json(const nlohmann::json& j);

}  // namespace dltl
