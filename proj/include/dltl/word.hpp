#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dltl {

// Valuation over an Alphabet: bit i set iff props()[i] holds.
using Letter = std::uint32_t;
using FiniteWord = std::vector<Letter>;

struct LassoWord {
    FiniteWord prefix;
    FiniteWord cycle;  // nonempty
    FiniteWord unroll(std::size_t length) const;
};

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> props);  // sorted, deduplicated

    const std::vector<std::string>& props() const { return props_; }
    std::size_t num_props() const { return props_.size(); }
    std::size_t size() const { return std::size_t{1} << props_.size(); }
    // -1 when absent
    int index_of(const std::string& p) const;
    bool contains(const std::string& p) const { return index_of(p) >= 0; }

    Letter letter(const std::vector<std::string>& true_props) const;
    std::vector<std::string> names(Letter l) const;
    bool holds(Letter l, const std::string& p) const;
    // Re-encode a letter of `other` into this alphabet; props absent here are dropped.
    Letter translate(Letter l, const Alphabet& other) const;
    Alphabet merged(const Alphabet& other) const;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> props_;
};

nlohmann::json word_to_json(const Alphabet& a, const FiniteWord& w);
FiniteWord word_from_json(const Alphabet& a, const nlohmann::json& j);
nlohmann::json lasso_to_json(const Alphabet& a, const LassoWord& w);
LassoWord lasso_from_json(const Alphabet& a, const nlohmann::json& j);
// All proposition names mentioned in a word or lasso JSON value.
std::vector<std::string> props_in_json(const nlohmann::json& j);

}  // namespace dltl
