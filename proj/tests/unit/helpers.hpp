#pragma once

#include "dltl/learning.hpp"

#include "json.hpp"

#include <string>

namespace testing {

inline dltl::Rational R(const char* s) { return dltl::Rational::parse(s); }

inline dltl::FiniteWord W(const dltl::Alphabet& a, const char* json) {
    return dltl::word_from_json(a, nlohmann::json::parse(json));
}

inline dltl::LassoWord L(const dltl::Alphabet& a, const char* json) {
    return dltl::lasso_from_json(a, nlohmann::json::parse(json));
}

inline std::string data_path(const char* name) { return std::string(DLTL_DATA_DIR) + "/" + name; }

}  // namespace testing
