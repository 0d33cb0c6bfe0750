#include "dltl/errors.hpp"
#include "dltl/mdp.hpp"

namespace dltl {

Rational block_value(const Rational& l1, const Rational& l2, std::size_t k0, std::size_t k1) {
    auto a = static_cast<unsigned>(k0), b = static_cast<unsigned>(k1);
    return min(pow(l1, a) * (1 - pow(l2, b)), pow(l2, a + b));
}

std::size_t best_block_search(const Rational& l1, const Rational& l2, std::size_t k0, std::size_t kmax) {
    if (!(0 < l1 && l1 < l2 && l2 < 1)) throw ValidationError("need 0 < lambda1 < lambda2 < 1");
    std::size_t best = 0;
    Rational best_v = block_value(l1, l2, k0, 0);
    for (std::size_t k1 = 1; k1 <= kmax; ++k1) {
        Rational v = block_value(l1, l2, k0, k1);
        if (v > best_v) {
            best_v = std::move(v);
            best = k1;
        }
    }
    if (best == kmax) throw ValidationError("argmax sits on the search boundary; increase kmax");
    return best;
}

}  // namespace dltl
