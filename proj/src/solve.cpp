#include "dltl/mdp.hpp"

#include <cmath>

namespace dltl {

namespace {

inline double choice_value(const ProductMdp& p, std::uint32_t c, const std::vector<double>& v) {
    double acc = 0;
    for (std::uint32_t k = p.succ_begin[c]; k < p.succ_begin[c + 1]; ++k) acc += p.prob[k] * v[p.succ[k]];
    return acc;
}

inline double backup(const ProductMdp& p, std::uint32_t i, const std::vector<double>& v) {
    double best = -1;
    for (std::uint32_t c = p.choice_begin[i]; c < p.choice_begin[i + 1]; ++c) best = std::max(best, choice_value(p, c, v));
    return p.step_reward[i] + p.lam * best;
}

}  // namespace

double bellman_sweep(const ProductMdp& p, const std::vector<double>& v, std::vector<double>& out, Exec exec) {
    const auto n = static_cast<std::int64_t>(p.num_states());
    double diff = 0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : diff)
        for (std::int64_t i = 0; i < n; ++i) {
            out[i] = backup(p, static_cast<std::uint32_t>(i), v);
            diff = std::max(diff, std::fabs(out[i] - v[i]));
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            out[i] = backup(p, static_cast<std::uint32_t>(i), v);
            diff = std::max(diff, std::fabs(out[i] - v[i]));
        }
    }
    return diff;
}

ValueFunction value_iteration(const ProductMdp& p, double tol, Exec exec, std::size_t max_iter) {
    ValueFunction vf;
    std::vector<double> cur(p.num_states(), 0.0), nxt(p.num_states(), 0.0);
    const double stop = p.lam > 0 ? tol * (1 - p.lam) / (2 * p.lam) : 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double diff = bellman_sweep(p, cur, nxt, exec);
        cur.swap(nxt);
        vf.iterations = it + 1;
        vf.residual = diff;
        if (diff <= stop) break;
    }
    vf.v = std::move(cur);
    return vf;
}

}  // namespace dltl
