#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace logflat {

using QVec = std::vector<mpq_class>;

// Exact phase-one simplex with Bland's rule: some x ≥ 0 with A·x = b, or nullopt.
std::optional<QVec> lp_feasible(const std::vector<QVec>& a, const QVec& b);

// w with w·v_j = 0 for j in zero_set and w·v_j ≥ 1 otherwise.
std::optional<QVec> separating_functional(const std::vector<QVec>& vectors,
                                          const std::vector<bool>& zero_set, std::size_t dim);

// λ ≥ 0 with Σ λ_j v_j = x.
std::optional<QVec> cone_combination(const std::vector<QVec>& vectors, const QVec& x,
                                     std::size_t dim);

}  // namespace logflat
