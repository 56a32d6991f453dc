#pragma once

#include <vector>

namespace relaxrd::detail {

/// Solves the dense system `matrix * x = rhs` (row-major, n x n) by Gaussian
/// elimination with partial pivoting in extended precision. Used to derive
/// stencil weights from moment conditions, where n <= 8.
std::vector<long double> solve_dense(std::vector<long double> matrix, std::vector<long double> rhs);

/// Weights w such that sum_m w[m] * functional_m(xi^k) == target[k] for
/// k = 0..n-1. `moments[m][k]` holds functional_m applied to the monomial xi^k.
std::vector<double> moment_weights(const std::vector<std::vector<long double>>& moments,
                                   const std::vector<long double>& target);

} // namespace relaxrd::detail
