#pragma once

#include "magnuskit/matrix.hpp"
#include "magnuskit/quadrature.hpp"

#include <array>
#include <functional>
#include <vector>

namespace magnus {

using CoefficientMap = std::function<Matrix(double)>;

/// alpha_i = h^i a_{i-1}, where a_j are Taylor coefficients of A about the step midpoint.
struct GradedAlphas {
    double h = 0.0;
    std::vector<Matrix> alphas;
    /// Normalized moments A^(0)..A^(s-1) as quadrature sums.
    std::vector<Matrix> moments;
};

[[nodiscard]] GradedAlphas collocation_alphas(const std::vector<Matrix>& samples, const QuadratureRule& rule,
                                              int s, double h);

/// Omega^[order] for order 2, 4 or 6.
[[nodiscard]] Matrix omega_truncated(const GradedAlphas& a, int order);

struct MagnusTerms {
    std::vector<Matrix> terms;
    double t0 = 0.0;
    double t = 0.0;
};

/// Omega_1..Omega_{n_max} over [t0, t] from the S_n^(j) recurrence on a uniform grid.
/// Breakpoints split the grid so piecewise-smooth maps are integrated with one-sided limits.
[[nodiscard]] MagnusTerms magnus_terms(const CoefficientMap& A, double t0, double t, int n_max, int grid = 256,
                                       const std::vector<double>& breakpoints = {});

/// Integral of ||A(s)||_2 over [t0, t]; the series is guaranteed to converge while this is below pi.
[[nodiscard]] double convergence_margin(const CoefficientMap& A, double t0, double t, int grid = 256);

/// Terms of log(e^{X1} e^{X2}) up to the given order (1..4).
[[nodiscard]] std::vector<Matrix> bch_terms(const Matrix& x1, const Matrix& x2, int order);

/// W_1..W_4 with e^{W1} e^{W2} e^{W3} e^{W4} matching e^{Omega} through fourth order.
[[nodiscard]] std::vector<Matrix> wilcox_terms(const MagnusTerms& terms);

/// B_0..B_12.
[[nodiscard]] const std::array<double, 13>& bernoulli_table();

}  // namespace magnus
