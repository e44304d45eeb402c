#pragma once

#include "magnuskit/matrix.hpp"

#include <functional>
#include <string>
#include <vector>

namespace magnus {

/// -phi'' + V(x) phi = lambda phi on (a, b), phi(a) = phi(b) = 0.
struct SLProblem {
    std::string label;
    std::function<double(double)> V;
    double a = 0.0;
    double b = 1.0;
    int N = 200;
    /// Shooting order 4 (GL2) or 6 (GL3).
    int order = 4;

    void validate() const;
};

struct ShootResult {
    double phi_b = 0.0;
    Matrix transfer{2};
};

/// Propagates (phi, phi') = (0, 1) from a to b through N exponentials in SL(2).
[[nodiscard]] ShootResult shoot(const SLProblem& prob, double lambda);

/// Newton iteration on phi_b(lambda) with a centered difference derivative.
[[nodiscard]] double find_eigenvalue(const SLProblem& prob, double lambda_guess, double tol = 1e-12,
                                     int max_iter = 50, int* iterations = nullptr);

/// Sign changes of phi_b on the scan grid, each refined by safeguarded Newton.
[[nodiscard]] std::vector<double> scan_eigenvalues(const SLProblem& prob, double lambda_min, double lambda_max,
                                                   double scan_step);

}  // namespace magnus
