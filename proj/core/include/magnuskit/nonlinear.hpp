#pragma once

#include "magnuskit/matrix.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace magnus {

using NonlinearMap = std::function<Matrix(double, const Matrix&)>;

/// group: Y' = A(t,Y) Y.  isospectral: Y' = [A(t,Y), Y].
struct NonlinearProblem {
    enum class Variant { group, isospectral };

    std::string label;
    std::size_t dim = 0;
    NonlinearMap A;
    Variant variant = Variant::group;
    Matrix Y0{1};
    StructureTag structure;
    double t0 = 0.0;
    double tf = 1.0;

    /// Isospectral: Y0 symmetric and A(t0, Y0) skew-symmetric.
    void validate() const;
};

/// Second-order explicit scheme: v = h A(t + h/2, e^{hA(t,Y)/2} Y), Y <- e^v Y.
[[nodiscard]] Matrix nl_magnus_step(const NonlinearProblem& prob, double t, double h, const Matrix& Y);

/// Y <- e^Omega Y e^{-Omega} with Omega of order 2 (midpoint) or 3 (GL2 nodes).
[[nodiscard]] Matrix isospectral_step(const NonlinearProblem& prob, int order, double t, double h, const Matrix& Y);

/// Fixed-step driver. order 0 selects nl_magnus_step, otherwise isospectral_step(order).
[[nodiscard]] Matrix integrate_nonlinear(const NonlinearProblem& prob, int order, double t0, double tf,
                                         std::int64_t n_steps);

/// Eigenvalues of a real symmetric 3x3 matrix in ascending order (trigonometric closed form).
[[nodiscard]] std::array<double, 3> symmetric_eigenvalues3(const Matrix& y);

}  // namespace magnus
