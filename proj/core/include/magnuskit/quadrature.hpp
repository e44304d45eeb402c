#pragma once

#include <string>
#include <vector>

namespace magnus {

enum class QuadFlavor { gauss_legendre, newton_cotes };

/// Quadrature on [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
    QuadFlavor flavor = QuadFlavor::gauss_legendre;
    std::string name;

    /// k = 1 (midpoint), 2, 3.
    [[nodiscard]] static QuadratureRule gauss_legendre(int k);
    /// k = 3 (Simpson), 5 (Boole).
    [[nodiscard]] static QuadratureRule newton_cotes(int k);

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
    [[nodiscard]] bool symmetric(double tol = 1e-15) const;
};

/// Maps k samples to s graded moments: Q_ij = b_j (c_j - 1/2)^i, R = inverse of T^(s).
struct QuadratureTransform {
    int s = 0;
    std::size_t k = 0;
    std::vector<double> Q;   // s x k
    std::vector<double> T;   // s x s
    std::vector<double> R;   // s x s
    std::vector<double> RQ;  // s x k

    [[nodiscard]] static QuadratureTransform make(const QuadratureRule& rule, int s);
    [[nodiscard]] double rq(int i, std::size_t j) const { return RQ[static_cast<std::size_t>(i) * k + j]; }
};

}  // namespace magnus
