#include "magnuskit/nonlinear.hpp"

#include "magnuskit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace magnus {

namespace {

Matrix conjugate(const Matrix& omega, const Matrix& Y) {
    const Matrix e = expm(omega);
    return e * Y * expm(-omega);
}

// Y0 + [W, Y0] (+ 1/2 [W, [W, Y0]]).
Matrix ad_series(const Matrix& W, const Matrix& Y0, int terms) {
    Matrix out = Y0;
    Matrix ad = Y0;
    double fact = 1.0;
    for (int l = 1; l < terms; ++l) {
        ad = commutator(W, ad);
        fact *= l;
        out += (1.0 / fact) * ad;
    }
    return out;
}

}  // namespace

void NonlinearProblem::validate() const {
    if (!A) throw Error("invalid-problem", "coefficient map is empty");
    if (Y0.dim() != dim) throw Error("dimension-mismatch", label + ": Y0 has the wrong dimension");
    if (variant != Variant::isospectral) return;
    const double scale = std::max(1.0, frobenius_norm(Y0));
    if (frobenius_norm(Y0 - Y0.transpose()) > 1e-12 * scale)
        throw Error("structure-violation", label + ": Y0 must be symmetric");
    const Matrix a = A(t0, Y0);
    if (skew_symmetric_defect(a) > 1e-12 * std::max(1.0, frobenius_norm(a)))
        throw Error("structure-violation", label + ": A(t, Y) must be skew-symmetric");
}

Matrix nl_magnus_step(const NonlinearProblem& prob, double t, double h, const Matrix& Y) {
    const Matrix half = expm((0.5 * h) * prob.A(t, Y)) * Y;
    const Matrix v = h * prob.A(t + 0.5 * h, half);
    return expm(v) * Y;
}

Matrix isospectral_step(const NonlinearProblem& prob, int order, double t, double h, const Matrix& Y) {
    const auto& A = prob.A;
    // Omega^[2](s) by the midpoint rule with an Euler estimate of Omega^[1](s/2).
    const Matrix a0 = A(t, Y);
    auto omega2 = [&](double s) {
        const Matrix theta1 = ad_series((0.5 * s) * a0, Y, 2);
        return s * A(t + 0.5 * s, theta1);
    };
    if (order == 2) return conjugate(omega2(h), Y);
    if (order != 3) throw Error("order-not-supported", "isospectral_step supports orders 2, 3");

    const double d = std::sqrt(3.0) / 6.0;
    const double nodes[2] = {0.5 - d, 0.5 + d};
    Matrix omega(Y.dim());
    for (double c : nodes) {
        const double s = c * h;
        const Matrix w2 = omega2(s);
        const Matrix theta2 = ad_series(w2, Y, 3);
        const Matrix a = A(t + s, theta2);
        omega += (0.5 * h) * (a - 0.5 * commutator(w2, a));
    }
    return conjugate(omega, Y);
}

Matrix integrate_nonlinear(const NonlinearProblem& prob, int order, double t0, double tf, std::int64_t n_steps) {
    if (!(tf > t0) || n_steps < 1) throw Error("invalid-argument", "integrate_nonlinear needs tf > t0, n_steps >= 1");
    const double h = (tf - t0) / static_cast<double>(n_steps);
    Matrix Y = prob.Y0;
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        Y = order == 0 ? nl_magnus_step(prob, t, h, Y) : isospectral_step(prob, order, t, h, Y);
    }
    return Y;
}

std::array<double, 3> symmetric_eigenvalues3(const Matrix& y) {
    if (y.dim() != 3) throw Error("dimension-mismatch", "symmetric_eigenvalues3 needs a 3x3 matrix");
    auto r = [&](int i, int j) { return 0.5 * (y(i, j).real() + y(j, i).real()); };
    const double p1 = r(0, 1) * r(0, 1) + r(0, 2) * r(0, 2) + r(1, 2) * r(1, 2);
    const double q = (r(0, 0) + r(1, 1) + r(2, 2)) / 3.0;
    std::array<double, 3> ev{};
    if (p1 == 0.0) {
        ev = {r(0, 0), r(1, 1), r(2, 2)};
        std::sort(ev.begin(), ev.end());
        return ev;
    }
    const double p2 = (r(0, 0) - q) * (r(0, 0) - q) + (r(1, 1) - q) * (r(1, 1) - q) + (r(2, 2) - q) * (r(2, 2) - q) +
                      2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    // B = (Y - qI)/p, det(B)/2 = cos(3 phi)
    double b[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (r(i, j) - (i == j ? q : 0.0)) / p;
    const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double rr = std::clamp(0.5 * detb, -1.0, 1.0);
    const double phi = std::acos(rr) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    ev = {e3, e2, e1};
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace magnus
