#include "magnuskit/quadrature.hpp"

#include "magnuskit/linalg.hpp"

#include <cmath>

namespace magnus {

QuadratureRule QuadratureRule::gauss_legendre(int k) {
    QuadratureRule r;
    r.flavor = QuadFlavor::gauss_legendre;
    r.order = 2 * k;
    switch (k) {
        case 1:
            r.nodes = {0.5};
            r.weights = {1.0};
            r.name = "gl1";
            break;
        case 2: {
            const double d = std::sqrt(3.0) / 6.0;
            r.nodes = {0.5 - d, 0.5 + d};
            r.weights = {0.5, 0.5};
            r.name = "gl2";
            break;
        }
        case 3: {
            const double d = std::sqrt(15.0) / 10.0;
            r.nodes = {0.5 - d, 0.5, 0.5 + d};
            r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
            r.name = "gl3";
            break;
        }
        default: throw Error("invalid-argument", "Gauss-Legendre rule supports k = 1, 2, 3");
    }
    return r;
}

QuadratureRule QuadratureRule::newton_cotes(int k) {
    QuadratureRule r;
    r.flavor = QuadFlavor::newton_cotes;
    switch (k) {
        case 3:
            r.nodes = {0.0, 0.5, 1.0};
            r.weights = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
            r.order = 4;
            r.name = "nc3";
            break;
        case 5:
            r.nodes = {0.0, 0.25, 0.5, 0.75, 1.0};
            r.weights = {7.0 / 90.0, 32.0 / 90.0, 12.0 / 90.0, 32.0 / 90.0, 7.0 / 90.0};
            r.order = 6;
            r.name = "nc5";
            break;
        default: throw Error("invalid-argument", "Newton-Cotes rule supports k = 3, 5");
    }
    return r;
}

bool QuadratureRule::symmetric(double tol) const {
    const std::size_t k = nodes.size();
    for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(nodes[j] + nodes[k - 1 - j] - 1.0) > tol) return false;
        if (std::abs(weights[j] - weights[k - 1 - j]) > tol) return false;
    }
    return true;
}

QuadratureTransform QuadratureTransform::make(const QuadratureRule& rule, int s) {
    const std::size_t k = rule.size();
    if (s < 1 || static_cast<std::size_t>(s) > k)
        throw Error("moment-rank", "graded level s exceeds the number of quadrature samples");
    QuadratureTransform t;
    t.s = s;
    t.k = k;
    const auto us = static_cast<std::size_t>(s);
    t.Q.assign(us * k, 0.0);
    for (std::size_t i = 0; i < us; ++i)
        for (std::size_t j = 0; j < k; ++j)
            t.Q[i * k + j] = rule.weights[j] * std::pow(rule.nodes[j] - 0.5, static_cast<double>(i));

    // T_ij with i = 0..s-1 and j = 1..s.
    t.T.assign(us * us, 0.0);
    std::vector<cplx> tc(us * us), rc(us * us, 0.0);
    for (std::size_t i = 0; i < us; ++i) {
        rc[i * us + i] = 1.0;
        for (std::size_t jj = 0; jj < us; ++jj) {
            const int e = static_cast<int>(i + jj + 1);
            const double v = (1.0 - ((e % 2 == 0) ? 1.0 : -1.0)) / (e * std::ldexp(1.0, e));
            t.T[i * us + jj] = v;
            tc[i * us + jj] = v;
        }
    }
    solve_linear_inplace(tc, us, rc, us);
    t.R.resize(us * us);
    for (std::size_t i = 0; i < us * us; ++i) t.R[i] = rc[i].real();

    t.RQ.assign(us * k, 0.0);
    for (std::size_t i = 0; i < us; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < us; ++l) acc += t.R[i * us + l] * t.Q[l * k + j];
            t.RQ[i * k + j] = acc;
        }
    return t;
}

}  // namespace magnus
