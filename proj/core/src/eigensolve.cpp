#include "magnuskit/eigensolve.hpp"

#include "magnuskit/linalg.hpp"
#include "magnuskit/magnus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magnus {

namespace {

double fd_step(double lambda) { return std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(lambda)); }

double phi(const SLProblem& p, double lambda) { return shoot(p, lambda).phi_b; }

double derivative(const SLProblem& p, double lambda) {
    const double d = fd_step(lambda);
    return (phi(p, lambda + d) - phi(p, lambda - d)) / (2.0 * d);
}

// Newton kept inside [lo, hi] where phi changes sign; falls back to bisection.
double bracketed_root(const SLProblem& p, double lo, double hi, double flo) {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = phi(p, x);
        if (f == 0.0) return x;
        if ((f < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        const double df = derivative(p, x);
        double next = (df != 0.0 && std::isfinite(df)) ? x - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double tol = 1e-13 * std::max(1.0, std::abs(x));
        if (std::abs(next - x) <= tol || hi - lo <= tol) return next;
        x = next;
    }
    return x;
}

}  // namespace

void SLProblem::validate() const {
    if (!V) throw Error("invalid-problem", "potential is empty");
    if (!(b > a)) throw Error("invalid-problem", "interval must satisfy b > a");
    if (N < 4) throw Error("invalid-problem", "N must be >= 4");
    if (order != 4 && order != 6) throw Error("order-not-supported", "shooting supports orders 4, 6");
}

ShootResult shoot(const SLProblem& prob, double lambda) {
    prob.validate();
    const QuadratureRule rule = QuadratureRule::gauss_legendre(prob.order / 2);
    const int s = prob.order / 2;
    const double h = (prob.b - prob.a) / prob.N;
    ShootResult r;
    r.transfer = Matrix::identity(2);
    std::vector<Matrix> samples(rule.size(), Matrix(2));
    for (int n = 0; n < prob.N; ++n) {
        const double x = prob.a + n * h;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            Matrix& m = samples[j];
            m(0, 1) = 1.0;
            m(1, 0) = prob.V(x + rule.nodes[j] * h) - lambda;
        }
        const auto g = collocation_alphas(samples, rule, s, h);
        r.transfer = closed_form_exp(ClosedForm::sl2, omega_truncated(g, prob.order)) * r.transfer;
    }
    r.phi_b = r.transfer(0, 1).real();
    return r;
}

double find_eigenvalue(const SLProblem& prob, double lambda_guess, double tol, int max_iter, int* iterations) {
    if (!(tol > 0.0) || max_iter < 1) throw Error("invalid-argument", "find_eigenvalue needs tol > 0, max_iter >= 1");
    double x = lambda_guess;
    for (int it = 1; it <= max_iter; ++it) {
        const double f = phi(prob, x);
        const double df = derivative(prob, x);
        if (!std::isfinite(df) || std::abs(df) <= std::numeric_limits<double>::min())
            throw Error("flat-mismatch", "phi_b is flat near lambda = " + std::to_string(x));
        const double dx = f / df;
        x -= dx;
        if (iterations) *iterations = it;
        if (std::abs(dx) <= tol * std::max(1.0, std::abs(x))) return x;
    }
    throw Error("no-convergence", "Newton stopped at lambda = " + std::to_string(x));
}

std::vector<double> scan_eigenvalues(const SLProblem& prob, double lambda_min, double lambda_max, double scan_step) {
    if (!(scan_step > 0.0)) throw Error("invalid-argument", "scan_step must be positive");
    prob.validate();
    const double lam = std::max(std::abs(lambda_min), std::abs(lambda_max));
    const double h = (prob.b - prob.a) / prob.N;
    if (lam > 0.0 && h > 0.8 * std::pow(lam, -0.25))
        throw Error("step-too-large", "h exceeds 0.8 * lambda_max^(-1/4); increase N");

    std::vector<double> found;
    double x0 = lambda_min;
    double f0 = phi(prob, x0);
    if (f0 == 0.0) found.push_back(x0);
    const auto n = static_cast<long>(std::ceil((lambda_max - lambda_min) / scan_step));
    for (long i = 1; i <= n; ++i) {
        const double x1 = std::min(lambda_max, lambda_min + static_cast<double>(i) * scan_step);
        const double f1 = phi(prob, x1);
        if (f1 == 0.0) {
            found.push_back(x1);
        } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
            found.push_back(bracketed_root(prob, x0, x1, f0));
        }
        x0 = x1;
        f0 = f1;
    }
    std::sort(found.begin(), found.end());
    std::vector<double> out;
    for (double v : found)
        if (out.empty() || std::abs(v - out.back()) > 1e-6 * (1.0 + std::abs(v))) out.push_back(v);
    return out;
}

}  // namespace magnus
