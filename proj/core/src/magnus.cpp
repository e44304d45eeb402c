#include "magnuskit/magnus.hpp"

#include "magnuskit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magnus {

namespace {

// Cumulative integral on uniform nodes: Simpson at even nodes, a cubic
// four-point formula for the odd ones.
std::vector<Matrix> cumulative_integral(const std::vector<Matrix>& f, double d) {
    const std::size_t M = f.size() - 1;
    const std::size_t n = f.front().dim();
    std::vector<Matrix> F(M + 1, Matrix(n));
    for (std::size_t m = 0; m + 2 <= M; m += 2) F[m + 2] = F[m] + (d / 3.0) * (f[m] + 4.0 * f[m + 1] + f[m + 2]);
    for (std::size_t m = 1; m < M; m += 2) {
        if (m + 2 <= M)
            F[m] = F[m - 1] + (d / 24.0) * (9.0 * f[m - 1] + 19.0 * f[m] - 5.0 * f[m + 1] + f[m + 2]);
        else
            F[m] = F[m + 1] - (d / 24.0) * (9.0 * f[m + 1] + 19.0 * f[m] - 5.0 * f[m - 1] + f[m - 2]);
    }
    return F;
}

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace

const std::array<double, 13>& bernoulli_table() {
    static const std::array<double, 13> b = {
        1.0, -1.0 / 2.0, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0,
        -691.0 / 2730.0};
    return b;
}

GradedAlphas collocation_alphas(const std::vector<Matrix>& samples, const QuadratureRule& rule, int s, double h) {
    if (samples.size() != rule.size()) throw Error("sample-count", "samples do not match the quadrature rule");
    const std::size_t n = samples.front().dim();
    for (const auto& a : samples)
        if (a.dim() != n) throw Error("dimension-mismatch");
    const auto tr = QuadratureTransform::make(rule, s);

    GradedAlphas g;
    g.h = h;
    for (int i = 0; i < s; ++i) {
        Matrix alpha(n), moment(n);
        for (std::size_t j = 0; j < samples.size(); ++j) {
            const double rq = tr.rq(i, j);
            const double q = tr.Q[static_cast<std::size_t>(i) * tr.k + j];
            for (std::size_t e = 0; e < n * n; ++e) {
                alpha.entries()[e] += rq * samples[j].entries()[e];
                moment.entries()[e] += q * samples[j].entries()[e];
            }
        }
        g.alphas.push_back(h * alpha);
        g.moments.push_back(std::move(moment));
    }
    return g;
}

Matrix omega_truncated(const GradedAlphas& g, int order) {
    const auto& a = g.alphas;
    switch (order) {
        case 2:
            if (a.empty()) break;
            return a[0];
        case 4:
            if (a.size() < 2) break;
            return a[0] - (1.0 / 12.0) * commutator(a[0], a[1]);
        case 6: {
            if (a.size() < 3) break;
            const Matrix c1 = commutator(a[0], a[1]);
            const Matrix c2 = (-1.0 / 60.0) * commutator(a[0], 2.0 * a[2] + c1);
            return a[0] + (1.0 / 12.0) * a[2] +
                   (1.0 / 240.0) * commutator(-20.0 * a[0] - a[2] + c1, a[1] + c2);
        }
        default: throw Error("order-not-supported", "omega_truncated supports orders 2, 4, 6");
    }
    throw Error("insufficient-alphas", "not enough graded alphas for the requested order");
}

MagnusTerms magnus_terms(const CoefficientMap& A, double t0, double t, int n_max, int grid,
                         const std::vector<double>& breakpoints) {
    if (n_max < 1 || n_max > 6) throw Error("order-not-supported", "magnus_terms supports n_max in 1..6");
    if (grid < 8 || grid % 2 != 0) throw Error("invalid-argument", "grid must be even and >= 8");

    std::vector<double> edges{t0};
    std::vector<double> inner;
    for (double b : breakpoints)
        if ((b - t0) * (t - b) > 0.0) inner.push_back(b);
    std::sort(inner.begin(), inner.end(), [&](double x, double y) { return (x - y) * (t - t0) < 0.0; });
    edges.insert(edges.end(), inner.begin(), inner.end());
    edges.push_back(t);

    const auto& B = bernoulli_table();
    const std::size_t N = static_cast<std::size_t>(n_max);
    const std::size_t dim = A(t0).dim();

    MagnusTerms out;
    out.t0 = t0;
    out.t = t;
    std::vector<Matrix> omega_start(N, Matrix(dim));
    const double total = t - t0;

    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double a = edges[seg], b = edges[seg + 1];
        if (a == b) continue;
        int panels = static_cast<int>(std::lround(grid * (b - a) / total));
        panels = std::max(8, panels + (panels % 2));
        const auto M = static_cast<std::size_t>(panels);
        const double d = (b - a) / panels;

        std::vector<Matrix> Av;
        Av.reserve(M + 1);
        for (std::size_t m = 0; m <= M; ++m) {
            double x = (m == M) ? b : a + static_cast<double>(m) * d;
            const double nudge = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
            if (m == 0 && seg > 0) x += std::copysign(nudge, d);
            if (m == M && seg + 2 < edges.size()) x -= std::copysign(nudge, d);
            Av.push_back(A(x));
        }

        // omega[k][m] = Omega_{k+1} at node m; S[n][j][m] = S_{n}^{(j)} at node m.
        std::vector<std::vector<Matrix>> omega(N);
        std::vector<std::vector<std::vector<Matrix>>> S(N + 1);
        {
            auto F = cumulative_integral(Av, d);
            for (auto& f : F) f += omega_start[0];
            omega[0] = std::move(F);
        }
        for (std::size_t n = 2; n <= N; ++n) {
            S[n].assign(n, {});
            std::vector<Matrix> deriv(M + 1, Matrix(dim));
            for (std::size_t j = 1; j + 1 <= n; ++j) S[n][j].reserve(M + 1);
            for (std::size_t m = 0; m <= M; ++m) {
                S[n][1].push_back(commutator(omega[n - 2][m], Av[m]));
                for (std::size_t j = 2; j + 1 <= n; ++j) {
                    Matrix acc(dim);
                    for (std::size_t k = 1; k <= n - j; ++k) acc += commutator(omega[k - 1][m], S[n - k][j - 1][m]);
                    S[n][j].push_back(std::move(acc));
                }
                for (std::size_t j = 1; j + 1 <= n; ++j)
                    if (B[j] != 0.0) deriv[m] += (B[j] / factorial(static_cast<int>(j))) * S[n][j][m];
            }
            auto F = cumulative_integral(deriv, d);
            for (auto& f : F) f += omega_start[n - 1];
            omega[n - 1] = std::move(F);
        }
        for (std::size_t k = 0; k < N; ++k) omega_start[k] = omega[k][M];
    }
    out.terms = std::move(omega_start);
    return out;
}

double convergence_margin(const CoefficientMap& A, double t0, double t, int grid) {
    if (grid < 8) throw Error("invalid-argument", "grid must be >= 8");
    if (grid % 2 != 0) ++grid;
    const double d = (t - t0) / grid;
    double acc = 0.0;
    for (int m = 0; m <= grid; ++m) {
        const double w = (m == 0 || m == grid) ? 1.0 : (m % 2 ? 4.0 : 2.0);
        acc += w * spectral_norm(A(m == grid ? t : t0 + m * d));
    }
    return std::abs(acc * d / 3.0);
}

std::vector<Matrix> bch_terms(const Matrix& x1, const Matrix& x2, int order) {
    if (order < 1 || order > 4) throw Error("order-not-supported", "bch_terms supports orders 1..4");
    std::vector<Matrix> out;
    out.push_back(x1 + x2);
    if (order >= 2) {
        const Matrix c = commutator(x1, x2);
        out.push_back(0.5 * c);
        if (order >= 3) out.push_back((1.0 / 12.0) * (commutator(x1, c) - commutator(x2, c)));
        if (order >= 4) out.push_back((1.0 / 24.0) * commutator(x1, commutator(x2, commutator(x2, x1))));
    }
    return out;
}

std::vector<Matrix> wilcox_terms(const MagnusTerms& mt) {
    const auto& o = mt.terms;
    if (o.size() < 4) throw Error("insufficient-terms", "wilcox_terms needs four Magnus terms");
    std::vector<Matrix> w;
    w.push_back(o[0]);
    w.push_back(o[1]);
    w.push_back(o[2] - 0.5 * commutator(o[0], o[1]));
    w.push_back(o[3] - 0.5 * commutator(o[0], o[2]) + (1.0 / 6.0) * commutator(o[0], commutator(o[0], o[1])));
    return w;
}

}  // namespace magnus
