#include "magnuskit/linalg.hpp"
#include "magnuskit/magnus.hpp"
#include "magnuskit/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace magnus;

TEST(Quadrature, GaussExactness) {
    for (int k = 1; k <= 3; ++k) {
        const auto r = QuadratureRule::gauss_legendre(k);
        EXPECT_TRUE(r.symmetric());
        for (int p = 0; p < 2 * k; ++p) {
            double s = 0.0;
            for (std::size_t j = 0; j < r.size(); ++j) s += r.weights[j] * std::pow(r.nodes[j], p);
            EXPECT_NEAR(s, 1.0 / (p + 1), 1e-15) << "k=" << k << " p=" << p;
        }
    }
}

TEST(Quadrature, NewtonCotesExactness) {
    for (int k : {3, 5}) {
        const auto r = QuadratureRule::newton_cotes(k);
        EXPECT_TRUE(r.symmetric());
        const int degree = k == 3 ? 3 : 5;
        for (int p = 0; p <= degree; ++p) {
            double s = 0.0;
            for (std::size_t j = 0; j < r.size(); ++j) s += r.weights[j] * std::pow(r.nodes[j], p);
            EXPECT_NEAR(s, 1.0 / (p + 1), 1e-15);
        }
    }
    EXPECT_THROW((void)QuadratureRule::newton_cotes(4), Error);
}

TEST(Quadrature, TransformGl2) {
    const auto t = QuadratureTransform::make(QuadratureRule::gauss_legendre(2), 2);
    EXPECT_NEAR(t.rq(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(t.rq(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(t.rq(1, 0), -std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(t.rq(1, 1), std::sqrt(3.0), 1e-14);
    try {
        (void)QuadratureTransform::make(QuadratureRule::gauss_legendre(2), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "moment-rank");
    }
}

TEST(Alphas, ExactForQuadraticCoefficients) {
    // A(t) = A0 + (t - h/2) A1 + (t - h/2)^2 A2 gives alpha_i = h^i a_{i-1}.
    const Matrix a0 = random_matrix(3, 1), a1 = random_matrix(3, 2), a2 = random_matrix(3, 3);
    const double h = 0.37;
    auto A = [&](double t) {
        const double u = t - 0.5 * h;
        return a0 + u * a1 + (u * u) * a2;
    };
    for (auto rule : {QuadratureRule::gauss_legendre(3), QuadratureRule::newton_cotes(5)}) {
        std::vector<Matrix> samples;
        for (double c : rule.nodes) samples.push_back(A(c * h));
        const auto g = collocation_alphas(samples, rule, 3, h);
        EXPECT_LT(max_abs(g.alphas[0] - h * a0), 1e-14) << rule.name;
        EXPECT_LT(max_abs(g.alphas[1] - (h * h) * a1), 1e-14) << rule.name;
        EXPECT_LT(max_abs(g.alphas[2] - (h * h * h) * a2), 1e-14) << rule.name;
    }
}

TEST(Alphas, Gl2Omega4MatchesClosedForm) {
    const Matrix a1 = random_matrix(3, 4), a2 = random_matrix(3, 5);
    const double h = 0.2;
    const auto rule = QuadratureRule::gauss_legendre(2);
    const auto g = collocation_alphas({a1, a2}, rule, 2, h);
    const Matrix want = (0.5 * h) * (a1 + a2) - (h * h * std::sqrt(3.0) / 12.0) * commutator(a1, a2);
    EXPECT_LT(max_abs(omega_truncated(g, 4) - want), 1e-15);
    EXPECT_THROW((void)omega_truncated(g, 6), Error);
    EXPECT_THROW((void)omega_truncated(g, 5), Error);
}

TEST(Alphas, Omega6LocalErrorIsSeventhOrder) {
    const auto prob = example1();
    const auto rule = QuadratureRule::gauss_legendre(3);
    auto local_error = [&](double h) {
        std::vector<Matrix> s;
        for (double c : rule.nodes) s.push_back(prob.A(0.2 + c * h));
        const Matrix y = expm(omega_truncated(collocation_alphas(s, rule, 3, h), 6));
        const Matrix exact = (*prob.exact)(0.2 + h) * solve_linear((*prob.exact)(0.2), Matrix::identity(2));
        return frobenius_norm(y - exact);
    };
    EXPECT_NEAR(std::log2(local_error(0.2) / local_error(0.1)), 7.0, 0.3);
}

TEST(Recurrence, BernoulliNumbers) {
    const auto& b = bernoulli_table();
    EXPECT_DOUBLE_EQ(b[0], 1.0);
    EXPECT_DOUBLE_EQ(b[1], -0.5);
    EXPECT_DOUBLE_EQ(b[2], 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(b[3], 0.0);
    EXPECT_DOUBLE_EQ(b[4], -1.0 / 30.0);
    EXPECT_DOUBLE_EQ(b[12], -691.0 / 2730.0);
}

TEST(Recurrence, CommutingFamilyHasOnlyFirstTerm) {
    const Matrix m = random_matrix(3, 8);
    auto A = [&](double t) { return std::cos(t) * m; };
    const auto t = magnus_terms(A, 0.0, 1.0, 4);
    EXPECT_LT(max_abs(t.terms[0] - std::sin(1.0) * m), 1e-12);
    for (int k = 1; k < 4; ++k) EXPECT_LT(max_abs(t.terms[k]), 1e-12);
}

TEST(Recurrence, SecondTermForLinearCoefficient) {
    // A = A0 + t A1 on [0, h]: Omega_2 = -(h^3 / 12) [A0, A1].
    const Matrix a0 = random_matrix(3, 9), a1 = random_matrix(3, 10);
    const double h = 0.8;
    const auto t = magnus_terms([&](double s) { return a0 + s * a1; }, 0.0, h, 2);
    EXPECT_LT(max_abs(t.terms[1] + (h * h * h / 12.0) * commutator(a0, a1)), 1e-12);
}

TEST(Recurrence, RandomPiecewisePairMatchesBch) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix x1 = random_matrix(3, 2 * seed, 0.2), x2 = random_matrix(3, 2 * seed + 1, 0.2);
        const auto prob = bch_pair(x1, x2);
        const auto t = magnus_terms(prob.A, 0.0, 2.0, 4, 256, prob.breakpoints);
        const auto b = bch_terms(x1, x2, 4);
        for (int k = 0; k < 4; ++k) EXPECT_LT(max_abs(t.terms[k] - b[k]), 1e-8) << "seed " << seed << " term " << k;
    }
}

TEST(Recurrence, BchSeriesApproximatesProduct) {
    // Truncating after four terms leaves an O(s^5) remainder.
    const Matrix x1 = random_matrix(3, 21), x2 = random_matrix(3, 22);
    auto remainder = [&](double s) {
        Matrix sum(3);
        for (const auto& term : bch_terms(s * x1, s * x2, 4)) sum += term;
        return frobenius_norm(expm(sum) - expm(s * x1) * expm(s * x2));
    };
    EXPECT_NEAR(std::log2(remainder(0.04) / remainder(0.02)), 5.0, 0.3);
}

TEST(Recurrence, ExampleTwoClosedForm) {
    const double alpha = 0.5, beta = 0.3;
    const auto prob = bch_example2(alpha, beta);
    const auto t = magnus_terms(prob.A, 0.0, 2.0, 6, 256, prob.breakpoints);
    const Matrix x1 = pauli(3);
    const Matrix x2 = {{0.0, 1.0}, {0.0, 0.0}};
    const auto& b = bernoulli_table();
    EXPECT_LT(max_abs(t.terms[0] - (alpha * x1 + beta * x2)), 1e-8);
    double fact = 1.0;
    for (int n = 2; n <= 6; ++n) {
        fact *= n - 1;
        const double c = ((n - 1) % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, n - 1) * b[n - 1] / fact *
                         std::pow(alpha, n - 1) * beta;
        EXPECT_LT(max_abs(t.terms[n - 1] - c * x2), 1e-8) << "n = " << n;
    }
}

TEST(Recurrence, ThirdTermMatchesNestedIntegral) {
    // Omega_3 = 1/6 int int int ([A1,[A2,A3]] + [A3,[A2,A1]]) over t1 > t2 > t3, by brute-force midpoint sums.
    const Matrix a0 = random_matrix(2, 30, 0.5, true), a1 = random_matrix(2, 31, 0.5, true);
    auto A = [&](double t) { return a0 + (t * t) * a1; };
    const double T = 1.0;
    const int m = 60;
    const double d = T / m;
    std::vector<Matrix> s;
    for (int i = 0; i < m; ++i) s.push_back(A((i + 0.5) * d));
    Matrix o3(2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j)
            for (int k = 0; k <= j; ++k) {
                double w = d * d * d;
                if (i == j) w *= 0.5;
                if (j == k) w *= 0.5;
                if (i == j && j == k) w = d * d * d / 6.0;
                o3 += (w / 6.0) * (commutator(s[i], commutator(s[j], s[k])) + commutator(s[k], commutator(s[j], s[i])));
            }
    const auto t = magnus_terms(A, 0.0, T, 3, 512);
    EXPECT_LT(max_abs(t.terms[2] - o3), 2e-3 * max_abs(o3) + 1e-6);
}

TEST(Recurrence, WilcoxProductIsFourthOrder) {
    const auto prob = example1();
    auto err = [&](double tf) {
        const auto w = wilcox_terms(magnus_terms(prob.A, 0.0, tf, 4, 256));
        const Matrix y = expm(w[0]) * expm(w[1]) * expm(w[2]) * expm(w[3]);
        return frobenius_norm(y - (*prob.exact)(tf));
    };
    // Local error at least O(h^5); this problem's h^5 term happens to vanish.
    EXPECT_GT(std::log2(err(0.2) / err(0.1)), 4.6);
}

TEST(Convergence, MarginOnRosenZenerEqualsGamma) {
    const auto prob = rosen_zener(1.7, 0.3);
    EXPECT_NEAR(convergence_margin(prob.A, -25.0, 25.0, 4096), 1.7, 1e-6);
}

TEST(Convergence, ExampleOneTailRatioCrossesOne) {
    const auto prob = example1(3.0);
    auto ratio = [&](double t) {
        const auto m = magnus_terms(prob.A, 0.0, t, 6, 512);
        return frobenius_norm(m.terms[5]) / frobenius_norm(m.terms[3]);
    };
    const double edge = 2.0 * std::numbers::pi / 3.0;
    EXPECT_LT(ratio(edge - 0.1), 1.0);
    EXPECT_GT(ratio(edge + 0.1), 1.0);
}
