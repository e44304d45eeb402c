#include "magnuskit/linalg.hpp"
#include "magnuskit/problems.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace magnus;

TEST(Catalog, NamesAndErrors) {
    const auto& c = problem_catalog();
    for (const char* n : {"rect-step", "rosen-zener", "example1", "bch-pair", "skew-a", "skew-b", "duffing",
                          "double-bracket", "sl-well"})
        EXPECT_NE(std::find(c.begin(), c.end(), n), c.end()) << n;
    for (const auto& n : c) EXPECT_NO_THROW((void)make_problem(n)) << n;
    try {
        (void)make_problem("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "unknown-problem");
        EXPECT_NE(std::string(e.what()).find("rosen-zener"), std::string::npos);
    }
    try {
        (void)make_problem("rect-step", {{"gama", 1.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "unknown-parameter");
        EXPECT_NE(std::string(e.what()).find("gama"), std::string::npos);
    }
}

TEST(TwoLevel, RectangularStepFormula) {
    const double g = 1.5, xi = 0.3;
    const double w = std::sqrt(g * g + xi * xi / 4.0);
    EXPECT_NEAR(rect_step_probability(g, xi), 4 * g * g / (4 * g * g + xi * xi) * std::pow(std::sin(w), 2), 1e-15);
    EXPECT_NEAR(rect_step_probability(1.2, 0.0), std::pow(std::sin(1.2), 2), 1e-15);
    const auto prob = rect_step(g, xi);
    const auto r = integrate(parse_method("M6GL"), prob, 0.0, 1.0, 64);
    EXPECT_NEAR(transition_probability(r.Y), rect_step_probability(g, xi), 1e-10);
    EXPECT_LT(frobenius_norm(r.Y - exact_solution(prob, 1.0)), 1e-10);
}

TEST(TwoLevel, FirstOrderMagnusClosedForms) {
    const double g = 1.5, xi = 2.0;
    EXPECT_NEAR(rect_step_first_order(g, xi), std::pow(std::sin(2.0 * g / xi * std::sin(xi / 2.0)), 2), 1e-15);
    const auto rect = rect_step(g, xi);
    const auto o1 = magnus_terms(rect.A, 0.0, 1.0, 1, 512);
    EXPECT_NEAR(transition_probability(expm(o1.terms[0])), rect_step_first_order(g, xi), 1e-10);
    const auto rz = rosen_zener(g, 0.3);
    const auto r1 = magnus_terms(rz.A, -25.0, 25.0, 1, 8192);
    EXPECT_NEAR(transition_probability(expm(r1.terms[0])), rosen_zener_first_order(g, 0.3), 1e-8);
}

TEST(TwoLevel, RosenZenerExact) {
    EXPECT_NEAR(rosen_zener_probability(1.5, 0.3),
                std::pow(std::sin(1.5), 2) / std::pow(std::cosh(0.15 * std::numbers::pi), 2), 1e-15);
    const auto prob = rosen_zener(1.5, 0.3);
    EXPECT_NO_THROW(prob.validate());
    EXPECT_EQ(prob.structure.kind, StructureTag::Kind::skew_hermitian);
    const auto r = integrate(parse_method("M6GL"), prob, -25.0, 25.0, 2000);
    EXPECT_NEAR(prob.observable(r.Y), *prob.exact_observable, 1e-9);
    EXPECT_THROW((void)rosen_zener(1.0, 0.3, -5.0, 25.0), Error);
}

TEST(ExampleOne, ExactSolution) {
    const auto prob = example1(2.0);
    for (double t : {0.3, 1.0, 1.7}) {
        const Matrix y = exact_solution(prob, t);
        EXPECT_NEAR(y(0, 1).real(), std::exp(2 * t) / 9.0 - (1.0 / 9.0 + t / 3.0) * std::exp(-t), 1e-14);
        EXPECT_NEAR(y(0, 0).real(), std::exp(2 * t), 1e-13);
    }
}

TEST(Skew, Oracles) {
    for (char v : {'a', 'b'}) {
        const auto prob = skew_problem(v, 10, 10.0);
        EXPECT_NO_THROW(prob.validate());
        EXPECT_FALSE(prob.exact.has_value());
        try {
            (void)exact_solution(prob, 1.0);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), "no-oracle");
        }
        for (double t : {0.0, 3.3, 10.0}) EXPECT_LT(skew_symmetric_defect(prob.A(t)), 1e-14);
    }
    // The sixth-order reference converges: doubling the step count changes it only at roundoff.
    const auto prob = skew_problem('b', 10, 2.0);
    const Matrix coarse = reference_solution(prob, 2.0, 20);
    const Matrix fine = reference_solution(prob, 2.0, 640);
    const Matrix finer = reference_solution(prob, 2.0, 1280);
    EXPECT_GT(frobenius_norm(coarse - finer), 1e-10);
    EXPECT_LT(frobenius_norm(fine - finer), 1e-12);
}

TEST(Random, DeterministicAndStructured) {
    EXPECT_EQ(random_matrix(4, 7).entries(), random_matrix(4, 7).entries());
    EXPECT_GT(frobenius_norm(random_matrix(4, 7) - random_matrix(4, 8)), 0.1);
    EXPECT_LE(max_abs(random_matrix(5, 3, 0.2)), 0.2);
    EXPECT_LT(skew_symmetric_defect(random_skew_symmetric(5, 1)), 1e-15);
    const Matrix s = random_symmetric(5, 2);
    EXPECT_LT(frobenius_norm(s - s.transpose()), 1e-15);
    const Matrix c = random_matrix(3, 9, 1.0, true);
    EXPECT_NE(c(0, 0).imag(), 0.0);
}

TEST(Duffing, ReferenceIsConverged) {
    const auto f = duffing();
    EXPECT_NEAR(f.tf, 10.0 * std::numbers::pi, 1e-14);
    EXPECT_TRUE(f.hamiltonian);
    const State r = f.reference(f.tf);
    const auto long_run = integrate_split(SplitCoefficients::suzuki5_4(), f, f.t0, f.tf, 8000);
    EXPECT_LT(std::hypot(r[0] - long_run.x[0], r[1] - long_run.x[1]), 1e-10);
}

TEST(DoubleBracket, Setup) {
    const auto p = double_bracket(3, 42);
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.variant, NonlinearProblem::Variant::isospectral);
    const auto q = double_bracket(3, 42);
    EXPECT_EQ(p.Y0.entries(), q.Y0.entries());
}
