#include "magnuskit/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace magnus;

TEST(Eigensolve, FlatWellFromGuesses) {
    const auto p = sl_well();
    for (int n = 1; n <= 10; ++n) {
        int iters = 0;
        const double lam = find_eigenvalue(p, n * n + 0.3, 1e-12, 50, &iters);
        EXPECT_NEAR(lam, n * n, 1e-6 * n * n);
        EXPECT_LE(iters, 10);
    }
}

TEST(Eigensolve, ScanFindsAllInWindow) {
    const auto p = sl_well(200, 4);
    const auto v = scan_eigenvalues(p, 0.5, 100.5, 0.5);
    ASSERT_EQ(v.size(), 10u);
    for (int n = 1; n <= 10; ++n) EXPECT_NEAR(v[n - 1], n * n, 1e-6 * n * n);
}

TEST(Eigensolve, TransferMatrixIsUnimodular) {
    const auto p = sl_well(100, 4, 1.0);
    const auto r = shoot(p, 7.3);
    const cplx det = r.transfer(0, 0) * r.transfer(1, 1) - r.transfer(0, 1) * r.transfer(1, 0);
    EXPECT_LT(std::abs(det - 1.0), 1e-12);
}

TEST(Eigensolve, OrderFourConvergenceInN) {
    // V = x^2 on (0, pi): halving h divides the eigenvalue error by about 2^4.
    const double ref = find_eigenvalue(sl_well(1600, 6, 1.0), 4.3);
    const double e100 = std::abs(find_eigenvalue(sl_well(50, 4, 1.0), 4.3) - ref);
    const double e200 = std::abs(find_eigenvalue(sl_well(100, 4, 1.0), 4.3) - ref);
    const double s = std::log2(e100 / e200);
    EXPECT_GE(s, 3.7);
    EXPECT_LE(s, 5.0);
}

TEST(Eigensolve, HarmonicOscillator) {
    const auto p = sl_harmonic(400, 6, 6.0);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(find_eigenvalue(p, 2.0 * n - 1.0 + 0.2), 2.0 * n - 1.0, 1e-6);
}

TEST(Eigensolve, Errors) {
    try {
        (void)scan_eigenvalues(sl_well(20, 4), 0.5, 1e4, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "step-too-large");
    }
    SLProblem bad = sl_well();
    bad.order = 5;
    EXPECT_THROW((void)shoot(bad, 1.0), Error);
    bad = sl_well();
    bad.b = bad.a;
    EXPECT_THROW(bad.validate(), Error);
    EXPECT_THROW((void)find_eigenvalue(sl_well(), 1.0, 1e-12, 0), Error);
}
