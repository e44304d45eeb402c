#pragma once

#include "magnuskit/eigensolve.hpp"
#include "magnuskit/nonlinear.hpp"
#include "magnuskit/splitting.hpp"
#include "magnuskit/steppers.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace magnus {

using ProblemParams = std::map<std::string, double>;
using AnyProblem = std::variant<LinearProblem, SeparableFlow, NonlinearProblem, SLProblem>;

/// rect-step, rosen-zener, example1, bch-pair, skew-a, skew-b, duffing, double-bracket, sl-well, sl-harmonic.
[[nodiscard]] const std::vector<std::string>& problem_catalog();

/// Unknown names or parameters throw an error listing what is accepted.
[[nodiscard]] AnyProblem make_problem(std::string_view name, const ProblemParams& params = {});

/// Interaction-picture two-level system driven by a rectangular pulse, scaled time u in [0, 1].
[[nodiscard]] LinearProblem rect_step(double gamma, double xi);
/// Rosen-Zener sech pulse on [s0, sf].
[[nodiscard]] LinearProblem rosen_zener(double gamma, double xi, double s0 = -25.0, double sf = 25.0);
/// A(t) = [[2, t], [0, -1]].
[[nodiscard]] LinearProblem example1(double tf = 1.0);
/// A = X2 on [0, 1], X1 on (1, 2]; Y(2) = e^{X1} e^{X2}.
[[nodiscard]] LinearProblem bch_pair(const Matrix& x1, const Matrix& x2);
/// bch_pair with X1 = alpha sigma_3, X2 = beta [[0, 1], [0, 0]].
[[nodiscard]] LinearProblem bch_example2(double alpha, double beta);
/// N x N skew-symmetric test matrices on [0, 10]; variant 'a' or 'b'.
[[nodiscard]] LinearProblem skew_problem(char variant, std::size_t n = 10, double tf = 10.0);
[[nodiscard]] SeparableFlow duffing(double eps = 0.05, double delta = 0.25, double omega = 1.0, double q0 = 1.75,
                                    double p0 = 0.0);
/// Y' = [[Y, N], Y] with N = diag(1..n) and a seeded random symmetric Y0.
[[nodiscard]] NonlinearProblem double_bracket(std::size_t n = 3, std::uint64_t seed = 42);
/// V(x) = curvature * x^2 on (0, pi); curvature 0 gives lambda_n = n^2.
[[nodiscard]] SLProblem sl_well(int N = 200, int order = 4, double curvature = 0.0);
[[nodiscard]] SLProblem sl_harmonic(int N = 400, int order = 4, double half_width = 5.0);

/// Exact transition probabilities and their first-order Magnus approximations.
[[nodiscard]] double rect_step_probability(double gamma, double xi);
[[nodiscard]] double rect_step_first_order(double gamma, double xi);
[[nodiscard]] double rosen_zener_probability(double gamma, double xi);
[[nodiscard]] double rosen_zener_first_order(double gamma, double xi);

/// |<+|U|->|^2.
[[nodiscard]] double transition_probability(const Matrix& U);

/// Exact propagator U(t, t0); throws "no-oracle" when unavailable.
[[nodiscard]] Matrix exact_solution(const LinearProblem& prob, double t);
/// Exact final-time scalar observable; throws "no-oracle" when unavailable.
[[nodiscard]] double exact_probability(const LinearProblem& prob);
/// Sixth-order Magnus (GL) run with the given step count, used where no closed form exists.
[[nodiscard]] Matrix reference_solution(const LinearProblem& prob, double tf, std::int64_t steps);

/// Portable seeded generator: uniform entries in [-scale, scale].
[[nodiscard]] Matrix random_matrix(std::size_t n, std::uint64_t seed, double scale = 1.0, bool complex_entries = false);
[[nodiscard]] Matrix random_skew_symmetric(std::size_t n, std::uint64_t seed, double scale = 1.0);
[[nodiscard]] Matrix random_symmetric(std::size_t n, std::uint64_t seed, double scale = 1.0);

}  // namespace magnus
