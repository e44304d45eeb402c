#pragma once

#include "magnuskit/magnus.hpp"
#include "magnuskit/matrix.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magnus {

/// Y' = A(t) Y with Y(t0) = I.
struct LinearProblem {
    std::string label;
    std::size_t dim = 0;
    CoefficientMap A;
    StructureTag structure;
    /// Fundamental solution U(t, t0).
    std::optional<CoefficientMap> exact;
    double t0 = 0.0;
    double tf = 1.0;
    /// Jump locations of a piecewise-smooth A.
    std::vector<double> breakpoints;
    /// Scalar observable of the final propagator (transition probability) and its exact value.
    std::function<double(const Matrix&)> observable;
    std::optional<double> exact_observable;

    /// Spot-checks the structure tag against A; throws on violation.
    void validate() const;
};

enum class Family { magnus, cf, fer, cayley, rk_explicit, rk_implicit };
enum class QuadKind { gl, nc };
enum class ExpEngine { pade_exact, pade_lie, closed_form };

struct MethodSpec {
    std::string label;
    Family family = Family::magnus;
    int order = 4;
    QuadKind quad = QuadKind::gl;
    ExpEngine engine = ExpEngine::pade_exact;
    /// psi_{2m} degree when engine == pade_lie.
    int pade_m = 0;
    /// Order-4 Simpson variant using the single commutator [A1, A3].
    bool nc_alt = false;
    /// Explicit Euler (order 1 RK).
    bool euler = false;
};

/// Labels: M2, M4GL, M4NC, M4NC2, M6GL (M6), M6NC, CF4, SF4, SF6, CAY4, CAY6, RK4, RK6,
/// GL-RK4, GL-RK6, E1, MP<p>[<2m>]. A ":closed" suffix selects the closed-form 2x2 exponential.
[[nodiscard]] MethodSpec parse_method(std::string_view label);

struct ButcherTableau {
    std::string name;
    std::vector<double> c;
    std::vector<double> b;
    std::vector<std::vector<double>> a;
    bool explicit_method = true;
    int order = 0;

    [[nodiscard]] static ButcherTableau euler();
    [[nodiscard]] static ButcherTableau rk4();
    [[nodiscard]] static ButcherTableau rk6();
    [[nodiscard]] static ButcherTableau gauss_legendre4();
    [[nodiscard]] static ButcherTableau gauss_legendre6();
};

[[nodiscard]] const ButcherTableau& tableau_for(const MethodSpec& spec);

struct StepCounters {
    std::int64_t a_evaluations = 0;
    std::int64_t exponentials = 0;
    std::int64_t commutators = 0;
};

struct RunStats {
    std::int64_t steps = 0;
    std::int64_t a_evaluations = 0;
    std::int64_t exponentials = 0;
    std::int64_t commutators = 0;
    Matrix Y{1};
    std::int64_t wall_ns = 0;
};

/// Single steps; h may be negative (time reversal). Counters are optional.
[[nodiscard]] Matrix magnus_step(const MethodSpec& spec, const LinearProblem& prob, double t, double h,
                                 const Matrix& Y, StepCounters* counters = nullptr);
[[nodiscard]] Matrix cf4_step(const LinearProblem& prob, double t, double h, const Matrix& Y,
                              StepCounters* counters = nullptr);
[[nodiscard]] Matrix fer_step(int order, const LinearProblem& prob, double t, double h, const Matrix& Y,
                              StepCounters* counters = nullptr);
[[nodiscard]] Matrix cayley_step(int order, const LinearProblem& prob, double t, double h, const Matrix& Y,
                                 StepCounters* counters = nullptr);
[[nodiscard]] Matrix rk_step(const ButcherTableau& tab, const LinearProblem& prob, double t, double h,
                             const Matrix& Y, StepCounters* counters = nullptr);

/// Dispatches on spec.family.
[[nodiscard]] Matrix step(const MethodSpec& spec, const LinearProblem& prob, double t, double h, const Matrix& Y,
                          StepCounters* counters = nullptr);

/// Cayley polynomial C^[p](Omega) approximating 2 tanh(Omega/2).
[[nodiscard]] Matrix cayley_polynomial(const Matrix& omega, int order);

/// Whether the method may be applied to the problem's structure tag.
[[nodiscard]] bool method_applicable(const MethodSpec& spec, const LinearProblem& prob, std::string* reason = nullptr);

/// Fixed-step driver from Y(t0) = I; endpoint samples are reused across steps.
[[nodiscard]] RunStats integrate(const MethodSpec& spec, const LinearProblem& prob, double t0, double tf,
                                 std::int64_t n_steps);

/// Least-squares slope of log(error) against log(h); error measured against prob.exact or `reference`.
[[nodiscard]] double empirical_order(const MethodSpec& spec, const LinearProblem& prob, double t0, double tf,
                                     const std::vector<std::int64_t>& steps_list,
                                     const std::optional<Matrix>& reference = std::nullopt);

/// Least-squares slope of y against x.
[[nodiscard]] double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace magnus
