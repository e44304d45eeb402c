#pragma once

#include "magnuskit/quadrature.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace magnus {

/// Flat phase-space vector (q..., p...).
using State = std::vector<double>;

/// Exact flow over duration h of the frozen field x' = sum_j w_j f(t_j, x).
using SubFlow = std::function<void(std::span<const double> times, std::span<const double> weights, double h, State&)>;

/// x' = f1(t, x) + f2(t, x), each part exactly solvable with time frozen.
struct SeparableFlow {
    std::string label;
    std::size_t dim = 0;
    /// f1: drift (q advanced by p).
    SubFlow flow1;
    /// f2: kick (p advanced by the force).
    SubFlow flow2;
    bool hamiltonian = false;
    State x0;
    double t0 = 0.0;
    double tf = 1.0;
    /// High-accuracy solution at t, if available.
    std::function<State(double)> reference;
};

struct SplitCoefficients {
    enum class Layout { alternating, bab_magnus };

    std::string name;
    Layout layout = Layout::alternating;
    int order = 2;
    /// Alternating layout: kick a_i then drift b_i, i = 1..m.
    std::vector<double> a, b;
    /// BAB layout: kicks (b_i1, b_i2), i = 1..m+1, interleaved with drifts (a_i1, a_i2), i = 1..m.
    std::vector<std::array<double, 2>> a2, b2;

    [[nodiscard]] static SplitCoefficients leapfrog();
    [[nodiscard]] static SplitCoefficients suzuki5_4();
    [[nodiscard]] static SplitCoefficients gs6_4();
    [[nodiscard]] static SplitCoefficients mn6_4();
    /// Accepts S2, SU54, GS64, MN64 (case sensitive, dashes optional).
    [[nodiscard]] static SplitCoefficients by_name(const std::string& name);

    /// Kicks per step once the last kick of a step is merged with the first of the next.
    [[nodiscard]] int force_evaluations_per_step() const;
};

[[nodiscard]] State split_step(const SplitCoefficients& c, const SeparableFlow& f, double t, double h, State x);

[[nodiscard]] State magnus_split_step(const SplitCoefficients& c, const SeparableFlow& f, const QuadratureRule& rule,
                                      double t, double h, State x);

struct SplitRun {
    State x;
    std::int64_t steps = 0;
    std::int64_t force_evaluations = 0;
    std::int64_t wall_ns = 0;
};

/// Fixed-step driver; GL2 samples for the BAB layout. Adjacent kicks across steps are merged.
[[nodiscard]] SplitRun integrate_split(const SplitCoefficients& c, const SeparableFlow& f, double t0, double tf,
                                       std::int64_t n_steps);

}  // namespace magnus
