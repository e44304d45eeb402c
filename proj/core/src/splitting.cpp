#include "magnuskit/splitting.hpp"

#include "magnuskit/matrix.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace magnus {

namespace {

struct Op {
    bool kick = true;
    std::vector<double> times;
    std::vector<double> weights;
};

bool is_zero(const Op& op) {
    for (double w : op.weights)
        if (w != 0.0) return false;
    return true;
}

std::vector<Op> alternating_ops(const SplitCoefficients& c, double t, double h) {
    std::vector<Op> ops;
    double v = 0.0, w = 0.0;
    for (std::size_t i = 0; i < c.a.size(); ++i) {
        w += c.a[i];
        ops.push_back({true, {t + v * h}, {c.a[i]}});
        ops.push_back({false, {t + w * h}, {c.b[i]}});
        v += c.b[i];
    }
    return ops;
}

std::vector<Op> bab_ops(const SplitCoefficients& c, const QuadratureRule& rule, double t, double h) {
    const auto tr = QuadratureTransform::make(rule, 2);
    std::vector<double> times;
    for (double cj : rule.nodes) times.push_back(t + cj * h);
    auto blend = [&](const std::array<double, 2>& coef) {
        std::vector<double> w(rule.size());
        for (std::size_t j = 0; j < rule.size(); ++j) w[j] = coef[0] * tr.rq(0, j) + coef[1] * tr.rq(1, j);
        return w;
    };
    std::vector<Op> ops;
    for (std::size_t i = 0; i < c.b2.size(); ++i) {
        ops.push_back({true, times, blend(c.b2[i])});
        if (i < c.a2.size()) ops.push_back({false, times, blend(c.a2[i])});
    }
    return ops;
}

std::vector<Op> step_ops(const SplitCoefficients& c, double t, double h) {
    if (c.layout == SplitCoefficients::Layout::alternating) return alternating_ops(c, t, h);
    return bab_ops(c, QuadratureRule::gauss_legendre(2), t, h);
}

void apply(const SeparableFlow& f, const Op& op, double h, State& x) {
    if (is_zero(op)) return;
    (op.kick ? f.flow2 : f.flow1)(op.times, op.weights, h, x);
}

void check_layout(const SplitCoefficients& c, SplitCoefficients::Layout want) {
    if (c.layout != want) throw Error("layout-mismatch", c.name + " does not match the requested algorithm");
    if (want == SplitCoefficients::Layout::alternating && (c.a.size() != c.b.size() || c.a.empty()))
        throw Error("layout-mismatch", c.name + " needs equally many a and b coefficients");
    if (want == SplitCoefficients::Layout::bab_magnus && c.b2.size() != c.a2.size() + 1)
        throw Error("layout-mismatch", c.name + " needs one more kick than drifts");
}

}  // namespace

SplitCoefficients SplitCoefficients::leapfrog() {
    SplitCoefficients c;
    c.name = "S2";
    c.order = 2;
    c.a = {0.5, 0.5};
    c.b = {1.0, 0.0};
    return c;
}

SplitCoefficients SplitCoefficients::suzuki5_4() {
    const double g1 = 1.0 / (4.0 - std::cbrt(4.0));
    const double g3 = 1.0 - 4.0 * g1;
    const double g[7] = {0.0, g1, g1, g3, g1, g1, 0.0};
    SplitCoefficients c;
    c.name = "SU54";
    c.order = 4;
    for (int i = 1; i <= 6; ++i) {
        c.a.push_back(0.5 * (g[i] + g[i - 1]));
        c.b.push_back(g[i]);
    }
    return c;
}

namespace {

// Solves x1, x3 in w = (x1, 0, x3, ..., -x3, 0, -x1) so that sum w_m u_m = sum w_m v_m = 1/12.
// Both clocks come from the first-column coefficients; the printed closed forms for the second
// column do not satisfy these conditions and only reach order 2 on non-autonomous problems.
std::array<double, 2> second_column(const std::vector<double>& u, const std::vector<double>& v, std::size_t i3) {
    const std::size_t n = u.size();
    const double p11 = u[0] - u[n - 1], p13 = u[i3] - u[n - 1 - i3];
    const double p21 = v[0] - v[n - 1], p23 = v[i3] - v[n - 1 - i3];
    const double det = p11 * p23 - p13 * p21;
    const double r = 1.0 / 12.0;
    return {(r * p23 - p13 * r) / det, (p11 * r - r * p21) / det};
}

SplitCoefficients bab_from_seeds(std::string name, double b11, double a11, double b21, double a21, double b31) {
    const double a31 = 0.5 - (a11 + a21);
    const double b41 = 1.0 - 2.0 * (b11 + b21 + b31);
    const std::vector<double> a1 = {a11, a21, a31, a31, a21, a11};
    const std::vector<double> b1 = {b11, b21, b31, b41, b31, b21, b11};

    // Drift m sees the kick clock after kick m; kick m sees the drift clock before it.
    std::vector<double> kick_clock, drift_mid, drift_clock, kick_mid;
    double sa = 0.0, sb = 0.0;
    for (std::size_t m = 0; m < b1.size(); ++m) {
        drift_clock.push_back(sa);
        kick_mid.push_back(sb + 0.5 * b1[m]);
        sb += b1[m];
        if (m < a1.size()) {
            kick_clock.push_back(sb);
            drift_mid.push_back(sa + 0.5 * a1[m]);
            sa += a1[m];
        }
    }
    const auto [a12, a32] = second_column(kick_clock, drift_mid, 2);
    const auto [b12, b22] = second_column(drift_clock, kick_mid, 1);

    SplitCoefficients c;
    c.name = std::move(name);
    c.layout = SplitCoefficients::Layout::bab_magnus;
    c.order = 4;
    c.a2 = {{a11, a12}, {a21, 0.0}, {a31, a32}, {a31, -a32}, {a21, 0.0}, {a11, -a12}};
    c.b2 = {{b11, b12}, {b21, b22}, {b31, 0.0}, {b41, 0.0}, {b31, 0.0}, {b21, -b22}, {b11, -b12}};
    return c;
}

}  // namespace

SplitCoefficients SplitCoefficients::gs6_4() {
    return bab_from_seeds("GS64", 0.0792036964311957, 0.209515106613362, 0.353172906049774, -0.143851773179818,
                          -0.0420650803577195);
}

SplitCoefficients SplitCoefficients::mn6_4() {
    return bab_from_seeds("MN64", 0.0829844064174052, 0.245298957184271, 0.396309801498368, 0.604872665711080,
                          -0.0390563049223486);
}

SplitCoefficients SplitCoefficients::by_name(const std::string& name) {
    std::string key;
    for (char ch : name)
        if (ch != '-' && ch != '_') key.push_back(ch);
    if (key == "S2" || key == "leapfrog") return leapfrog();
    if (key == "SU54") return suzuki5_4();
    if (key == "GS64") return gs6_4();
    if (key == "MN64") return mn6_4();
    throw Error("unknown-method", name);
}

int SplitCoefficients::force_evaluations_per_step() const {
    if (layout == Layout::alternating) {
        int kicks = 0;
        for (double x : a)
            if (x != 0.0) ++kicks;
        const bool merge = !b.empty() && b.back() == 0.0 && a.front() != 0.0 && a.back() != 0.0;
        return merge ? kicks - 1 : kicks;
    }
    return static_cast<int>(b2.size()) - 1;
}

State split_step(const SplitCoefficients& c, const SeparableFlow& f, double t, double h, State x) {
    check_layout(c, SplitCoefficients::Layout::alternating);
    for (const auto& op : alternating_ops(c, t, h)) apply(f, op, h, x);
    return x;
}

State magnus_split_step(const SplitCoefficients& c, const SeparableFlow& f, const QuadratureRule& rule, double t,
                        double h, State x) {
    check_layout(c, SplitCoefficients::Layout::bab_magnus);
    if (rule.size() < 2) throw Error("layout-mismatch", "splitting-Magnus needs at least two time samples");
    for (const auto& op : bab_ops(c, rule, t, h)) apply(f, op, h, x);
    return x;
}

SplitRun integrate_split(const SplitCoefficients& c, const SeparableFlow& f, double t0, double tf,
                         std::int64_t n_steps) {
    if (!(tf > t0) || n_steps < 1) throw Error("invalid-argument", "integrate_split needs tf > t0 and n_steps >= 1");
    check_layout(c, c.layout);
    const auto start = std::chrono::steady_clock::now();
    const double h = (tf - t0) / static_cast<double>(n_steps);

    SplitRun run;
    run.x = f.x0;
    run.steps = n_steps;
    // A kick left pending at the end of a step is fused with the first kick of the next one.
    std::optional<Op> pending;
    auto flush = [&]() {
        if (pending && !is_zero(*pending)) {
            apply(f, *pending, h, run.x);
            ++run.force_evaluations;
        }
        pending.reset();
    };
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        for (auto& op : step_ops(c, t, h)) {
            if (is_zero(op)) continue;
            if (op.kick) {
                if (pending) {
                    pending->times.insert(pending->times.end(), op.times.begin(), op.times.end());
                    pending->weights.insert(pending->weights.end(), op.weights.begin(), op.weights.end());
                } else {
                    pending = std::move(op);
                }
            } else {
                flush();
                apply(f, op, h, run.x);
            }
        }
    }
    flush();
    run.wall_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace magnus
