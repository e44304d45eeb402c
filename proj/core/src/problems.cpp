#include "magnuskit/problems.hpp"

#include "magnuskit/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace magnus {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// Uniform in [-1, 1] from raw 64-bit output, identical on every platform.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : gen_(seed) {}
    double next() { return 2.0 * static_cast<double>(gen_() >> 11) * 0x1.0p-53 - 1.0; }

private:
    std::mt19937_64 gen_;
};

double param(const ProblemParams& p, const char* key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void check_keys(std::string_view name, const ProblemParams& p, std::set<std::string> allowed) {
    for (const auto& [k, v] : p) {
        if (allowed.count(k)) continue;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw Error("unknown-parameter",
                    "'" + k + "' for " + std::string(name) + " (accepted: " + (list.empty() ? "none" : list) + ")");
    }
}

// -i g (sigma_1 cos(w) - sigma_2 sin(w))
Matrix driven_coupling(double g, double w) {
    const cplx off = -kI * g * std::exp(cplx(0.0, w));  // (0,1) entry: -i g e^{i w}
    const cplx low = -kI * g * std::exp(cplx(0.0, -w));
    return Matrix{{0.0, off}, {low, 0.0}};
}

}  // namespace

const std::vector<std::string>& problem_catalog() {
    static const std::vector<std::string> names = {"rect-step", "rosen-zener", "example1",       "bch-pair",
                                                   "skew-a",    "skew-b",      "duffing",        "double-bracket",
                                                   "sl-well",   "sl-harmonic"};
    return names;
}

double transition_probability(const Matrix& U) { return std::norm(U(0, 1)); }

double rect_step_probability(double gamma, double xi) {
    const double w = std::sqrt(gamma * gamma + 0.25 * xi * xi);
    if (w == 0.0) return 0.0;
    const double s = std::sin(w);
    return 4.0 * gamma * gamma / (4.0 * gamma * gamma + xi * xi) * s * s;
}

double rect_step_first_order(double gamma, double xi) {
    const double arg = xi == 0.0 ? gamma : (2.0 * gamma / xi) * std::sin(0.5 * xi);
    const double s = std::sin(arg);
    return s * s;
}

double rosen_zener_probability(double gamma, double xi) {
    const double s = std::sin(gamma), c = std::cosh(0.5 * kPi * xi);
    return s * s / (c * c);
}

double rosen_zener_first_order(double gamma, double xi) {
    const double s = std::sin(gamma / std::cosh(0.5 * kPi * xi));
    return s * s;
}

LinearProblem rect_step(double gamma, double xi) {
    if (gamma < 0.0) throw Error("invalid-parameter", "gamma must be >= 0");
    LinearProblem p;
    p.label = "rect-step";
    p.dim = 2;
    p.A = [gamma, xi](double u) { return driven_coupling(gamma, xi * u); };
    p.structure.kind = StructureTag::Kind::skew_hermitian;
    p.exact = [gamma, xi](double u) {
        const Matrix phase = Matrix::diag({std::exp(cplx(0.0, 0.5 * xi * u)), std::exp(cplx(0.0, -0.5 * xi * u))});
        const Matrix gen = (-kI * u) * ((0.5 * xi) * pauli(3) + gamma * pauli(1));
        return phase * expm(gen);
    };
    p.t0 = 0.0;
    p.tf = 1.0;
    p.observable = transition_probability;
    p.exact_observable = rect_step_probability(gamma, xi);
    return p;
}

LinearProblem rosen_zener(double gamma, double xi, double s0, double sf) {
    if (gamma < 0.0) throw Error("invalid-parameter", "gamma must be >= 0");
    if (!(sf > s0) || std::min(-s0, sf) < 10.0)
        throw Error("invalid-parameter", "Rosen-Zener window must contain [-10, 10]");
    LinearProblem p;
    p.label = "rosen-zener";
    p.dim = 2;
    const double v0 = gamma / kPi;
    p.A = [v0, xi](double s) { return driven_coupling(v0 / std::cosh(s), xi * s); };
    p.structure.kind = StructureTag::Kind::skew_hermitian;
    p.t0 = s0;
    p.tf = sf;
    p.observable = transition_probability;
    p.exact_observable = rosen_zener_probability(gamma, xi);
    return p;
}

LinearProblem example1(double tf) {
    LinearProblem p;
    p.label = "example1";
    p.dim = 2;
    p.A = [](double t) { return Matrix{{2.0, t}, {0.0, -1.0}}; };
    p.exact = [](double t) {
        const double e2 = std::exp(2.0 * t), em = std::exp(-t);
        return Matrix{{e2, e2 / 9.0 - (1.0 / 9.0 + t / 3.0) * em}, {0.0, em}};
    };
    p.t0 = 0.0;
    p.tf = tf;
    return p;
}

LinearProblem bch_pair(const Matrix& x1, const Matrix& x2) {
    if (x1.dim() != x2.dim()) throw Error("dimension-mismatch");
    LinearProblem p;
    p.label = "bch-pair";
    p.dim = x1.dim();
    p.A = [x1, x2](double t) { return t <= 1.0 ? x2 : x1; };
    p.exact = [x1, x2](double t) {
        if (t <= 1.0) return expm(t * x2);
        return expm((t - 1.0) * x1) * expm(x2);
    };
    p.t0 = 0.0;
    p.tf = 2.0;
    p.breakpoints = {1.0};
    return p;
}

LinearProblem bch_example2(double alpha, double beta) {
    Matrix x2(2);
    x2(0, 1) = beta;
    auto p = bch_pair(alpha * pauli(3), x2);
    p.structure.kind = StructureTag::Kind::traceless;
    return p;
}

LinearProblem skew_problem(char variant, std::size_t n, double tf) {
    if (variant != 'a' && variant != 'b') throw Error("invalid-parameter", "skew variant must be 'a' or 'b'");
    if (n < 2) throw Error("invalid-parameter", "skew problems need n >= 2");
    LinearProblem p;
    p.label = variant == 'a' ? "skew-a" : "skew-b";
    p.dim = n;
    p.A = [variant, n](double t) {
        Matrix a(n);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j) {
                const double fi = static_cast<double>(i), fj = static_cast<double>(j);
                const double v = variant == 'a' ? std::sin(t * (fj * fj - fi * fi))
                                                : std::log(1.0 + t * (fj - fi) / (fj + fi));
                a(i - 1, j - 1) = v;
                a(j - 1, i - 1) = -v;
            }
        return a;
    };
    p.structure.kind = StructureTag::Kind::skew_symmetric;
    p.t0 = 0.0;
    p.tf = tf;
    return p;
}

SeparableFlow duffing(double eps, double delta, double omega, double q0, double p0) {
    SeparableFlow f;
    f.label = "duffing";
    f.dim = 2;
    f.hamiltonian = true;
    f.x0 = {q0, p0};
    f.t0 = 0.0;
    f.tf = 10.0 * kPi;
    f.flow1 = [eps](std::span<const double> ts, std::span<const double> ws, double h, State& x) {
        double c = 0.0;
        for (std::size_t j = 0; j < ts.size(); ++j) c += ws[j] * std::exp(-eps * ts[j]);
        x[0] += h * c * x[1];
    };
    f.flow2 = [eps, delta, omega](std::span<const double> ts, std::span<const double> ws, double h, State& x) {
        double c = 0.0, forcing = 0.0;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const double e = std::exp(eps * ts[j]);
            c += ws[j] * e;
            forcing += ws[j] * e * delta * std::cos(omega * ts[j]);
        }
        const double q = x[0];
        x[1] += h * (c * (q - q * q * q) + forcing);
    };
    f.reference = [eps, delta, omega, q0, p0](double t) {
        auto rhs = [&](double s, const std::array<double, 2>& y) {
            return std::array<double, 2>{std::exp(-eps * s) * y[1],
                                         std::exp(eps * s) * (y[0] - y[0] * y[0] * y[0] + delta * std::cos(omega * s))};
        };
        const long n = std::max(1L, std::lround(std::abs(t) * 4096.0));
        const double h = t / static_cast<double>(n);
        std::array<double, 2> y{q0, p0};
        for (long i = 0; i < n; ++i) {
            const double s = static_cast<double>(i) * h;
            const auto k1 = rhs(s, y);
            const auto k2 = rhs(s + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
            const auto k3 = rhs(s + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
            const auto k4 = rhs(s + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
            for (int k = 0; k < 2; ++k) y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
        return State{y[0], y[1]};
    };
    return f;
}

NonlinearProblem double_bracket(std::size_t n, std::uint64_t seed) {
    std::vector<cplx> d;
    for (std::size_t i = 1; i <= n; ++i) d.emplace_back(static_cast<double>(i));
    const Matrix N = Matrix::diag(d);
    NonlinearProblem p;
    p.label = "double-bracket";
    p.dim = n;
    p.A = [N](double, const Matrix& Y) { return commutator(Y, N); };
    p.variant = NonlinearProblem::Variant::isospectral;
    p.Y0 = random_symmetric(n, seed);
    p.structure.kind = StructureTag::Kind::skew_symmetric;
    p.t0 = 0.0;
    p.tf = 1.0;
    return p;
}

SLProblem sl_well(int N, int order, double curvature) {
    SLProblem p;
    p.label = "sl-well";
    p.V = [curvature](double x) { return curvature * x * x; };
    p.a = 0.0;
    p.b = kPi;
    p.N = N;
    p.order = order;
    return p;
}

SLProblem sl_harmonic(int N, int order, double half_width) {
    SLProblem p;
    p.label = "sl-harmonic";
    p.V = [](double x) { return x * x; };
    p.a = -half_width;
    p.b = half_width;
    p.N = N;
    p.order = order;
    return p;
}

AnyProblem make_problem(std::string_view name, const ProblemParams& params) {
    auto seed = [&] { return static_cast<std::uint64_t>(param(params, "seed", 42.0)); };
    if (name == "rect-step") {
        check_keys(name, params, {"gamma", "xi"});
        return rect_step(param(params, "gamma", 1.5), param(params, "xi", 0.3));
    }
    if (name == "rosen-zener") {
        check_keys(name, params, {"gamma", "xi", "s0", "sf"});
        return rosen_zener(param(params, "gamma", 1.5), param(params, "xi", 0.3), param(params, "s0", -25.0),
                           param(params, "sf", 25.0));
    }
    if (name == "example1") {
        check_keys(name, params, {"tf"});
        return example1(param(params, "tf", 1.0));
    }
    if (name == "bch-pair") {
        check_keys(name, params, {"alpha", "beta", "random", "n", "scale", "seed"});
        if (param(params, "random", 0.0) != 0.0) {
            const auto n = static_cast<std::size_t>(param(params, "n", 3.0));
            const double scale = param(params, "scale", 0.2);
            return bch_pair(random_matrix(n, seed(), scale), random_matrix(n, seed() + 1, scale));
        }
        return bch_example2(param(params, "alpha", 0.5), param(params, "beta", 0.3));
    }
    if (name == "skew-a" || name == "skew-b") {
        check_keys(name, params, {"n", "tf"});
        return skew_problem(name.back(), static_cast<std::size_t>(param(params, "n", 10.0)), param(params, "tf", 10.0));
    }
    if (name == "duffing") {
        check_keys(name, params, {"eps", "delta", "omega", "q0", "p0"});
        return duffing(param(params, "eps", 0.05), param(params, "delta", 0.25), param(params, "omega", 1.0),
                       param(params, "q0", 1.75), param(params, "p0", 0.0));
    }
    if (name == "double-bracket") {
        check_keys(name, params, {"n", "seed"});
        return double_bracket(static_cast<std::size_t>(param(params, "n", 3.0)), seed());
    }
    if (name == "sl-well") {
        check_keys(name, params, {"N", "order", "curvature"});
        return sl_well(static_cast<int>(param(params, "N", 200.0)), static_cast<int>(param(params, "order", 4.0)),
                       param(params, "curvature", 0.0));
    }
    if (name == "sl-harmonic") {
        check_keys(name, params, {"N", "order", "half_width"});
        return sl_harmonic(static_cast<int>(param(params, "N", 400.0)), static_cast<int>(param(params, "order", 4.0)),
                           param(params, "half_width", 5.0));
    }
    std::string list;
    for (const auto& n : problem_catalog()) list += (list.empty() ? "" : ", ") + n;
    throw Error("unknown-problem", "'" + std::string(name) + "' (catalog: " + list + ")");
}

Matrix exact_solution(const LinearProblem& prob, double t) {
    if (!prob.exact) throw Error("no-oracle", prob.label + " has no exact solution");
    return (*prob.exact)(t);
}

double exact_probability(const LinearProblem& prob) {
    if (!prob.exact_observable) throw Error("no-oracle", prob.label + " has no exact observable");
    return *prob.exact_observable;
}

Matrix reference_solution(const LinearProblem& prob, double tf, std::int64_t steps) {
    return integrate(parse_method("M6GL"), prob, prob.t0, tf, steps).Y;
}

Matrix random_matrix(std::size_t n, std::uint64_t seed, double scale, bool complex_entries) {
    PortableRng rng(seed);
    Matrix m(n);
    for (auto& x : m.entries()) {
        const double re = rng.next();
        const double im = complex_entries ? rng.next() : 0.0;
        x = scale * cplx(re, im);
    }
    return m;
}

Matrix random_skew_symmetric(std::size_t n, std::uint64_t seed, double scale) {
    const Matrix m = random_matrix(n, seed, scale);
    return 0.5 * (m - m.transpose());
}

Matrix random_symmetric(std::size_t n, std::uint64_t seed, double scale) {
    const Matrix m = random_matrix(n, seed, scale);
    return 0.5 * (m + m.transpose());
}

}  // namespace magnus
