#include "magnuskit/steppers.hpp"

#include "magnuskit/linalg.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

namespace magnus {

namespace {

// A(t + c h) for one step, with per-step reuse of repeated nodes and, inside
// integrate, reuse of the previous step's right endpoint as this step's left one.
class Sampler {
public:
    Sampler(const LinearProblem& p, double t, double h, double t_next, StepCounters* counters,
            std::optional<Matrix>* carry)
        : p_(p), t_(t), h_(h), t_next_(t_next), counters_(counters), carry_(carry) {
        if (carry_ && carry_->has_value()) {
            left_ = std::move(*carry_);
            carry_->reset();
        }
    }

    Matrix operator()(double c) {
        for (const auto& [cc, m] : seen_)
            if (cc == c) return m;
        Matrix m = (c == 0.0 && left_) ? *left_ : fresh(c);
        if (c == 1.0 && carry_) *carry_ = m;
        seen_.emplace_back(c, m);
        return m;
    }

    std::vector<Matrix> samples(const QuadratureRule& rule) {
        std::vector<Matrix> out;
        out.reserve(rule.size());
        for (double c : rule.nodes) out.push_back((*this)(c));
        return out;
    }

    [[nodiscard]] double h() const { return h_; }
    [[nodiscard]] const LinearProblem& problem() const { return p_; }
    [[nodiscard]] StepCounters* counters() const { return counters_; }

private:
    Matrix fresh(double c) {
        if (counters_) ++counters_->a_evaluations;
        const double tt = (c == 0.0) ? t_ : (c == 1.0) ? t_next_ : t_ + c * h_;
        return p_.A(tt);
    }

    const LinearProblem& p_;
    double t_, h_, t_next_;
    StepCounters* counters_;
    std::optional<Matrix>* carry_;
    std::optional<Matrix> left_;
    std::vector<std::pair<double, Matrix>> seen_;
};

void count(StepCounters* c, int exps, int comms) {
    if (!c) return;
    c->exponentials += exps;
    c->commutators += comms;
}

Matrix exponential(const MethodSpec& spec, const LinearProblem& prob, const Matrix& omega, StepCounters* c) {
    count(c, 1, 0);
    switch (spec.engine) {
        case ExpEngine::pade_exact: return expm(omega);
        case ExpEngine::pade_lie: return pade_lie_map(omega, spec.pade_m);
        case ExpEngine::closed_form:
            return closed_form_exp(
                prob.structure.kind == StructureTag::Kind::skew_hermitian ? ClosedForm::su2 : ClosedForm::sl2, omega);
    }
    return expm(omega);
}

int commutators_for_order(int order) { return order == 6 ? 3 : order == 4 ? 1 : 0; }

Matrix magnus_omega(const MethodSpec& spec, Sampler& A, StepCounters* c) {
    const double h = A.h();
    if (spec.order == 2) return h * A(0.5);
    if (spec.order == 4 && spec.quad == QuadKind::nc && spec.nc_alt) {
        const auto s = A.samples(QuadratureRule::newton_cotes(3));
        count(c, 0, 1);
        return (h / 6.0) * (s[0] + 4.0 * s[1] + s[2]) - (h * h / 12.0) * commutator(s[0], s[2]);
    }
    QuadratureRule rule = (spec.order == 4) ? (spec.quad == QuadKind::gl ? QuadratureRule::gauss_legendre(2)
                                                                         : QuadratureRule::newton_cotes(3))
                                            : (spec.quad == QuadKind::gl ? QuadratureRule::gauss_legendre(3)
                                                                         : QuadratureRule::newton_cotes(5));
    const int s = spec.order / 2;
    const auto alphas = collocation_alphas(A.samples(rule), rule, s, h);
    count(c, 0, commutators_for_order(spec.order));
    return omega_truncated(alphas, spec.order);
}

Matrix magnus_impl(const MethodSpec& spec, Sampler& A, const Matrix& Y) {
    const Matrix omega = magnus_omega(spec, A, A.counters());
    return exponential(spec, A.problem(), omega, A.counters()) * Y;
}

Matrix cf4_impl(Sampler& A, const Matrix& Y) {
    const auto s = A.samples(QuadratureRule::gauss_legendre(2));
    const double r3 = std::sqrt(3.0);
    const double p = (3.0 + 2.0 * r3) / 12.0, q = (3.0 - 2.0 * r3) / 12.0;
    const double h = A.h();
    count(A.counters(), 2, 0);
    const Matrix e1 = expm(h * (p * s[0] + q * s[1]));
    const Matrix e2 = expm(h * (q * s[0] + p * s[1]));
    return e2 * (e1 * Y);
}

Matrix fer_impl(int order, Sampler& A, const Matrix& Y) {
    if (order != 4 && order != 6) throw Error("order-not-supported", "symmetric Fer supports orders 4, 6");
    const QuadratureRule rule = QuadratureRule::gauss_legendre(order / 2);
    const auto g = collocation_alphas(A.samples(rule), rule, order / 2, A.h());
    const auto& a = g.alphas;
    Matrix s2 = (-1.0 / 12.0) * commutator(a[0], a[1]);
    if (order == 6) {
        const Matrix s1 = commutator(a[0], a[1]);
        const Matrix r1 = (1.0 / 120.0) * commutator(a[0], -4.0 * a[2] + 3.0 * s1);
        s2 = (1.0 / 240.0) * commutator(-20.0 * a[0] - a[2] + s1, a[1] + r1);
    }
    count(A.counters(), 2, commutators_for_order(order));
    const Matrix e1 = expm(0.5 * a[0]);
    return e1 * (expm(s2) * (e1 * Y));
}

Matrix cayley_impl(int order, Sampler& A, const Matrix& Y) {
    if (order != 4 && order != 6) throw Error("order-not-supported", "Cayley methods support orders 4, 6");
    MethodSpec spec;
    spec.order = order;
    const Matrix omega = magnus_omega(spec, A, A.counters());
    const Matrix C = cayley_polynomial(omega, order);
    const Matrix I = Matrix::identity(Y.dim());
    count(A.counters(), 1, 0);
    return solve_linear(I - 0.5 * C, (I + 0.5 * C) * Y);
}

Matrix rk_impl(const ButcherTableau& tab, Sampler& A, const Matrix& Y) {
    const std::size_t s = tab.c.size();
    const std::size_t d = Y.dim();
    const double h = A.h();
    std::vector<Matrix> As;
    As.reserve(s);
    for (double c : tab.c) As.push_back(A(c));

    std::vector<Matrix> K;
    K.reserve(s);
    if (tab.explicit_method) {
        for (std::size_t i = 0; i < s; ++i) {
            Matrix Yi = Y;
            for (std::size_t j = 0; j < i; ++j)
                if (tab.a[i][j] != 0.0) Yi += (h * tab.a[i][j]) * K[j];
            K.push_back(As[i] * Yi);
        }
    } else {
        // (I - h [a_ij A_j]) [Y_1; ...; Y_s] = [Y; ...; Y]
        const std::size_t n = s * d;
        std::vector<cplx> M(n * n, 0.0), rhs(n * d);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t q = 0; q < d; ++q)
                        M[(i * d + r) * n + j * d + q] = -h * tab.a[i][j] * As[j](r, q) + (i == j && r == q ? 1.0 : 0.0);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t q = 0; q < d; ++q) rhs[(i * d + r) * d + q] = Y(r, q);
        solve_linear_inplace(std::move(M), n, rhs, d);
        for (std::size_t i = 0; i < s; ++i) {
            Matrix Yi(d, std::vector<cplx>(rhs.begin() + static_cast<std::ptrdiff_t>(i * d * d),
                                           rhs.begin() + static_cast<std::ptrdiff_t>((i + 1) * d * d)));
            K.push_back(As[i] * Yi);
        }
    }
    Matrix out = Y;
    for (std::size_t i = 0; i < s; ++i)
        if (tab.b[i] != 0.0) out += (h * tab.b[i]) * K[i];
    return out;
}

Matrix dispatch(const MethodSpec& spec, Sampler& A, const Matrix& Y) {
    switch (spec.family) {
        case Family::magnus: return magnus_impl(spec, A, Y);
        case Family::cf: return cf4_impl(A, Y);
        case Family::fer: return fer_impl(spec.order, A, Y);
        case Family::cayley: return cayley_impl(spec.order, A, Y);
        case Family::rk_explicit:
        case Family::rk_implicit: return rk_impl(tableau_for(spec), A, Y);
    }
    throw Error("invalid-method");
}

void check_step(double h) {
    if (h == 0.0 || !std::isfinite(h)) throw Error("invalid-step", "step size must be finite and nonzero");
}

}  // namespace

void LinearProblem::validate() const {
    if (!A) throw Error("invalid-problem", "coefficient map is empty");
    if (structure.kind != StructureTag::Kind::skew_hermitian &&
        structure.kind != StructureTag::Kind::skew_symmetric)
        return;
    for (int k = 0; k <= 4; ++k) {
        const double t = t0 + (tf - t0) * (0.1 + 0.2 * k);
        const Matrix a = A(t);
        const double nrm = frobenius_norm(a);
        const double defect = structure.kind == StructureTag::Kind::skew_hermitian ? skew_hermitian_defect(a)
                                                                                   : skew_symmetric_defect(a);
        if (defect > 1e-12 * nrm) throw Error("structure-violation", label + ": A(t) does not match its tag");
    }
}

MethodSpec parse_method(std::string_view label) {
    MethodSpec s;
    s.label = std::string(label);
    std::string_view core = label;
    bool closed = false;
    if (const auto pos = core.find(":closed"); pos != std::string_view::npos && pos + 7 == core.size()) {
        core = core.substr(0, pos);
        closed = true;
    }
    auto magnus = [&](int order, QuadKind q, bool alt = false) {
        s.family = Family::magnus;
        s.order = order;
        s.quad = q;
        s.nc_alt = alt;
    };
    if (core == "M2") magnus(2, QuadKind::gl);
    else if (core == "M4GL" || core == "M4") magnus(4, QuadKind::gl);
    else if (core == "M4NC") magnus(4, QuadKind::nc);
    else if (core == "M4NC2") magnus(4, QuadKind::nc, true);
    else if (core == "M6GL" || core == "M6") magnus(6, QuadKind::gl);
    else if (core == "M6NC") magnus(6, QuadKind::nc);
    else if (core == "CF4") { s.family = Family::cf; s.order = 4; }
    else if (core == "SF4" || core == "SF6") { s.family = Family::fer; s.order = core[2] - '0'; }
    else if (core == "CAY4" || core == "CAY6") { s.family = Family::cayley; s.order = core[3] - '0'; }
    else if (core == "RK4" || core == "RK6") { s.family = Family::rk_explicit; s.order = core[2] - '0'; }
    else if (core == "E1") { s.family = Family::rk_explicit; s.order = 1; s.euler = true; }
    else if (core == "GL-RK4" || core == "GLRK4") { s.family = Family::rk_implicit; s.order = 4; }
    else if (core == "GL-RK6" || core == "GLRK6") { s.family = Family::rk_implicit; s.order = 6; }
    else if (core.size() >= 3 && core.substr(0, 2) == "MP") {
        // MP<p> uses psi_p; MP<p><q> uses psi_q on the order-p Magnus exponent.
        const std::string_view digits = core.substr(2);
        const int p = digits[0] - '0';
        int q = p;
        if (digits.size() == 2) q = digits[1] - '0';
        if ((p != 2 && p != 4 && p != 6) || q < 2 || q > 8 || q % 2 != 0 || digits.size() > 2)
            throw Error("unknown-method", std::string(label));
        magnus(p, QuadKind::gl);
        s.engine = ExpEngine::pade_lie;
        s.pade_m = q / 2;
    } else {
        throw Error("unknown-method", std::string(label));
    }
    if (closed) {
        if (s.family != Family::magnus || s.engine != ExpEngine::pade_exact)
            throw Error("unknown-method", std::string(label) + " (closed form applies to Magnus methods)");
        s.engine = ExpEngine::closed_form;
    }
    return s;
}

ButcherTableau ButcherTableau::euler() {
    return {"E1", {0.0}, {1.0}, {{0.0}}, true, 1};
}

ButcherTableau ButcherTableau::rk4() {
    return {"RK4",
            {0.0, 0.5, 0.5, 1.0},
            {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
            {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1.0, 0}},
            true,
            4};
}

ButcherTableau ButcherTableau::rk6() {
    const double r5 = std::sqrt(5.0);
    const double cm = (5.0 - r5) / 10.0, cp = (5.0 + r5) / 10.0;
    ButcherTableau t;
    t.name = "RK6";
    t.c = {0.0, cm, cp, cm, cp, cm, 1.0};
    t.b = {1.0 / 12.0, 0.0, 0.0, 0.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0};
    t.a = {
        {0, 0, 0, 0, 0, 0, 0},
        {cm, 0, 0, 0, 0, 0, 0},
        {-r5 / 10.0, (5.0 + 2.0 * r5) / 10.0, 0, 0, 0, 0, 0},
        {(-15.0 + 7.0 * r5) / 20.0, (-1.0 + r5) / 4.0, (15.0 - 7.0 * r5) / 10.0, 0, 0, 0, 0},
        {(5.0 - r5) / 60.0, 0.0, 1.0 / 6.0, (15.0 + 7.0 * r5) / 60.0, 0, 0, 0},
        {(5.0 + r5) / 60.0, 0.0, (9.0 - 5.0 * r5) / 12.0, 1.0 / 6.0, (-5.0 + 3.0 * r5) / 10.0, 0, 0},
        {1.0 / 6.0, 0.0, (-55.0 + 25.0 * r5) / 12.0, (-25.0 - 7.0 * r5) / 12.0, 5.0 - 2.0 * r5, (5.0 + r5) / 2.0, 0},
    };
    t.explicit_method = true;
    t.order = 6;
    return t;
}

ButcherTableau ButcherTableau::gauss_legendre4() {
    const double r3 = std::sqrt(3.0);
    return {"GL-RK4",
            {(3.0 - r3) / 6.0, (3.0 + r3) / 6.0},
            {0.5, 0.5},
            {{0.25, (3.0 - 2.0 * r3) / 12.0}, {(3.0 + 2.0 * r3) / 12.0, 0.25}},
            false,
            4};
}

ButcherTableau ButcherTableau::gauss_legendre6() {
    const double r = std::sqrt(15.0);
    return {"GL-RK6",
            {(5.0 - r) / 10.0, 0.5, (5.0 + r) / 10.0},
            {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0},
            {{5.0 / 36.0, 2.0 / 9.0 - r / 15.0, 5.0 / 36.0 - r / 30.0},
             {5.0 / 36.0 + r / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r / 24.0},
             {5.0 / 36.0 + r / 30.0, 2.0 / 9.0 + r / 15.0, 5.0 / 36.0}},
            false,
            6};
}

const ButcherTableau& tableau_for(const MethodSpec& spec) {
    static const ButcherTableau e1 = ButcherTableau::euler();
    static const ButcherTableau rk4 = ButcherTableau::rk4();
    static const ButcherTableau rk6 = ButcherTableau::rk6();
    static const ButcherTableau gl4 = ButcherTableau::gauss_legendre4();
    static const ButcherTableau gl6 = ButcherTableau::gauss_legendre6();
    if (spec.family == Family::rk_explicit) {
        if (spec.euler) return e1;
        if (spec.order == 4) return rk4;
        if (spec.order == 6) return rk6;
    } else if (spec.family == Family::rk_implicit) {
        if (spec.order == 4) return gl4;
        if (spec.order == 6) return gl6;
    }
    throw Error("invalid-method", spec.label + " has no Butcher tableau");
}

Matrix cayley_polynomial(const Matrix& omega, int order) {
    const Matrix I = Matrix::identity(omega.dim());
    const Matrix o2 = omega * omega;
    if (order == 4) return omega * (I - (1.0 / 12.0) * o2);
    if (order == 6) return omega * (I - (1.0 / 12.0) * o2 * (I - 0.1 * o2));
    throw Error("order-not-supported", "Cayley polynomial supports orders 4, 6");
}

bool method_applicable(const MethodSpec& spec, const LinearProblem& prob, std::string* reason) {
    auto fail = [&](const char* why) {
        if (reason) *reason = why;
        return false;
    };
    const bool rational = spec.family == Family::cayley || spec.engine == ExpEngine::pade_lie;
    if (rational && prob.structure.kind == StructureTag::Kind::traceless)
        return fail("rational Lie maps do not preserve the special linear group");
    if (spec.engine == ExpEngine::closed_form) {
        if (prob.dim != 2) return fail("closed-form exponential needs a 2x2 problem");
        if (prob.structure.kind != StructureTag::Kind::skew_hermitian &&
            prob.structure.kind != StructureTag::Kind::traceless)
            return fail("closed-form exponential needs an su(2) or sl(2) problem");
    }
    return true;
}

Matrix magnus_step(const MethodSpec& spec, const LinearProblem& prob, double t, double h, const Matrix& Y,
                   StepCounters* counters) {
    check_step(h);
    if (spec.family != Family::magnus) throw Error("invalid-method", spec.label + " is not a Magnus method");
    Sampler A(prob, t, h, t + h, counters, nullptr);
    return magnus_impl(spec, A, Y);
}

Matrix cf4_step(const LinearProblem& prob, double t, double h, const Matrix& Y, StepCounters* counters) {
    check_step(h);
    Sampler A(prob, t, h, t + h, counters, nullptr);
    return cf4_impl(A, Y);
}

Matrix fer_step(int order, const LinearProblem& prob, double t, double h, const Matrix& Y, StepCounters* counters) {
    check_step(h);
    Sampler A(prob, t, h, t + h, counters, nullptr);
    return fer_impl(order, A, Y);
}

Matrix cayley_step(int order, const LinearProblem& prob, double t, double h, const Matrix& Y,
                   StepCounters* counters) {
    check_step(h);
    MethodSpec spec;
    spec.family = Family::cayley;
    spec.order = order;
    std::string why;
    if (!method_applicable(spec, prob, &why)) throw Error("structure-mismatch", why);
    Sampler A(prob, t, h, t + h, counters, nullptr);
    return cayley_impl(order, A, Y);
}

Matrix rk_step(const ButcherTableau& tab, const LinearProblem& prob, double t, double h, const Matrix& Y,
               StepCounters* counters) {
    check_step(h);
    Sampler A(prob, t, h, t + h, counters, nullptr);
    return rk_impl(tab, A, Y);
}

Matrix step(const MethodSpec& spec, const LinearProblem& prob, double t, double h, const Matrix& Y,
            StepCounters* counters) {
    check_step(h);
    std::string why;
    if (!method_applicable(spec, prob, &why)) throw Error("structure-mismatch", why);
    Sampler A(prob, t, h, t + h, counters, nullptr);
    return dispatch(spec, A, Y);
}

RunStats integrate(const MethodSpec& spec, const LinearProblem& prob, double t0, double tf, std::int64_t n_steps) {
    if (!(tf > t0)) throw Error("invalid-interval", "integrate needs tf > t0");
    if (n_steps < 1) throw Error("invalid-argument", "n_steps must be >= 1");
    std::string why;
    if (!method_applicable(spec, prob, &why)) throw Error("structure-mismatch", why);

    const auto start = std::chrono::steady_clock::now();
    const double h = (tf - t0) / static_cast<double>(n_steps);
    StepCounters counters;
    std::optional<Matrix> carry;
    Matrix Y = Matrix::identity(prob.dim);
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        const double t_next = (i + 1 == n_steps) ? tf : t0 + static_cast<double>(i + 1) * h;
        Sampler A(prob, t, h, t_next, &counters, &carry);
        Y = dispatch(spec, A, Y);
    }
    RunStats r;
    r.steps = n_steps;
    r.a_evaluations = counters.a_evaluations;
    r.exponentials = counters.exponentials;
    r.commutators = counters.commutators;
    r.Y = std::move(Y);
    r.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    return r;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double empirical_order(const MethodSpec& spec, const LinearProblem& prob, double t0, double tf,
                       const std::vector<std::int64_t>& steps_list, const std::optional<Matrix>& reference) {
    if (steps_list.size() < 3) throw Error("invalid-argument", "empirical_order needs at least three step counts");
    Matrix ref = Matrix::identity(prob.dim);
    if (reference) {
        ref = *reference;
    } else if (prob.exact && t0 == prob.t0) {
        ref = (*prob.exact)(tf);
    } else {
        throw Error("no-oracle", prob.label + " has no exact solution from t0");
    }
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, frobenius_norm(ref));
    std::vector<double> lx, ly;
    for (auto n : steps_list) {
        const auto r = integrate(spec, prob, t0, tf, n);
        const double err = frobenius_norm(r.Y - ref);
        if (err <= floor) throw Error("order-indeterminate", spec.label + " error is at roundoff level");
        lx.push_back(std::log((tf - t0) / static_cast<double>(n)));
        ly.push_back(std::log(err));
    }
    return fit_slope(lx, ly);
}

}  // namespace magnus
