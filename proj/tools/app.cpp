#include "app.hpp"

#include "magnuskit/linalg.hpp"
#include "magnuskit/problems.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

namespace magnus::app {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::set<std::string>& seeded_problems() {
    static const std::set<std::string> s = {"bch-pair", "double-bracket"};
    return s;
}

// Everything that is not a driver key becomes a problem parameter; make_problem rejects unknown ones.
ProblemParams problem_params(const Config& cfg, const std::string& problem, const std::set<std::string>& driver_keys) {
    ProblemParams p;
    for (const auto& [k, v] : cfg.entries) {
        if (driver_keys.count(k)) continue;
        if (k == "seed" && !seeded_problems().count(problem)) continue;
        p[k] = parse_number(v);
    }
    return p;
}

const std::string& required(const Config& cfg, const std::string& key) {
    const std::string* v = cfg.find(key);
    if (!v || v->empty()) throw Error("missing-key", "config needs '" + key + "'");
    return *v;
}

std::int64_t parse_count(const std::string& text) {
    const double x = parse_number(text);
    if (!(x >= 1.0) || x != std::floor(x) || x > 1e12) throw Error("invalid-config", "step count '" + text + "'");
    return static_cast<std::int64_t>(x);
}

std::vector<std::int64_t> step_counts(const Config& cfg, double t0, double tf) {
    std::vector<std::int64_t> out;
    const std::string* steps = cfg.find("steps");
    const std::string* hs = cfg.find("h");
    if (steps && hs) throw Error("invalid-config", "give either 'steps' or 'h', not both");
    if (steps) {
        for (const auto& s : split_list(*steps)) out.push_back(parse_count(s));
    } else if (hs) {
        for (const auto& s : split_list(*hs)) {
            const double h = parse_number(s);
            if (!(h > 0.0)) throw Error("invalid-config", "h must be positive: '" + s + "'");
            const double n = (tf - t0) / h;
            const double r = std::round(n);
            if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, r))
                throw Error("invalid-config", "h = " + s + " does not divide the interval");
            out.push_back(static_cast<std::int64_t>(r));
        }
    }
    if (out.empty()) throw Error("missing-key", "config needs a non-empty 'steps' or 'h' list");
    return out;
}

std::vector<std::string> method_list(const Config& cfg) {
    auto m = split_list(required(cfg, "methods"));
    if (m.empty()) throw Error("invalid-config", "'methods' is empty");
    return m;
}

std::pair<double, double> interval(const AnyProblem& p) {
    return std::visit(
        [](const auto& q) -> std::pair<double, double> {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, SLProblem>)
                return {q.a, q.b};
            else
                return {q.t0, q.tf};
        },
        p);
}

// exp of the integral of trace A (Liouville), GL3 panels between breakpoints.
cplx liouville_det(const LinearProblem& prob) {
    std::vector<double> cuts = {prob.t0};
    for (double b : prob.breakpoints)
        if (b > prob.t0 && b < prob.tf) cuts.push_back(b);
    cuts.push_back(prob.tf);
    const auto rule = QuadratureRule::gauss_legendre(3);
    cplx sum = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const int panels = 512;
        const double h = (cuts[s + 1] - cuts[s]) / panels;
        for (int i = 0; i < panels; ++i)
            for (std::size_t j = 0; j < rule.size(); ++j)
                sum += h * rule.weights[j] * prob.A(cuts[s] + (i + rule.nodes[j]) * h).trace();
    }
    return std::exp(sum);
}

struct Cell {
    std::size_t method = 0;
    std::int64_t steps = 0;
};

struct CellResult {
    std::optional<BenchmarkRecord> record;
    std::optional<SkippedRow> skip;
};

void run_cells(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < count; i = next++) body(i);
    };
    if (workers == 1) {
        loop();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
}

std::vector<CellResult> bench_linear(const LinearProblem& prob, const std::vector<std::string>& methods,
                                     const std::vector<std::int64_t>& steps, unsigned workers) {
    std::vector<MethodSpec> specs;
    for (const auto& m : methods) specs.push_back(parse_method(m));

    const bool probability = prob.observable && prob.exact_observable;
    std::optional<Matrix> target;
    if (!probability) {
        if (prob.exact) {
            target = (*prob.exact)(prob.tf);
        } else {
            const auto finest = *std::max_element(steps.begin(), steps.end());
            target = reference_solution(prob, prob.tf, 16 * finest);
        }
    }
    const cplx det_ref = liouville_det(prob);

    std::vector<Cell> cells;
    for (std::size_t m = 0; m < specs.size(); ++m)
        for (auto n : steps) cells.push_back({m, n});
    std::vector<CellResult> out(cells.size());
    run_cells(cells.size(), workers, [&](std::size_t i) {
        const auto& spec = specs[cells[i].method];
        std::string reason;
        if (!method_applicable(spec, prob, &reason)) {
            out[i].skip = SkippedRow{prob.label, spec.label, reason};
            return;
        }
        try {
            const RunStats r = integrate(spec, prob, prob.t0, prob.tf, cells[i].steps);
            BenchmarkRecord rec;
            rec.problem = prob.label;
            rec.method = spec.label;
            rec.steps = cells[i].steps;
            rec.h = (prob.tf - prob.t0) / static_cast<double>(cells[i].steps);
            rec.a_evaluations = r.a_evaluations;
            rec.exponentials = r.exponentials;
            rec.error = probability ? std::abs(prob.observable(r.Y) - *prob.exact_observable)
                                    : frobenius_norm(r.Y - *target);
            rec.unitarity_defect =
                prob.structure.kind == StructureTag::Kind::none ? kNaN : group_defect(r.Y, prob.structure);
            rec.det_defect = std::abs(determinant(r.Y) - det_ref);
            rec.wall_ns = r.wall_ns;
            out[i].record = rec;
        } catch (const Error& e) {
            out[i].skip = SkippedRow{prob.label, spec.label, e.what()};
        }
    });
    return out;
}

std::vector<CellResult> bench_split(const SeparableFlow& flow, const std::vector<std::string>& methods,
                                    const std::vector<std::int64_t>& steps, unsigned workers) {
    std::vector<SplitCoefficients> coeffs;
    for (const auto& m : methods) coeffs.push_back(SplitCoefficients::by_name(m));
    const State ref = flow.reference(flow.tf);
    std::vector<Cell> cells;
    for (std::size_t m = 0; m < coeffs.size(); ++m)
        for (auto n : steps) cells.push_back({m, n});
    std::vector<CellResult> out(cells.size());
    run_cells(cells.size(), workers, [&](std::size_t i) {
        const auto& c = coeffs[cells[i].method];
        const SplitRun r = integrate_split(c, flow, flow.t0, flow.tf, cells[i].steps);
        double err = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k) err += (r.x[k] - ref[k]) * (r.x[k] - ref[k]);
        BenchmarkRecord rec;
        rec.problem = flow.label;
        rec.method = c.name;
        rec.steps = r.steps;
        rec.h = (flow.tf - flow.t0) / static_cast<double>(r.steps);
        rec.a_evaluations = r.force_evaluations;
        rec.exponentials = 0;
        rec.error = std::sqrt(err);
        rec.unitarity_defect = kNaN;
        rec.det_defect = kNaN;
        rec.wall_ns = r.wall_ns;
        out[i].record = rec;
    });
    return out;
}

struct NonlinearMethod {
    std::string label;
    int order = 0;
    int evals_per_step = 0;
    int exps_per_step = 0;
};

NonlinearMethod nonlinear_method(const std::string& label) {
    if (label == "NLM2") return {label, 0, 2, 3};
    if (label == "ISO2") return {label, 2, 2, 2};
    if (label == "ISO3") return {label, 3, 5, 2};
    throw Error("unknown-method", "'" + label + "' (nonlinear methods: NLM2, ISO2, ISO3)");
}

std::vector<double> sorted_eigenvalues(const Matrix& y) {
    if (y.dim() == 3) {
        const auto e = symmetric_eigenvalues3(y);
        return {e.begin(), e.end()};
    }
    throw Error("dimension-mismatch", "eigenvalue drift is reported for 3x3 problems only");
}

std::vector<CellResult> bench_nonlinear(const NonlinearProblem& prob, const std::vector<std::string>& methods,
                                        const std::vector<std::int64_t>& steps, unsigned workers) {
    std::vector<NonlinearMethod> ms;
    for (const auto& m : methods) ms.push_back(nonlinear_method(m));
    const auto ev0 = sorted_eigenvalues(prob.Y0);
    std::vector<Cell> cells;
    for (std::size_t m = 0; m < ms.size(); ++m)
        for (auto n : steps) cells.push_back({m, n});
    std::vector<CellResult> out(cells.size());
    run_cells(cells.size(), workers, [&](std::size_t i) {
        const auto& m = ms[cells[i].method];
        const bool iso = prob.variant == NonlinearProblem::Variant::isospectral;
        if (iso != (m.order != 0)) {
            out[i].skip = SkippedRow{prob.label, m.label, iso ? "NLM2 integrates group flows, not isospectral ones"
                                                               : "ISO methods need an isospectral problem"};
            return;
        }
        const auto start = std::chrono::steady_clock::now();
        const Matrix y = integrate_nonlinear(prob, m.order, prob.t0, prob.tf, cells[i].steps);
        const auto ev = sorted_eigenvalues(y);
        double drift = 0.0;
        for (std::size_t k = 0; k < ev.size(); ++k) drift = std::max(drift, std::abs(ev[k] - ev0[k]));
        BenchmarkRecord rec;
        rec.problem = prob.label;
        rec.method = m.label;
        rec.steps = cells[i].steps;
        rec.h = (prob.tf - prob.t0) / static_cast<double>(cells[i].steps);
        rec.a_evaluations = m.evals_per_step * cells[i].steps;
        rec.exponentials = m.exps_per_step * cells[i].steps;
        rec.error = drift;
        rec.unitarity_defect = kNaN;
        rec.det_defect = std::abs(determinant(y) - determinant(prob.Y0));
        rec.wall_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
        out[i].record = rec;
    });
    return out;
}

enum class MethodKind { linear, split, nonlinear };

const char* kind_name(MethodKind k) {
    switch (k) {
        case MethodKind::linear: return "linear";
        case MethodKind::split: return "splitting";
        case MethodKind::nonlinear: return "nonlinear";
    }
    return "";
}

MethodKind method_kind(const std::string& label) {
    try {
        (void)parse_method(label);
        return MethodKind::linear;
    } catch (const Error&) {
    }
    try {
        (void)SplitCoefficients::by_name(label);
        return MethodKind::split;
    } catch (const Error&) {
    }
    try {
        (void)nonlinear_method(label);
        return MethodKind::nonlinear;
    } catch (const Error&) {
    }
    (void)parse_method(label);  // rethrows with the linear label list
    return MethodKind::linear;
}

}  // namespace

const std::string* Config::find(const std::string& key) const {
    const std::string* hit = nullptr;
    for (const auto& [k, v] : entries)
        if (k == key) hit = &v;
    return hit;
}

Config parse_config(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("invalid-config", "line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw Error("invalid-config", "line " + std::to_string(lineno) + ": empty key");
        cfg.entries.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io-error", "cannot open config '" + path + "'");
    return parse_config(in);
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    auto whole = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) throw Error("invalid-number", "'" + text + "'");
        return v;
    };
    if (const auto slash = t.find('/'); slash != std::string::npos) {
        const double den = whole(trim(t.substr(slash + 1)));
        if (den == 0.0) throw Error("invalid-number", "'" + text + "' divides by zero");
        return whole(trim(t.substr(0, slash))) / den;
    }
    return whole(t);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MAGNUSKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

BenchmarkResult run_benchmark(const Config& cfg, unsigned workers) {
    const auto problems = split_list(required(cfg, "problem"));
    const auto methods = method_list(cfg);
    const std::set<std::string> driver = {"problem", "methods", "steps", "h"};
    std::vector<MethodKind> kinds;
    for (const auto& m : methods) kinds.push_back(method_kind(m));

    BenchmarkResult result;
    for (const auto& name : problems) {
        const AnyProblem any = make_problem(name, problem_params(cfg, name, driver));
        const auto [t0, tf] = interval(any);
        const auto steps = step_counts(cfg, t0, tf);
        if (std::holds_alternative<SLProblem>(any))
            throw Error("invalid-config", name + " is an eigenvalue problem; use the eigen command");
        const MethodKind want = std::holds_alternative<LinearProblem>(any)    ? MethodKind::linear
                                : std::holds_alternative<SeparableFlow>(any) ? MethodKind::split
                                                                             : MethodKind::nonlinear;
        std::vector<std::string> usable;
        for (std::size_t i = 0; i < methods.size(); ++i) {
            if (kinds[i] == want)
                usable.push_back(methods[i]);
            else
                result.skipped.push_back({name, methods[i], std::string(kind_name(kinds[i])) + " method on a " +
                                                                kind_name(want) + " problem"});
        }
        if (usable.empty()) continue;
        std::vector<CellResult> cells;
        if (const auto* lin = std::get_if<LinearProblem>(&any))
            cells = bench_linear(*lin, usable, steps, workers);
        else if (const auto* flow = std::get_if<SeparableFlow>(&any))
            cells = bench_split(*flow, usable, steps, workers);
        else
            cells = bench_nonlinear(std::get<NonlinearProblem>(any), usable, steps, workers);
        for (auto& c : cells) {
            if (c.record) result.records.push_back(std::move(*c.record));
            if (c.skip) result.skipped.push_back(std::move(*c.skip));
        }
    }
    return result;
}

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
    out << "problem,method,h,steps,a_evals,exps,error,unitarity_defect,det_defect,wall_ns\n";
    for (const auto& r : records) {
        out << r.problem << ',' << r.method << ',' << fmt17(r.h) << ',' << r.steps << ',' << r.a_evaluations << ','
            << r.exponentials << ',' << fmt17(r.error) << ',' << fmt17(r.unitarity_defect) << ','
            << fmt17(r.det_defect) << ',' << r.wall_ns << '\n';
    }
}

EigenReport run_eigen(const Config& cfg) {
    const std::string& name = required(cfg, "problem");
    const std::set<std::string> driver = {"problem", "lambda_min", "lambda_max", "scan_step"};
    const AnyProblem any = make_problem(name, problem_params(cfg, name, driver));
    const auto* sl = std::get_if<SLProblem>(&any);
    if (!sl) throw Error("invalid-config", name + " is not an eigenvalue problem (use sl-well or sl-harmonic)");

    auto num = [&](const char* key, double fallback) {
        const std::string* v = cfg.find(key);
        return v ? parse_number(*v) : fallback;
    };
    const double lo = num("lambda_min", 0.5);
    const double hi = num("lambda_max", 100.0);
    const double step = num("scan_step", 0.25);
    if (!(hi > lo)) throw Error("invalid-config", "lambda_max must exceed lambda_min");

    // Analytic values: n^2 for the flat well; the harmonic window is wide enough for 2n - 1 at low n only.
    const auto* curvature = cfg.find("curvature");
    const bool flat = sl->label == "sl-well" && (!curvature || parse_number(*curvature) == 0.0);

    EigenReport rep;
    const auto lambdas = scan_eigenvalues(*sl, lo, hi, step);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        EigenRow row;
        row.n = static_cast<int>(i) + 1;
        row.lambda = lambdas[i];
        row.residual = std::abs(shoot(*sl, lambdas[i]).phi_b);
        if (flat) {
            const double k = std::round(std::sqrt(std::max(lambdas[i], 0.0)));
            row.n = static_cast<int>(k);
            row.exact = k * k;
            const double err = std::abs(lambdas[i] - k * k);
            // Points at roundoff level carry no information about the discretization law.
            if (lambdas[i] > 0.0 && err > 64.0 * std::numeric_limits<double>::epsilon() * lambdas[i]) {
                lx.push_back(std::log(lambdas[i]));
                ly.push_back(std::log(err));
            }
        }
        rep.rows.push_back(row);
    }
    if (lx.size() >= 3) rep.slope = fit_slope(lx, ly);
    return rep;
}

void write_eigen_csv(std::ostream& out, const EigenReport& report) {
    out << "n,lambda,exact,error,residual\n";
    for (const auto& r : report.rows) {
        out << r.n << ',' << fmt17(r.lambda) << ',' << (r.exact ? fmt17(*r.exact) : "nan") << ','
            << (r.exact ? fmt17(std::abs(r.lambda - *r.exact)) : "nan") << ',' << fmt17(r.residual) << '\n';
    }
}

std::vector<OrderRow> run_order(const Config& cfg) {
    const std::string& name = required(cfg, "problem");
    const auto methods = method_list(cfg);
    const std::set<std::string> driver = {"problem", "methods", "steps"};
    const AnyProblem any = make_problem(name, problem_params(cfg, name, driver));
    const auto* prob = std::get_if<LinearProblem>(&any);
    if (!prob) throw Error("invalid-config", "order supports linear problems only");
    std::vector<std::int64_t> steps;
    for (const auto& s : split_list(required(cfg, "steps"))) steps.push_back(parse_count(s));

    std::optional<Matrix> reference;
    if (!prob->exact) reference = reference_solution(*prob, prob->tf, 16 * *std::max_element(steps.begin(), steps.end()));

    std::vector<OrderRow> rows;
    for (const auto& m : methods) {
        OrderRow row;
        row.method = m;
        const MethodSpec spec = parse_method(m);
        std::string reason;
        if (!method_applicable(spec, *prob, &reason)) {
            row.slope = kNaN;
            row.note = "skipped: " + reason;
        } else {
            try {
                row.slope = empirical_order(spec, *prob, prob->t0, prob->tf, steps, reference);
            } catch (const Error& e) {
                row.slope = kNaN;
                row.note = e.what();
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_order_table(std::ostream& out, const std::vector<OrderRow>& rows) {
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-10s %8.4f", r.method.c_str(), r.slope);
        out << buf;
        if (!r.note.empty()) out << "  " << r.note;
        out << '\n';
    }
}

namespace {

struct CheckLine {
    std::ostream& out;
    int failures = 0;

    void operator()(const std::string& name, bool ok, double value, double bound) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %-44s %.3e (bound %.1e)\n", ok ? "PASS" : "FAIL", name.c_str(), value,
                      bound);
        out << buf;
        if (!ok) ++failures;
    }
};

double symplectic_defect(const std::function<State(const State&)>& map, const State& x) {
    const double d = 1e-6;
    double m[2][2];
    for (int j = 0; j < 2; ++j) {
        State xp = x, xm = x;
        xp[j] += d;
        xm[j] -= d;
        const State fp = map(xp), fm = map(xm);
        for (int i = 0; i < 2; ++i) m[i][j] = (fp[i] - fm[i]) / (2.0 * d);
    }
    // For 2x2 maps M^T J M = det(M) J.
    return std::abs(m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0);
}

}  // namespace

int run_check(std::ostream& out, std::uint64_t seed) {
    CheckLine check{out};

    // Unitarity of exponential methods on skew-Hermitian problems.
    for (const char* name : {"rect-step", "rosen-zener"}) {
        const auto prob = std::get<LinearProblem>(make_problem(name));
        for (const char* m : {"M2", "M4GL", "M6GL", "CF4", "SF4", "M4NC"}) {
            for (double h : {1.0, 0.1}) {
                const auto n = std::max<std::int64_t>(1, std::llround((prob.tf - prob.t0) / h));
                const auto r = integrate(parse_method(m), prob, prob.t0, prob.tf, n);
                const double d = unitarity_defect(r.Y);
                check(std::string(name) + " " + m + " unitarity n=" + std::to_string(n), d <= n * 1e-12, d,
                      n * 1e-12);
            }
        }
    }

    // Orthogonality of Cayley and Pade-Lie maps on the skew-symmetric problem.
    {
        const auto prob = std::get<LinearProblem>(make_problem("skew-b"));
        for (const char* m : {"CAY4", "CAY6", "MP4", "MP6", "MP68"}) {
            const auto r = integrate(parse_method(m), prob, prob.t0, prob.tf, 100);
            const double d = group_defect(r.Y, prob.structure);
            check(std::string("skew-b ") + m + " orthogonality", d <= 1e-12, d, 1e-12);
        }
    }

    // Time symmetry: a step forward then back returns the identity.
    {
        const auto prob = example1();
        for (const char* m : {"M4GL", "M6GL", "CF4", "SF4", "SF6", "CAY4", "GL-RK4"}) {
            const auto spec = parse_method(m);
            const Matrix y = step(spec, prob, 0.3, 0.1, Matrix::identity(2));
            const Matrix back = step(spec, prob, 0.4, -0.1, y);
            const double d = frobenius_norm(back - Matrix::identity(2));
            check(std::string("example1 ") + m + " time symmetry", d <= 1e-12, d, 1e-12);
        }
    }

    // Recurrence against the BCH series for a random piecewise-constant pair.
    {
        const Matrix x1 = random_matrix(3, seed, 0.2), x2 = random_matrix(3, seed + 1, 0.2);
        const auto prob = bch_pair(x1, x2);
        const auto terms = magnus_terms(prob.A, 0.0, 2.0, 4, 256, prob.breakpoints);
        const auto bch = bch_terms(x1, x2, 4);
        double worst = 0.0;
        for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, max_abs(terms.terms[k] - bch[k]));
        check("bch-pair recurrence vs BCH terms", worst <= 1e-8, worst, 1e-8);
    }

    // Symplecticity of one splitting step on Duffing.
    {
        const auto flow = duffing();
        const State x = flow.x0;
        const double t = 0.7, h = 0.1;
        for (const char* m : {"S2", "SU54"}) {
            const auto c = SplitCoefficients::by_name(m);
            const double d = symplectic_defect([&](const State& s) { return split_step(c, flow, t, h, s); }, x);
            check(std::string("duffing ") + m + " symplecticity", d <= 1e-8, d, 1e-8);
        }
        for (const char* m : {"GS64", "MN64"}) {
            const auto c = SplitCoefficients::by_name(m);
            const auto rule = QuadratureRule::gauss_legendre(2);
            const double d =
                symplectic_defect([&](const State& s) { return magnus_split_step(c, flow, rule, t, h, s); }, x);
            check(std::string("duffing ") + m + " symplecticity", d <= 1e-8, d, 1e-8);
        }
    }

    // Isospectral flow: eigenvalues conserved; d/dt trace(Y N) = -||[Y, N]||_F^2 for Y' = [[Y, N], Y].
    {
        const auto prob = double_bracket(3, seed);
        const auto ev0 = symmetric_eigenvalues3(prob.Y0);
        const Matrix n = Matrix::diag({1.0, 2.0, 3.0});
        const std::int64_t steps = 1000;
        const double h = (prob.tf - prob.t0) / static_cast<double>(steps);
        Matrix y = prob.Y0;
        double drift = 0.0, prev = (y * n).trace().real(), worst_rise = 0.0;
        for (std::int64_t i = 0; i < steps; ++i) {
            y = isospectral_step(prob, 3, prob.t0 + static_cast<double>(i) * h, h, y);
            const auto ev = symmetric_eigenvalues3(y);
            for (int k = 0; k < 3; ++k) drift = std::max(drift, std::abs(ev[k] - ev0[k]));
            const double tr = (y * n).trace().real();
            worst_rise = std::max(worst_rise, tr - prev);
            prev = tr;
        }
        check("double-bracket eigenvalue drift", drift <= 1e-10, drift, 1e-10);
        check("double-bracket trace(YN) increase", worst_rise <= 1e-12, std::max(worst_rise, 0.0), 1e-12);
    }

    // Analytic evaluation counts.
    {
        const auto prob = example1();
        const std::int64_t n = 10;
        const std::pair<const char*, std::int64_t> expect[] = {
            {"M2", n}, {"M4GL", 2 * n}, {"M6GL", 3 * n}, {"M4NC", 2 * n + 1}, {"RK4", 2 * n + 1}, {"RK6", 3 * n + 1}};
        for (const auto& [m, want] : expect) {
            const auto r = integrate(parse_method(m), prob, 0.0, 1.0, n);
            check(std::string("example1 ") + m + " a_evals", r.a_evaluations == want,
                  static_cast<double>(r.a_evaluations), static_cast<double>(want));
        }
    }
    return check.failures;
}

}  // namespace magnus::app
