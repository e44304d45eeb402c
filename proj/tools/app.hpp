#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace magnus::app {

/// `key = value` lines in file order; `#` starts a comment.
struct Config {
    std::vector<std::pair<std::string, std::string>> entries;

    [[nodiscard]] const std::string* find(const std::string& key) const;
};

[[nodiscard]] Config parse_config(std::istream& in);
[[nodiscard]] Config load_config(const std::string& path);

/// Accepts decimals and fractions such as 1/20.
[[nodiscard]] double parse_number(const std::string& text);
[[nodiscard]] std::vector<std::string> split_list(const std::string& text);

struct BenchmarkRecord {
    std::string problem;
    std::string method;
    double h = 0.0;
    std::int64_t steps = 0;
    std::int64_t a_evaluations = 0;
    std::int64_t exponentials = 0;
    double error = 0.0;
    double unitarity_defect = 0.0;
    double det_defect = 0.0;
    std::int64_t wall_ns = 0;
};

struct SkippedRow {
    std::string problem;
    std::string method;
    std::string reason;
};

struct BenchmarkResult {
    std::vector<BenchmarkRecord> records;
    std::vector<SkippedRow> skipped;
};

/// Worker cap from MAGNUSKIT_THREADS, else hardware concurrency.
[[nodiscard]] unsigned worker_count();

/// Keys: problem, methods, steps | h, plus the problem's own parameters (seed included).
[[nodiscard]] BenchmarkResult run_benchmark(const Config& cfg, unsigned workers = worker_count());

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);

struct EigenRow {
    int n = 0;
    double lambda = 0.0;
    std::optional<double> exact;
    double residual = 0.0;
};

struct EigenReport {
    std::vector<EigenRow> rows;
    /// Slope of log|error| against log(lambda) over analytic values with errors above roundoff (three or more).
    std::optional<double> slope;
};

/// Keys: problem, lambda_min, lambda_max, scan_step, plus the problem's parameters.
[[nodiscard]] EigenReport run_eigen(const Config& cfg);
void write_eigen_csv(std::ostream& out, const EigenReport& report);

struct OrderRow {
    std::string method;
    double slope = 0.0;
    std::string note;
};

/// Keys: problem, methods, steps (at least three), plus the problem's parameters.
[[nodiscard]] std::vector<OrderRow> run_order(const Config& cfg);
void write_order_table(std::ostream& out, const std::vector<OrderRow>& rows);

/// Invariant suites; prints one line per check and returns the number of failures.
[[nodiscard]] int run_check(std::ostream& out, std::uint64_t seed = 42);

}  // namespace magnus::app
