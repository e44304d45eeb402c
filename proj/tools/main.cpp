#include "app.hpp"

#include "magnuskit/matrix.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw magnus::Error("io-error", "cannot write '" + path + "'");
    body(out);
}

}  // namespace

int main(int argc, char** argv) {
    namespace app = magnus::app;
    CLI::App cli{"Magnus-type integrators: benchmarks, eigenvalue scans and invariant checks"};
    cli.require_subcommand(1);

    std::string config, out;
    std::uint64_t seed = 42;

    auto* bench = cli.add_subcommand("bench", "Run a problem x method x steps grid and write CSV");
    bench->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", out, "CSV output path (default stdout)");

    auto* eigen = cli.add_subcommand("eigen", "Scan Sturm-Liouville eigenvalues and write CSV");
    eigen->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    eigen->add_option("--out", out, "CSV output path (default stdout)");

    auto* order = cli.add_subcommand("order", "Print empirical convergence orders");
    order->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);

    auto* check = cli.add_subcommand("check", "Run invariant suites; exit code 1 on any failure");
    check->add_option("--seed", seed, "Seed for random inputs");

    CLI11_PARSE(cli, argc, argv);

    try {
        if (*bench) {
            const auto result = app::run_benchmark(app::load_config(config));
            for (const auto& s : result.skipped)
                std::cerr << "skip " << s.problem << ' ' << s.method << ": " << s.reason << '\n';
            write_to(out, [&](std::ostream& os) { app::write_csv(os, result.records); });
        } else if (*eigen) {
            const auto report = app::run_eigen(app::load_config(config));
            write_to(out, [&](std::ostream& os) { app::write_eigen_csv(os, report); });
            if (report.slope) std::cerr << "log-error vs log-lambda slope: " << *report.slope << '\n';
        } else if (*order) {
            app::write_order_table(std::cout, app::run_order(app::load_config(config)));
        } else if (*check) {
            return app::run_check(std::cout, seed) == 0 ? 0 : 1;
        }
    } catch (const magnus::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
