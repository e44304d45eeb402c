#include "app.hpp"

#include "magnuskit/matrix.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <sstream>

using namespace magnus;
using namespace magnus::app;

namespace {

Config cfg(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string csv_without_wall(const std::vector<BenchmarkRecord>& records) {
    std::ostringstream out;
    write_csv(out, records);
    return std::regex_replace(out.str(), std::regex(",[0-9]+\n"), "\n");
}

}  // namespace

TEST(Config, ParsesKeysCommentsAndLists) {
    const auto c = cfg("# header\nproblem = rosen-zener  # trailing\n\nmethods = M2, M4GL ,M6GL\nh = 1/20\n");
    ASSERT_NE(c.find("problem"), nullptr);
    EXPECT_EQ(*c.find("problem"), "rosen-zener");
    EXPECT_EQ(split_list(*c.find("methods")), (std::vector<std::string>{"M2", "M4GL", "M6GL"}));
    EXPECT_DOUBLE_EQ(parse_number(*c.find("h")), 0.05);
    EXPECT_EQ(c.find("missing"), nullptr);
    EXPECT_THROW((void)cfg("no equals sign\n"), Error);
    EXPECT_THROW((void)parse_number("1/0"), Error);
    EXPECT_THROW((void)parse_number("abc"), Error);
    EXPECT_THROW((void)parse_number("2x"), Error);
}

TEST(Bench, UnknownKeyNamesTheKey) {
    try {
        (void)run_benchmark(cfg("problem = rect-step\nmethods = M4GL\nsteps = 4\ngama = 2\n"), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("gama"), std::string::npos);
    }
}

TEST(Bench, EmptyMethodsAndStepsAreErrors) {
    EXPECT_THROW((void)run_benchmark(cfg("problem = rect-step\nmethods = ,\nsteps = 4\n"), 1), Error);
    EXPECT_THROW((void)run_benchmark(cfg("problem = rect-step\nsteps = 4\n"), 1), Error);
    EXPECT_THROW((void)run_benchmark(cfg("problem = rect-step\nmethods = M2\n"), 1), Error);
    EXPECT_THROW((void)run_benchmark(cfg("problem = rect-step\nmethods = M2\nh = 0.3\n"), 1), Error);
    EXPECT_THROW((void)run_benchmark(cfg("problem = rect-step\nmethods = XYZ\nsteps = 4\n"), 1), Error);
}

TEST(Bench, MismatchedMethodIsSkippedWithReason) {
    const auto r = run_benchmark(cfg("problem = bch-pair\nmethods = M4GL, CAY4\nsteps = 4, 8\n"), 2);
    EXPECT_EQ(r.records.size(), 2u);
    ASSERT_EQ(r.skipped.size(), 2u);
    EXPECT_EQ(r.skipped[0].method, "CAY4");
    EXPECT_FALSE(r.skipped[0].reason.empty());
}

TEST(Bench, RecordsAndCounts) {
    const auto r =
        run_benchmark(cfg("problem = example1\nmethods = M4GL, M6GL, RK4, RK6, M4NC\nsteps = 10, 20\n"), 3);
    ASSERT_EQ(r.records.size(), 10u);
    const std::vector<std::int64_t> per_step = {2, 2, 3, 3, 2, 2, 3, 3, 2, 2};
    const std::vector<std::int64_t> extra = {0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto& rec = r.records[i];
        EXPECT_EQ(rec.a_evaluations, per_step[i] * rec.steps + extra[i]) << rec.method;
        EXPECT_GE(rec.error, 0.0);
        EXPECT_NEAR(rec.h, 1.0 / static_cast<double>(rec.steps), 1e-15);
        EXPECT_LT(rec.det_defect, 1e-2);
    }
    EXPECT_EQ(r.records[0].method, "M4GL");
    EXPECT_EQ(r.records[0].steps, 10);
    EXPECT_EQ(r.records[1].steps, 20);
}

TEST(Bench, StepSizesFromH) {
    const auto r = run_benchmark(cfg("problem = skew-b\nmethods = M6, MP68\nh = 1/20, 1/10\ntf = 2\n"), 2);
    ASSERT_EQ(r.records.size(), 4u);
    EXPECT_EQ(r.records[0].steps, 40);
    EXPECT_EQ(r.records[1].steps, 20);
    for (const auto& rec : r.records) EXPECT_LT(rec.unitarity_defect, 1e-12);
}

TEST(Bench, CsvFormat) {
    const auto r = run_benchmark(cfg("problem = rosen-zener\nmethods = M4GL\nsteps = 25\n"), 1);
    std::ostringstream out;
    write_csv(out, r.records);
    const std::string s = out.str();
    EXPECT_EQ(s.rfind("problem,method,h,steps,a_evals,exps,error,unitarity_defect,det_defect,wall_ns\n", 0), 0u);
    EXPECT_NE(s.find("rosen-zener,M4GL,2,25,50,25,"), std::string::npos);
}

TEST(Bench, DeterministicAcrossRunsAndThreadCounts) {
    const auto c = cfg(
        "problem = rosen-zener, skew-a, duffing, double-bracket, bch-pair\n"
        "methods = M4GL, CF4, RK4, S2, MN64, ISO3\nsteps = 20, 40\nseed = 7\nrandom = 1\n");
    EXPECT_THROW((void)run_benchmark(c, 1), Error);  // random is a bch-pair key only

    const auto d = cfg("problem = rosen-zener, skew-a\nmethods = M4GL, CF4, RK4, MP6\nsteps = 20, 40\n");
    const auto one = csv_without_wall(run_benchmark(d, 1).records);
    EXPECT_EQ(one, csv_without_wall(run_benchmark(d, 1).records));
    EXPECT_EQ(one, csv_without_wall(run_benchmark(d, 4).records));
}

TEST(Bench, SplittingAndIsospectralRows) {
    const auto s = run_benchmark(cfg("problem = duffing\nmethods = S2, SU54, MN64\nsteps = 100\n"), 2);
    ASSERT_EQ(s.records.size(), 3u);
    EXPECT_EQ(s.records[0].a_evaluations, 101);
    EXPECT_EQ(s.records[1].a_evaluations, 501);
    EXPECT_EQ(s.records[2].a_evaluations, 601);
    const auto i = run_benchmark(cfg("problem = double-bracket\nmethods = ISO2, ISO3, NLM2\nsteps = 50\nseed = 3\n"), 2);
    ASSERT_EQ(i.records.size(), 2u);
    EXPECT_EQ(i.skipped.size(), 1u);
    for (const auto& rec : i.records) EXPECT_LT(rec.error, 1e-10);
}

TEST(Eigen, FlatWell) {
    const auto rep = run_eigen(cfg("problem = sl-well\nN = 200\nlambda_max = 26\n"));
    ASSERT_EQ(rep.rows.size(), 5u);
    for (int n = 1; n <= 5; ++n) {
        EXPECT_EQ(rep.rows[n - 1].n, n);
        EXPECT_NEAR(rep.rows[n - 1].lambda, n * n, 1e-6);
    }
    EXPECT_THROW((void)run_eigen(cfg("problem = rosen-zener\n")), Error);
    EXPECT_THROW((void)run_eigen(cfg("lambda_max = 3\n")), Error);
}

TEST(Order, Table) {
    const auto rows = run_order(cfg("problem = example1\nmethods = M4GL, M6GL\nsteps = 8, 16, 32\n"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].slope, 4.0, 0.2);
    EXPECT_NEAR(rows[1].slope, 6.0, 0.3);
    const auto skew = run_order(cfg("problem = skew-a\nmethods = M4GL\nsteps = 64, 128, 256\ntf = 2\n"));
    EXPECT_NEAR(skew[0].slope, 4.0, 0.3);
}

TEST(Check, AllInvariantsPass) {
    std::ostringstream a, b;
    EXPECT_EQ(run_check(a, 42), 0) << a.str();
    EXPECT_EQ(run_check(b, 42), 0);
    EXPECT_EQ(a.str(), b.str());
}
