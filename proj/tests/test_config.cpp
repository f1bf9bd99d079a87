#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mlnheat/command.hpp"
#include "mlnheat/config.hpp"
#include "mlnheat/reports.hpp"

using namespace mlnheat;

namespace {

const char* kMinimalSolve = R"json({
  "grid": {"dimension": 1, "points_per_axis": 64, "box_length": 6.283185307179586},
  "s": 0.5,
  "coefficients": {"a": {"floor": 1.0}, "b": {"floor": 1.0}, "c": {"floor": 1.0}},
  "initial": {"terms": [{"kind": "smooth", "expr": "cos(2*pi*x/L)"}]},
  "run": {"final_time": 0.1, "dt": 0.01},
  "output_dir": ".",
  "seed": 7
})json";

} // namespace

TEST_CASE("config round trip: emit(parse(text)) parses to an equal config") {
    const ParseOutcome first = parse_config(kMinimalSolve);
    REQUIRE(first.config.has_value());
    const std::string emitted = emit_config(*first.config);
    const ParseOutcome second = parse_config(emitted);
    REQUIRE(second.config.has_value());
    CHECK(emit_config(*second.config) == emitted);
    CHECK(config_hash(*second.config) == config_hash(*first.config));
}

TEST_CASE("validation collects every problem with field paths") {
    const char* bad = R"json({
      "grid": {"dimension": 3, "points_per_axis": 48, "box_length": -1.0},
      "s": 1.5,
      "coefficients": {"a": {"floor": 0.0}},
      "run": {"final_time": 0.1, "dt": 0.0, "cg_rel_tol": 1.0}
    })json";
    const ParseOutcome out = parse_config(bad);
    CHECK(!out.config.has_value());
    CHECK(out.issues.size() >= 6);
    bool dt_flagged = false;
    for (const auto& i : out.issues) dt_flagged = dt_flagged || i.path == "run.dt";
    CHECK(dt_flagged);
}

TEST_CASE("epsilon below the kernel resolution bound is rejected at parse time") {
    const char* cfg = R"json({
      "grid": {"dimension": 1, "points_per_axis": 64, "box_length": 6.283185307179586},
      "coefficients": {"a": {"floor": 1.0}, "b": {"floor": 1.0}, "c": {"floor": 1.0}},
      "initial": {"terms": [{"kind": "smooth", "expr": "cos(2*pi*x/L)"}]},
      "run": {"final_time": 0.1, "dt": 0.01},
      "epsilons": [0.125, 0.0625, 0.03125, 0.015625]
    })json";
    const ParseOutcome out = parse_config(cfg);
    CHECK(!out.config.has_value());
    bool cited = false;
    for (const auto& i : out.issues)
        cited = cited || i.message.find("UnresolvedKernel") != std::string::npos;
    CHECK(cited);
}

TEST_CASE("omitted epsilons default to the geometric grid, clamped by resolution") {
    const char* fine = R"json({
      "grid": {"dimension": 1, "points_per_axis": 1024, "box_length": 1.0},
      "coefficients": {"a": {"floor": 1.0}, "b": {"floor": 1.0}, "c": {"floor": 1.0}},
      "initial": {"terms": [{"kind": "smooth", "expr": "cos(2*pi*x/L)"}]},
      "run": {"final_time": 0.1, "dt": 0.01}
    })json";
    const ParseOutcome a = parse_config(fine);
    REQUIRE(a.config.has_value());
    CHECK(a.config->epsilons.size() == 6);
    CHECK(a.config->epsilons.front() == 0.125);
    CHECK(a.config->clamped_default_epsilons == 0);

    const char* coarse = R"json({
      "grid": {"dimension": 1, "points_per_axis": 64, "box_length": 1.0},
      "coefficients": {"a": {"floor": 1.0}, "b": {"floor": 1.0}, "c": {"floor": 1.0}},
      "initial": {"terms": [{"kind": "smooth", "expr": "cos(2*pi*x/L)"}]},
      "run": {"final_time": 0.1, "dt": 0.01}
    })json";
    const ParseOutcome b = parse_config(coarse);
    REQUIRE(b.config.has_value());
    CHECK(b.config->epsilons.size() == 3); // 2^-3..2^-5 resolvable at h = 1/64
    CHECK(b.config->clamped_default_epsilons == 3);
}

TEST_CASE("malformed json raises ParseError with a location") {
    CHECK_THROWS_AS(parse_config("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_config(""), ParseError);
}

TEST_CASE("bad expressions and term kinds are reported with paths") {
    const char* cfg = R"json({
      "coefficients": {"a": {"floor": 1.0, "singular": {"nonnegative": true,
        "terms": [{"kind": "smooth", "expr": "cos(2*pi*x/L"}]}}},
      "initial": {"terms": [{"kind": "delta"}]}
    })json";
    const ParseOutcome out = parse_config(cfg);
    CHECK(!out.config.has_value());
    bool expr_issue = false, kind_issue = false;
    for (const auto& i : out.issues) {
        expr_issue = expr_issue || i.path.find("coefficients.a.singular.terms[0].expr") == 0;
        kind_issue = kind_issue || i.path.find("initial.terms[0].kind") == 0;
    }
    CHECK(expr_issue);
    CHECK(kind_issue);
}

TEST_CASE("expression grammar: values and failure modes") {
    const SmoothExpr e = SmoothExpr::parse("2 + sin(2*pi*x/L) * cos(pi) - bump((x-1)/0.5)");
    CHECK(e.eval(1.0, 0.0, 2.0) ==
          doctest::Approx(2.0 - std::sin(3.14159265358979323846) - 1.0));
    CHECK(SmoothExpr::parse("gauss(0)").eval(0, 0, 1) == 1.0);
    CHECK(SmoothExpr::parse("bump(1)").eval(0, 0, 1) == 0.0);
    CHECK(SmoothExpr::parse("-x/2").eval(3.0, 0.0, 1.0) == -1.5);
    CHECK(SmoothExpr::parse("y*y").uses_y());
    CHECK_THROWS_AS(SmoothExpr::parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(SmoothExpr::parse("1 +"), ParseError);
    CHECK_THROWS_AS(SmoothExpr::parse("sin x"), ParseError);
}

TEST_CASE("format_double round trips and uses a point separator") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double v = dist(rng) * std::pow(10.0, i % 13 - 6);
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("energy trace csv header matches the documented schema") {
    EnergyTrace t;
    t.times = {0.0};
    t.breakdowns = {EnergyBreakdown{}};
    t.ut_l2_sq = {0.0};
    t.cg_iterations = {0};
    const std::string csv = energy_trace_csv(t);
    CHECK(csv.rfind("time,l2_sq,grad_w_sq,frac_w_sq,mass_w_sq,total,ut_l2_sq,cg_iterations\n",
                    0) == 0);
}

TEST_CASE("report files require an existing output directory") {
    CHECK_THROWS_AS(write_report_file("definitely/not/a/dir", "x.json", "{}"),
                    IoError);
}

TEST_CASE("identical configs produce byte-identical reports") {
    ParseOutcome parsed = parse_config(kMinimalSolve);
    REQUIRE(parsed.config.has_value());
    ExperimentConfig cfg = *parsed.config;
    cfg.command = Command::solve;
    cfg.output_dir = "config_test_out";
    std::filesystem::create_directories(cfg.output_dir);
    const CommandOutcome r1 = run_command(cfg);
    std::vector<std::string> first;
    for (const auto& f : r1.files) {
        std::ifstream in("config_test_out/" + f, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        first.push_back(ss.str());
    }
    const CommandOutcome r2 = run_command(cfg);
    for (std::size_t i = 0; i < r2.files.size(); ++i) {
        std::ifstream in("config_test_out/" + r2.files[i], std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == first[i]);
    }
    CHECK(r1.files == r2.files);
}

TEST_CASE("the property suite passes on the default configuration") {
    const auto props = run_property_suite(0);
    CHECK(props.size() >= 8);
    for (const auto& p : props) {
        INFO(p.name, ": ", p.detail);
        CHECK(p.passed);
    }
}
