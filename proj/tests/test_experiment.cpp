#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "shocklab/experiment.hpp"

using namespace shocklab;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / "shocklab_tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

}  // namespace

TEST_CASE("config parsing, defaults, and rejection") {
    const ExperimentConfig c = config_from_json(R"({
        "gamma": 2.0, "alpha": 1.0,
        "eps1": 0.1, "eps2": 0.08, "lambda": 0.3,
        "grid": {"n": 512},
        "perturbations": [{"shape":"gaussian","target":"v","amplitude":0.02,"center":1.0,"width":2.0}]
    })");
    CHECK(c.gas.b == 2.0);  // defaults to gamma
    CHECK(c.eps2 == 0.08);
    CHECK(c.grid.auto_domain);
    CHECK(c.perturbations.size() == 1);

    // eps/lambda > 1 is invalid
    CHECK_THROWS_AS(config_from_json(R"({"eps1":0.5,"lambda":0.3})"),
                    ConfigError);
    // unknown keys are typos
    CHECK_THROWS_AS(config_from_json(R"({"gamma":2.0,"gama":1.4})"),
                    ConfigError);
    // malformed JSON
    CHECK_THROWS_AS(config_from_json("{"), ConfigError);
    // bad gas exponents
    CHECK_THROWS_AS(config_from_json(R"({"gamma":3.0,"alpha":1.0})"),
                    ConfigError);

    // invalid config must not write any files
    ExperimentConfig bad;
    bad.eps1 = 0.5;
    bad.lambda = 0.3;
    bad.out_dir = scratch_dir("reject");
    fs::remove_all(bad.out_dir);
    CHECK_THROWS_AS(run_profile(bad), ConfigError);
    CHECK(!fs::exists(bad.out_dir));
}

TEST_CASE("atomic writes leave no temporary behind") {
    const std::string dir = scratch_dir("atomic");
    const std::string path = dir + "/x.csv";
    write_file_atomic(path, "a,b\n1,2\n");
    CHECK(fs::exists(path));
    CHECK(!fs::exists(path + ".tmp"));
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
}

TEST_CASE("decay-rate fit recovers a synthetic exponential") {
    std::vector<double> t, y;
    for (int i = 0; i <= 40; ++i) {
        t.push_back(0.25 * i);
        y.push_back(3.0 * std::exp(-0.7 * 0.25 * i));
    }
    CHECK(fit_decay_rate(t, y) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("parallel_for_indexed covers every index deterministically") {
    std::vector<int> hits(97, 0);
    parallel_for_indexed(97, 4, [&](int i) { hits[i] += i; });
    for (int i = 0; i < 97; ++i) CHECK(hits[i] == i);
}

TEST_CASE("profile driver emits fits and per-eps files") {
    ExperimentConfig cfg;
    cfg.eps_sweep = {0.1, 0.2};
    cfg.lambda = 0.3;
    cfg.out_dir = scratch_dir("profile");
    const RunSummary sum = run_profile(cfg);
    CHECK(sum.status == "ok");
    CHECK(sum.get("worst_residual") < 1e-6);
    for (const auto& f : sum.files) CHECK(fs::exists(f));
}

TEST_CASE("small coupled run: invariants, outputs, summary") {
    ExperimentConfig cfg;
    cfg.eps1 = cfg.eps2 = 0.1;
    cfg.lambda = 0.3;
    cfg.t_end = 0.5;
    cfg.grid.n = 600;
    cfg.report_every = 10;
    cfg.perturbations = {{"gaussian", "v", 0.03, 0.0, 2.0}};
    cfg.out_dir = scratch_dir("contract");
    const RunSummary sum = run_contract(cfg);
    CHECK(sum.status == "ok");
    CHECK(sum.get("separation_ok") == 1.0);
    CHECK(sum.get("identity_ok") == 1.0);
    CHECK(sum.get("goods_ok") == 1.0);
    CHECK(sum.get("fitted_C") > 0.0);
    CHECK(sum.get("n_steps") > 0.0);
    for (const auto& f : sum.files) CHECK(fs::exists(f));
    // summary parses back as JSON with the declared metrics
    CHECK(sum.to_json().find("max_budget_residual") != std::string::npos);
}

TEST_CASE("limit driver: table, monotone trend, self-test present") {
    ExperimentConfig cfg;
    cfg.eps1 = cfg.eps2 = 0.1;
    cfg.lambda = 0.3;
    cfg.t_end = 0.25;
    cfg.nu_list = {0.2, 0.1};
    cfg.limit_dy = 0.4;
    cfg.report_every = 500;
    cfg.threads = 2;
    cfg.out_dir = scratch_dir("limit");
    const RunSummary sum = run_limit(cfg);
    CHECK(sum.get("n_failed") == 0.0);
    CHECK(sum.has("selftest_v_l2"));
    CHECK(sum.get("selftest_v_l2") < 1e-3);
    for (const auto& f : sum.files) CHECK(fs::exists(f));
}

TEST_CASE("poincare driver writes the violation map") {
    ExperimentConfig cfg;
    cfg.poincare_delta = {0.005, 0.5};
    cfg.poincare_c1 = {5.0};
    cfg.poincare_samples = 100;
    cfg.threads = 2;
    cfg.seed = 3;
    cfg.out_dir = scratch_dir("poincare");
    const RunSummary sum = run_poincare(cfg);
    CHECK(sum.status == "ok");
    // small delta clean, large delta violated: boundary reported at 0.5
    CHECK(sum.get("violation_boundary_c1_" + std::to_string(5.0)) == 0.5);
    for (const auto& f : sum.files) CHECK(fs::exists(f));
}

TEST_CASE("check driver passes on the default configuration") {
    ExperimentConfig cfg;
    cfg.lambda = 0.3;
    cfg.out_dir = scratch_dir("check");
    const RunSummary sum = run_check(cfg);
    CHECK(sum.status == "ok");
    for (const auto& [k, value] : sum.metrics) CHECK(value == 1.0);
}
