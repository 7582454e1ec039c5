#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shocklab/functionals.hpp"
#include "shocklab/poincare.hpp"

namespace shocklab {

// Initial-data perturbation: a Gaussian bump or a Gaussian-windowed sine
// (the window keeps the far field pinned).
struct PerturbationTerm {
    std::string shape = "gaussian";  // "gaussian" | "sine"
    std::string target = "v";        // "v" | "u"
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    double eval(double x) const;
};

struct GridSpec {
    bool auto_domain = true;
    double x_min = 0.0, x_max = 0.0;
    int n = 2000;
    double pad = 5.0;
};

struct ExperimentConfig {
    GasModel gas;
    double v_minus = 1.0, u_minus = 0.0;
    double eps1 = 0.1, eps2 = 0.1;
    double lambda = 0.1;
    double delta1 = 0.05;
    std::vector<double> nu_list;    // `limit`: decreasing viscosities
    std::vector<double> eps_sweep;  // `profile`: symmetric strength sweep
    GridSpec grid;
    double t_end = 2.0;
    double dt_max = 0.0;  // 0 = stability-limited step
    double c_cfl = 0.4, c_diff = 0.25;
    double profile_dxi_factor = 0.01;  // dxi = factor/eps
    double limit_dy = 0.0;             // rescaled grid spacing; 0 = auto
    std::vector<PerturbationTerm> perturbations;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int report_every = 20;
    int threads = 1;
    std::vector<double> poincare_delta;
    std::vector<double> poincare_c1;
    int poincare_samples = 1000;

    void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

struct RunSummary {
    std::string name;
    std::string status = "ok";
    std::string message;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> files;

    void add(const std::string& key, double value);
    double get(const std::string& key) const;  // throws if missing
    bool has(const std::string& key) const;
    std::string to_json() const;
};

// --- shared plumbing -------------------------------------------------------

void write_file_atomic(const std::string& path, const std::string& contents);

// Least-squares decay rate r of y ~ C exp(-r t); skips non-positive samples.
double fit_decay_rate(const std::vector<double>& t,
                      const std::vector<double>& y);

// Runs fn(i) for i in [0, n) on up to `threads` workers; results are
// produced independently per index, so the merge order is deterministic.
void parallel_for_indexed(int n, int threads,
                          const std::function<void(int)>& fn);

// --- coupled simulation ----------------------------------------------------

struct CoupledSetup {
    WaveFan fan;
    CompositeWave waves;
    double lambda = 0.1;
    Grid grid;
    Field init;

    // Constructed on demand so the pair never outlives this setup.
    WeightPair weights() const { return WeightPair{lambda, &waves}; }
};

// Builds fan, profiles, weights, grid and initial data at the internal nu=1
// normalization. rescale > 0 runs in rescaled variables y = x/rescale (used
// by the inviscid-limit driver).
CoupledSetup build_setup(const ExperimentConfig& cfg, double rescale = 0.0);

struct SimulationResult {
    Field field;
    ShiftState shifts;
    ContractionMonitor monitor;
    std::vector<EntropyReport> reports;      // at cadence
    std::vector<ShiftState> shift_trace;     // at cadence
    long branch_counts1[4] = {0, 0, 0, 0};
    long branch_counts2[4] = {0, 0, 0, 0};
    long n_steps = 0;
};

// Full coupled loop: per step evaluate the budget at the pre-step state,
// advance the shift ODE with those rates, step the PDE, and feed the
// contraction monitor. with_localized adds the sharp-estimate margins at
// report cadence.
SimulationResult run_coupled(const CoupledSetup& setup, double T,
                             double dt_max, int report_every,
                             double delta1, bool with_localized);

// --- drivers ---------------------------------------------------------------

RunSummary run_profile(const ExperimentConfig& cfg);
RunSummary run_simulate(const ExperimentConfig& cfg);
RunSummary run_contract(const ExperimentConfig& cfg);
RunSummary run_limit(const ExperimentConfig& cfg);
RunSummary run_poincare(const ExperimentConfig& cfg);
RunSummary run_check(const ExperimentConfig& cfg);

}  // namespace shocklab
