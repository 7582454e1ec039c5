#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shocklab/experiment.hpp"

namespace {

// Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O.
int dispatch(const std::string& cmd, shocklab::ExperimentConfig cfg) {
    using namespace shocklab;
    try {
        RunSummary sum;
        if (cmd == "profile") sum = run_profile(cfg);
        else if (cmd == "simulate") sum = run_simulate(cfg);
        else if (cmd == "contract") sum = run_contract(cfg);
        else if (cmd == "limit") sum = run_limit(cfg);
        else if (cmd == "poincare") sum = run_poincare(cfg);
        else if (cmd == "check") sum = run_check(cfg);
        std::cout << sum.to_json() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shocklab: numerical laboratory for viscous two-shock dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false;
    int threads = 0;

    for (const std::string name :
         {"profile", "simulate", "contract", "limit", "poincare", "check"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory")
            ->each([&](const std::string&) { out_set = true; });
        sub->add_option("--seed", seed, "RNG seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads, "worker count for sweeps");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    shocklab::ExperimentConfig cfg;
    try {
        if (!config_path.empty())
            cfg = shocklab::config_from_json_file(config_path);
        if (out_set) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        if (threads > 0) cfg.threads = threads;
        cfg.validate();
    } catch (const shocklab::ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const shocklab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
    return dispatch(cmd, cfg);
}
