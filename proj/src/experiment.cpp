#include "shocklab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;

namespace shocklab {

double PerturbationTerm::eval(double x) const {
    const double s = (x - center) / width;
    if (shape == "gaussian") return amplitude * std::exp(-s * s);
    // Gaussian-windowed sine; the window keeps the far field untouched.
    const double env = std::exp(-(s * s) / 16.0);
    return amplitude * std::sin(2.0 * M_PI * s) * env;
}

void ExperimentConfig::validate() const {
    gas.validate();
    if (!(v_minus > gas.v_min)) throw ConfigError("config: v_minus below floor");
    if (!(eps1 >= 0.0 && eps2 >= 0.0))
        throw ConfigError("config: strengths must be >= 0");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw ConfigError("config: lambda must lie in (0,1)");
    if (eps1 / lambda > 1.0 || eps2 / lambda > 1.0)
        throw ConfigError("config: eps/lambda must not exceed 1");
    if (!(delta1 > 0.0)) throw ConfigError("config: delta1 must be > 0");
    if (!(t_end >= 0.0)) throw ConfigError("config: t_end must be >= 0");
    if (grid.n < 16) throw ConfigError("config: grid.n must be >= 16");
    if (!grid.auto_domain && !(grid.x_max > grid.x_min))
        throw ConfigError("config: grid.x_max must exceed grid.x_min");
    if (!(grid.pad >= 0.0)) throw ConfigError("config: grid.pad must be >= 0");
    if (report_every < 1) throw ConfigError("config: report_every must be >= 1");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    if (!(profile_dxi_factor > 0.0 && profile_dxi_factor <= 0.1))
        throw ConfigError("config: profile_dxi_factor must lie in (0, 0.1]");
    for (const auto& p : perturbations) {
        if (p.shape != "gaussian" && p.shape != "sine")
            throw ConfigError("config: unknown perturbation shape " + p.shape);
        if (p.target != "v" && p.target != "u")
            throw ConfigError("config: unknown perturbation target " + p.target);
        if (!(p.width > 0.0)) throw ConfigError("config: perturbation width <= 0");
    }
    for (std::size_t i = 1; i < nu_list.size(); ++i)
        if (!(nu_list[i] < nu_list[i - 1]))
            throw ConfigError("config: nu_list must be strictly decreasing");
    for (double nu : nu_list)
        if (!(nu > 0.0)) throw ConfigError("config: nu_list entries must be > 0");
    if (!nu_list.empty() && gas.b != gas.gamma)
        throw ConfigError("config: the limit study requires b = gamma");
    for (double e : eps_sweep)
        if (!(e > 0.0 && e / lambda <= 1.0))
            throw ConfigError("config: eps_sweep entry out of range");
    for (double dte : poincare_delta)
        if (!(dte > 0.0 && dte < 1.0))
            throw ConfigError("config: poincare_delta entries must lie in (0,1)");
    for (double c : poincare_c1)
        if (!(c > 0.0)) throw ConfigError("config: poincare_c1 entries must be > 0");
    if (poincare_samples < 1)
        throw ConfigError("config: poincare_samples must be >= 1");
    // Strengths must yield a positive middle/right volume.
    try {
        build_fan(State{v_minus, u_minus}, eps1, eps2, gas);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    static const std::vector<std::string> known = {
        "gamma", "alpha", "b", "nu", "v_min", "v_minus", "u_minus", "eps1",
        "eps2", "lambda", "delta1", "nu_list", "eps_sweep", "grid", "t_end",
        "dt_max", "c_cfl", "c_diff", "profile_dxi_factor", "limit_dy",
        "perturbations", "out_dir", "seed", "report_every", "threads",
        "poincare_delta", "poincare_c1", "poincare_samples"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("config: unknown key '" + it.key() + "'");
    }

    ExperimentConfig c;
    bool b_given = j.contains("b");
    try {
        read_if(j, "gamma", c.gas.gamma);
        read_if(j, "alpha", c.gas.alpha);
        read_if(j, "b", c.gas.b);
        read_if(j, "nu", c.gas.nu);
        read_if(j, "v_min", c.gas.v_min);
        if (!b_given) c.gas.b = c.gas.gamma;
        read_if(j, "v_minus", c.v_minus);
        read_if(j, "u_minus", c.u_minus);
        read_if(j, "eps1", c.eps1);
        read_if(j, "eps2", c.eps2);
        read_if(j, "lambda", c.lambda);
        read_if(j, "delta1", c.delta1);
        read_if(j, "nu_list", c.nu_list);
        read_if(j, "eps_sweep", c.eps_sweep);
        if (j.contains("grid")) {
            const auto& gj = j.at("grid");
            read_if(gj, "n", c.grid.n);
            read_if(gj, "pad", c.grid.pad);
            if (gj.contains("x_min") || gj.contains("x_max")) {
                c.grid.auto_domain = false;
                c.grid.x_min = gj.at("x_min").get<double>();
                c.grid.x_max = gj.at("x_max").get<double>();
            }
        }
        read_if(j, "t_end", c.t_end);
        read_if(j, "dt_max", c.dt_max);
        read_if(j, "c_cfl", c.c_cfl);
        read_if(j, "c_diff", c.c_diff);
        read_if(j, "profile_dxi_factor", c.profile_dxi_factor);
        read_if(j, "limit_dy", c.limit_dy);
        if (j.contains("perturbations")) {
            for (const auto& pj : j.at("perturbations")) {
                PerturbationTerm p;
                read_if(pj, "shape", p.shape);
                read_if(pj, "target", p.target);
                read_if(pj, "amplitude", p.amplitude);
                read_if(pj, "center", p.center);
                read_if(pj, "width", p.width);
                c.perturbations.push_back(p);
            }
        }
        read_if(j, "out_dir", c.out_dir);
        read_if(j, "seed", c.seed);
        read_if(j, "report_every", c.report_every);
        read_if(j, "threads", c.threads);
        read_if(j, "poincare_delta", c.poincare_delta);
        read_if(j, "poincare_c1", c.poincare_c1);
        read_if(j, "poincare_samples", c.poincare_samples);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: bad field type: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void RunSummary::add(const std::string& key, double value) {
    metrics.emplace_back(key, value);
}

bool RunSummary::has(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return true;
    return false;
}

double RunSummary::get(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return v;
    throw std::out_of_range("RunSummary: no metric " + key);
}

std::string RunSummary::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["status"] = status;
    if (!message.empty()) j["message"] = message;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : metrics) m[k] = v;
    j["metrics"] = m;
    j["files"] = files;
    return j.dump(2);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string());
    }
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out << contents;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw IoError("rename failed for " + p.string());
}

double fit_decay_rate(const std::vector<double>& t,
                      const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        const double ly = std::log(y[i]);
        sx += t[i];
        sy += ly;
        sxx += t[i] * t[i];
        sxy += t[i] * ly;
        ++n;
    }
    if (n < 2) throw NumericalError("fit_decay_rate: not enough positive samples");
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void parallel_for_indexed(int n, int threads,
                          const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int k = std::min(threads, n);
    pool.reserve(k);
    for (int i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

CoupledSetup build_setup(const ExperimentConfig& cfg, double rescale) {
    const GasModel& g = cfg.gas;
    CoupledSetup s;
    s.fan = build_fan(State{cfg.v_minus, cfg.u_minus}, cfg.eps1, cfg.eps2, g);
    s.waves.wave1 = solve_profile(
        1, s.fan, g, 0.0,
        cfg.eps1 > 0 ? cfg.profile_dxi_factor / cfg.eps1 : 0.0);
    s.waves.wave2 = solve_profile(
        2, s.fan, g, 0.0,
        cfg.eps2 > 0 ? cfg.profile_dxi_factor / cfg.eps2 : 0.0);
    s.waves.middle = s.fan.middle;
    s.waves.fan = s.fan;
    s.lambda = cfg.lambda;

    const double t_int = rescale > 0.0 ? cfg.t_end / rescale : cfg.t_end;
    if (cfg.grid.auto_domain) {
        const double w1 = -s.waves.wave1.xi0;
        const double w2 = -s.waves.wave2.xi0;
        s.grid.x_min = -w1 - cfg.grid.pad - 1.5 * std::abs(s.fan.sigma1) * t_int;
        s.grid.x_max = w2 + cfg.grid.pad + 1.5 * s.fan.sigma2 * t_int;
        s.grid.n = cfg.grid.n;
    } else {
        s.grid.x_min = cfg.grid.x_min;
        s.grid.x_max = cfg.grid.x_max;
        s.grid.n = cfg.grid.n;
    }
    s.grid.validate();

    const int m = s.grid.n + 1;
    std::vector<double> v0(m), u0(m);
    for (int j = 0; j < m; ++j) {
        const double y = s.grid.x(j);
        const double x_phys = rescale > 0.0 ? rescale * y : y;
        const State base = s.waves.eval_state(0.0, y, 0.0, 0.0);
        double dv = 0.0, du = 0.0;
        for (const auto& p : cfg.perturbations) {
            const double val = p.eval(x_phys);
            if (p.target == "v") dv += val;
            else du += val;
        }
        v0[j] = base.v + dv;
        u0[j] = base.u + du;
        if (!(v0[j] > g.v_min))
            throw ConfigError("config: perturbation drives v below floor");
    }
    // Well-prepared initial data: h from the BD transform of (v0, u0) at the
    // internal nu = 1 normalization.
    Field f;
    f.grid = s.grid;
    f.t = 0.0;
    f.v = v0;
    f.h = bd_transform(v0, u0, s.grid.dx(), g, 1.0);
    f.far_left = BDState{s.fan.left.v, s.fan.left.u};
    f.far_right = BDState{s.fan.right.v, s.fan.right.u};
    s.init = std::move(f);
    return s;
}

SimulationResult run_coupled(const CoupledSetup& setup, double T,
                             double dt_max, int report_every, double delta1,
                             bool with_localized) {
    const GasModel& g = setup.waves.wave1.gas;
    const WeightPair wp = setup.weights();
    SimulationResult out;
    out.field = setup.init;
    Field& f = out.field;
    ShiftState s;

    EntropyReport prev;
    bool have_prev = false;
    double prev_dt = 0.0;
    long step_index = 0;

    auto emit = [&](const EntropyReport& rep) {
        out.reports.push_back(rep);
        out.shift_trace.push_back(s);
    };

    const double t_end = f.t + T;
    // tolerance absorbs step-count rounding so no stray microstep is taken
    // (a near-zero step would wreck the budget difference quotient)
    while (f.t < t_end - 1e-9 * std::max(1.0, t_end)) {
        double dt = stable_dt(f.v, f.grid.dx(), g, 1.0);
        if (dt_max > 0.0) {
            if (dt_max > 1.0000001 * dt)
                throw NumericalError("run_coupled: dt exceeds stability bound");
            dt = dt_max;
        }
        dt = std::min(dt, t_end - f.t);

        WaveFrame frame =
            build_frame(f.grid, setup.waves, wp, f.t, s.X1, s.X2);
        EntropyReport rep = compute_budget(f, frame, delta1);
        const ShiftRates rates =
            shift_rhs(rep.y1, rep.y2, rep.j_bad, setup.fan);
        rep.dX1 = rates.dX1;
        rep.dX2 = rates.dX2;
        rep.branch1 = rates.branch1;
        rep.branch2 = rates.branch2;
        ++out.branch_counts1[rates.branch1];
        ++out.branch_counts2[rates.branch2];

        if (have_prev) out.monitor.record(prev, rep.a_eta, prev_dt);

        if (step_index % report_every == 0) {
            if (with_localized && f.t > 0.0) {
                const TruncatedField tf = truncate(f, frame, delta1);
                const PartitionPhi phi = partition_phi(f.t, s, setup.fan);
                const LocalizedFunctionals l1 =
                    localized_functionals(tf.bar_v, f, frame, phi, 1);
                const LocalizedFunctionals l2 =
                    localized_functionals(tf.bar_v, f, frame, phi, 2);
                rep.rdelta1 = rdelta_margin(l1, setup.fan.eps1,
                                            setup.lambda, delta1);
                rep.rdelta2 = rdelta_margin(l2, setup.fan.eps2,
                                            setup.lambda, delta1);
            }
            emit(rep);
        }

        s = advance_shifts(s, rates, dt, setup.fan);
        step(f, dt, g, 1.0);
        prev = rep;
        have_prev = true;
        prev_dt = dt;
        ++step_index;
    }

    if (have_prev) {
        WaveFrame frame =
            build_frame(f.grid, setup.waves, wp, f.t, s.X1, s.X2);
        out.monitor.record(prev, weighted_rel_entropy(f, frame), prev_dt);
        EntropyReport rep = compute_budget(f, frame, delta1);
        rep.dX1 = prev.dX1;
        rep.dX2 = prev.dX2;
        rep.branch1 = prev.branch1;
        rep.branch2 = prev.branch2;
        emit(rep);
    }
    out.shifts = s;
    out.n_steps = step_index;
    return out;
}

namespace {

std::string report_csv_header() {
    return "t,x1,x2,dx1,dx2,branch1,branch2,y1,y2,j_bad,j_good,"
           "b11,b12,b2m1,b2m2,b2p1,b2p2,b31,b32,b41,b42,b5,b6,"
           "g1m1,g1m2,g1p1,g1p2,g21,g22,d,a_eta,e1_l1,e2_l1,"
           "inter1,inter2,rdelta1,rdelta2\n";
}

void append_report_row(std::ostringstream& os, const EntropyReport& r,
                       const ShiftState& s) {
    os.precision(17);
    os << r.t << ',' << s.X1 << ',' << s.X2 << ',' << r.dX1 << ',' << r.dX2
       << ',' << r.branch1 << ',' << r.branch2 << ',' << r.y1 << ',' << r.y2
       << ',' << r.j_bad << ',' << r.j_good << ',' << r.b1[0] << ',' << r.b1[1]
       << ',' << r.b2m[0] << ',' << r.b2m[1] << ',' << r.b2p[0] << ','
       << r.b2p[1] << ',' << r.b3[0] << ',' << r.b3[1] << ',' << r.b4[0] << ','
       << r.b4[1] << ',' << r.b5 << ',' << r.b6 << ',' << r.g1m[0] << ','
       << r.g1m[1] << ',' << r.g1p[0] << ',' << r.g1p[1] << ',' << r.g2[0]
       << ',' << r.g2[1] << ',' << r.d << ',' << r.a_eta << ',' << r.e1_l1
       << ',' << r.e2_l1 << ',' << r.inter1 << ',' << r.inter2 << ','
       << r.rdelta1 << ',' << r.rdelta2 << '\n';
}

std::string snapshot_csv(const Field& f, const GasModel& g) {
    const std::vector<double> u = bd_inverse(f.v, f.h, f.grid.dx(), g, 1.0);
    std::ostringstream os;
    os.precision(17);
    os << "x,v,h,u\n";
    for (int j = 0; j <= f.grid.n; ++j)
        os << f.grid.x(j) << ',' << f.v[j] << ',' << f.h[j] << ',' << u[j]
           << '\n';
    return os.str();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

RunSummary run_profile(const ExperimentConfig& cfg) {
    cfg.validate();
    RunSummary sum;
    sum.name = "profile";
    std::vector<double> sweep = cfg.eps_sweep;
    if (sweep.empty()) sweep = {cfg.eps1};

    std::ostringstream fits;
    fits.precision(17);
    fits << "eps,family,tail_rate,tail_rate_over_eps,residual_mass,"
            "residual_momentum\n";
    double worst_residual = 0.0;
    std::vector<double> rate_over_eps;
    for (double eps : sweep) {
        if (!(eps > 0.0))
            throw ConfigError("profile: strengths must be > 0");
        const WaveFan fan =
            build_fan(State{cfg.v_minus, cfg.u_minus}, eps, eps, cfg.gas);
        for (int family : {1, 2}) {
            const ShockProfile prof = solve_profile(
                family, fan, cfg.gas, 0.0, cfg.profile_dxi_factor / eps);
            const ProfileResidual res = profile_residual(prof);
            worst_residual = std::max(worst_residual, res.max_abs());
            const double rate = profile_tail_rate(prof);
            if (family == 1) rate_over_eps.push_back(rate / eps);
            fits << eps << ',' << family << ',' << rate << ',' << rate / eps
                 << ',' << res.eq_mass << ',' << res.eq_momentum << '\n';

            std::ostringstream csv;
            csv.precision(17);
            csv << "xi,v,h,u\n";
            for (std::size_t j = 0; j < prof.v.size(); ++j) {
                const double xi = prof.xi0 + prof.dxi * static_cast<double>(j);
                csv << xi << ',' << prof.v[j] << ',' << prof.h[j] << ','
                    << prof.u[j] << '\n';
            }
            std::ostringstream name;
            name << cfg.out_dir << "/profile_f" << family << "_eps" << eps
                 << ".csv";
            write_file_atomic(name.str(), csv.str());
            sum.files.push_back(name.str());
        }
    }
    const std::string fit_path = cfg.out_dir + "/decay_fits.csv";
    write_file_atomic(fit_path, fits.str());
    sum.files.push_back(fit_path);

    sum.add("worst_residual", worst_residual);
    const auto [lo, hi] =
        std::minmax_element(rate_over_eps.begin(), rate_over_eps.end());
    sum.add("tail_rate_over_eps_min", *lo);
    sum.add("tail_rate_over_eps_max", *hi);
    if (worst_residual > 1e-6) {
        sum.status = "residual_failure";
        sum.message = "profile residual above 1e-6";
    }
    const std::string sum_path = cfg.out_dir + "/profile_summary.json";
    write_file_atomic(sum_path, sum.to_json());
    if (sum.status != "ok") throw NumericalError(sum.message);
    return sum;
}

namespace {

RunSummary run_evolution(const ExperimentConfig& cfg, bool contract_mode) {
    cfg.validate();
    RunSummary sum;
    sum.name = contract_mode ? "contract" : "simulate";

    const CoupledSetup setup = build_setup(cfg);
    {
        const std::string p = cfg.out_dir + "/initial_snapshot.csv";
        write_file_atomic(p, snapshot_csv(setup.init, cfg.gas));
        sum.files.push_back(p);
    }
    const SimulationResult res =
        run_coupled(setup, cfg.t_end, cfg.dt_max, cfg.report_every, cfg.delta1,
                    contract_mode);

    std::ostringstream ts;
    ts << report_csv_header();
    for (std::size_t i = 0; i < res.reports.size(); ++i)
        append_report_row(ts, res.reports[i], res.shift_trace[i]);
    const std::string ts_path = cfg.out_dir + "/timeseries.csv";
    write_file_atomic(ts_path, ts.str());
    sum.files.push_back(ts_path);

    const std::string snap_path = cfg.out_dir + "/final_snapshot.csv";
    write_file_atomic(snap_path, snapshot_csv(res.field, cfg.gas));
    sum.files.push_back(snap_path);

    const FanDistance dist = fan_distance(res.field, setup.fan, res.field.t,
                                          res.shifts.X1, res.shifts.X2);
    sum.add("final_l1_v", dist.l1_v);
    sum.add("final_l2_h", dist.l2_h);
    sum.add("final_rel_entropy", dist.rel_entropy);
    sum.add("n_steps", static_cast<double>(res.n_steps));
    sum.add("x1_final", res.shifts.X1);
    sum.add("x2_final", res.shifts.X2);
    sum.add("separation_ok", 1.0);  // advance_shifts throws otherwise

    if (contract_mode) {
        sum.add("max_budget_residual", res.monitor.max_abs_residual);
        sum.add("mean_budget_residual", res.monitor.mean_abs_residual());
        sum.add("fitted_C", res.monitor.fitted_C);
        sum.add("identity_ok", res.monitor.identity_ok ? 1.0 : 0.0);
        sum.add("goods_ok", res.monitor.goods_ok ? 1.0 : 0.0);
        const double total1 = static_cast<double>(res.n_steps);
        for (int b = 0; b < 4; ++b) {
            sum.add("branch1_frac_" + std::to_string(b),
                    res.branch_counts1[b] / total1);
            sum.add("branch2_frac_" + std::to_string(b),
                    res.branch_counts2[b] / total1);
        }
        // Interaction decay fitted on the second half of the run.
        std::vector<double> t, i1, i2;
        for (std::size_t i = 0; i < res.reports.size(); ++i) {
            if (res.reports[i].t < 0.25 * cfg.t_end) continue;
            t.push_back(res.reports[i].t);
            i1.push_back(res.reports[i].inter1);
            i2.push_back(res.reports[i].inter2);
        }
        if (t.size() >= 4) {
            sum.add("inter1_rate", fit_decay_rate(t, i1));
            sum.add("inter2_rate", fit_decay_rate(t, i2));
        }
    }

    const std::string sum_path = cfg.out_dir + "/" + sum.name + "_summary.json";
    write_file_atomic(sum_path, sum.to_json());
    sum.files.push_back(sum_path);
    return sum;
}

}  // namespace

RunSummary run_simulate(const ExperimentConfig& cfg) {
    return run_evolution(cfg, false);
}

RunSummary run_contract(const ExperimentConfig& cfg) {
    return run_evolution(cfg, true);
}

RunSummary run_limit(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.nu_list.empty())
        throw ConfigError("limit: nu_list must not be empty");
    RunSummary sum;
    sum.name = "limit";

    const double eps_min = std::min(cfg.eps1, cfg.eps2);
    const double dy = cfg.limit_dy > 0.0 ? cfg.limit_dy : 0.02 / eps_min;

    struct Row {
        double nu = 0.0;
        bool ok = false;
        std::string error;
        FanDistance dist{};
        double X1nu = 0.0, X2nu = 0.0;
        long steps = 0;
        Field field;      // rescaled variables
        Grid grid_phys;   // physical node positions
        std::vector<double> u0;  // physical initial velocity (self-test)
        std::vector<double> v0;
    };
    std::vector<Row> rows(cfg.nu_list.size());

    auto run_one = [&](int i) {
        Row& row = rows[i];
        row.nu = cfg.nu_list[i];
        try {
            ExperimentConfig c = cfg;
            // Rescaled domain: wide enough for the layers over [0, T/nu].
            c.grid.auto_domain = true;
            CoupledSetup probe = build_setup(c, row.nu);
            const double span = probe.grid.x_max - probe.grid.x_min;
            int n = static_cast<int>(std::ceil(span / dy));
            n = std::min(n, 20000);
            c.grid.n = n;
            const CoupledSetup setup = build_setup(c, row.nu);
            const double t_int = cfg.t_end / row.nu;
            SimulationResult res = run_coupled(
                setup, t_int, 0.0,
                std::max(1, cfg.report_every), cfg.delta1, false);

            row.X1nu = row.nu * res.shifts.X1;
            row.X2nu = row.nu * res.shifts.X2;
            // Physical samples: x = nu * y with the same nodal values.
            std::vector<double> xs(res.field.v.size());
            for (std::size_t jx = 0; jx < xs.size(); ++jx)
                xs[jx] = row.nu * res.field.grid.x(static_cast<int>(jx));
            row.dist = fan_distance(xs, res.field.v, res.field.h, setup.fan,
                                    cfg.t_end, row.X1nu, row.X2nu);
            row.steps = res.n_steps;
            row.grid_phys = Grid{xs.front(), xs.back(),
                                 static_cast<int>(xs.size()) - 1};
            row.field = res.field;
            row.v0 = setup.init.v;
            row.u0 = bd_inverse(setup.init.v, setup.init.h,
                                setup.init.grid.dx(), cfg.gas, 1.0);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    };
    parallel_for_indexed(static_cast<int>(rows.size()), cfg.threads, run_one);

    std::ostringstream table;
    table.precision(17);
    table << "nu,status,l1_v,l2_h,rel_entropy,x1_nu,x2_nu,steps\n";
    bool monotone = true;
    double prev_l1 = -1.0;
    int n_failed = 0;
    for (const auto& row : rows) {
        table << row.nu << ',' << (row.ok ? "ok" : "failed") << ',';
        if (row.ok) {
            table << row.dist.l1_v << ',' << row.dist.l2_h << ','
                  << row.dist.rel_entropy << ',' << row.X1nu << ',' << row.X2nu
                  << ',' << row.steps << '\n';
            if (prev_l1 >= 0.0 && !(row.dist.l1_v < prev_l1)) monotone = false;
            prev_l1 = row.dist.l1_v;
        } else {
            table << ",,,,," << '\n';
            ++n_failed;
        }
    }
    const std::string table_path = cfg.out_dir + "/limit_table.csv";
    write_file_atomic(table_path, table.str());
    sum.files.push_back(table_path);

    sum.add("n_failed", n_failed);
    sum.add("l1_monotone", monotone && n_failed == 0 ? 1.0 : 0.0);
    for (const auto& row : rows) {
        if (!row.ok) continue;
        sum.add("l1_v_nu_" + std::to_string(row.nu), row.dist.l1_v);
    }

    // nu-scaling self-test: raw (v,u) run at physical nu against the
    // rescaled nu=1 run, on the same physical nodes.
    if (!rows.empty() && rows.front().ok) {
        const Row& row = rows.front();
        const double nu = row.nu;
        RawField rf;
        rf.grid = row.grid_phys;
        rf.v = row.v0;
        rf.u = row.u0;
        rf.far_left = State{cfg.v_minus, cfg.u_minus};
        rf.far_right = State{row.field.v.back(), row.u0.back()};
        const double dxp = rf.grid.dx();
        double t = 0.0;
        while (t < cfg.t_end - 1e-14) {
            double max_speed = 0.0, max_diff = 0.0;
            for (double vv : rf.v) {
                const double dp = -pressure_slope(vv, cfg.gas);
                max_speed = std::max(max_speed, std::sqrt(dp));
                max_diff = std::max(max_diff,
                                    nu * cfg.gas.b * std::pow(vv, -cfg.gas.alpha - 1.0));
            }
            double dt = std::min(cfg.c_cfl * dxp / max_speed,
                                 cfg.c_diff * dxp * dxp / max_diff);
            dt = std::min(dt, cfg.t_end - t);
            raw_step(rf, dt, cfg.gas, nu);
            t += dt;
        }
        const std::vector<double> h_raw =
            bd_transform(rf.v, rf.u, dxp, cfg.gas, nu);
        double v_l2 = 0.0, h_l2 = 0.0, ref = 0.0;
        for (std::size_t j = 0; j < rf.v.size(); ++j) {
            const double dv = rf.v[j] - row.field.v[j];
            const double dh = h_raw[j] - row.field.h[j];
            v_l2 += dv * dv;
            h_l2 += dh * dh;
            ref += (rf.v[j] - cfg.v_minus) * (rf.v[j] - cfg.v_minus);
        }
        v_l2 = std::sqrt(v_l2 * dxp);
        h_l2 = std::sqrt(h_l2 * dxp);
        sum.add("selftest_nu", nu);
        sum.add("selftest_v_l2", v_l2);
        sum.add("selftest_h_l2", h_l2);
    }

    const std::string sum_path = cfg.out_dir + "/limit_summary.json";
    write_file_atomic(sum_path, sum.to_json());
    sum.files.push_back(sum_path);
    return sum;
}

RunSummary run_poincare(const ExperimentConfig& cfg) {
    cfg.validate();
    RunSummary sum;
    sum.name = "poincare";
    std::vector<double> deltas = cfg.poincare_delta;
    if (deltas.empty()) deltas = {0.005, 0.01, 0.05, 0.1, 0.2, 0.5};
    std::vector<double> c1s = cfg.poincare_c1;
    if (c1s.empty()) c1s = {1.0, 5.0, 10.0};

    const int n_cells = static_cast<int>(deltas.size() * c1s.size());
    std::vector<ViolationSearchResult> cells(n_cells);
    SamplerConfig scfg;
    auto run_cell = [&](int i) {
        const double delta = deltas[i % deltas.size()];
        const double c1 = c1s[i / deltas.size()];
        cells[i] = search_violations(scfg, delta, c1, cfg.poincare_samples,
                                     mix_seed(cfg.seed, i));
    };
    parallel_for_indexed(n_cells, cfg.threads, run_cell);

    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,delta,c1,max_lhs,n_violations\n";
    for (int i = 0; i < n_cells; ++i) {
        csv << cells[i].seed << ',' << deltas[i % deltas.size()] << ','
            << c1s[i / deltas.size()] << ',' << cells[i].max_lhs << ','
            << cells[i].n_violations << '\n';
    }
    const std::string csv_path = cfg.out_dir + "/poincare_map.csv";
    write_file_atomic(csv_path, csv.str());
    sum.files.push_back(csv_path);

    // Empirical violation boundary per C1: smallest delta with a positive LHS.
    for (std::size_t c = 0; c < c1s.size(); ++c) {
        double boundary = std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            const auto& cell = cells[c * deltas.size() + d];
            if (cell.max_lhs > 0.0) boundary = std::min(boundary, deltas[d]);
        }
        sum.add("violation_boundary_c1_" + std::to_string(c1s[c]),
                std::isinf(boundary) ? -1.0 : boundary);
    }
    const std::string sum_path = cfg.out_dir + "/poincare_summary.json";
    write_file_atomic(sum_path, sum.to_json());
    sum.files.push_back(sum_path);
    return sum;
}

RunSummary run_check(const ExperimentConfig& cfg) {
    cfg.validate();
    RunSummary sum;
    sum.name = "check";
    const GasModel& g = cfg.gas;
    std::mt19937_64 rng(mix_seed(cfg.seed, 0xC0FFEE));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool all_ok = true;
    auto verdict = [&](const std::string& key, bool ok) {
        sum.add(key, ok ? 1.0 : 0.0);
        all_ok = all_ok && ok;
    };

    // entropy derivative against centered finite differences
    {
        bool ok = true;
        const double step = 1e-4;
        for (int i = 0; i < 100; ++i) {
            const double v = 0.5 + 2.5 * unif(rng);
            const double fd =
                (entropy_Q(v + step, g) - entropy_Q(v - step, g)) / (2 * step);
            if (std::abs(fd + pressure(v, g)) > 1e-6) ok = false;
        }
        verdict("gas_entropy_slope", ok);
    }
    // pressure round trip
    {
        bool ok = true;
        for (int i = 0; i < 100; ++i) {
            const double p = 0.1 + 9.9 * unif(rng);
            const double back = pressure(pressure_inverse(p, g), g);
            if (std::abs(back - p) > 1e-13 * p) ok = false;
        }
        verdict("gas_pressure_roundtrip", ok);
    }
    // triple identity for relative functionals
    {
        bool ok = true;
        for (int i = 0; i < 1000; ++i) {
            const double u = 0.5 + 2.5 * unif(rng);
            const double v = 0.5 + 2.5 * unif(rng);
            const double w = 0.5 + 2.5 * unif(rng);
            const double lhs = rel_Q(u, w, g) + rel_Q(w, v, g);
            const double rhs = rel_Q(u, v, g) +
                               (-pressure(w, g) + pressure(v, g)) * (w - u);
            if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs))) ok = false;
        }
        verdict("gas_triple_identity", ok);
    }
    // local lower bound sampling
    {
        std::vector<std::pair<double, double>> samples;
        for (int i = 0; i < 2000; ++i) {
            const double w = 1.0 + 0.05 * (2.0 * unif(rng) - 1.0);
            const double dp = 0.05 * (2.0 * unif(rng) - 1.0);
            samples.emplace_back(pressure_inverse(pressure(w, g) + dp, g), w);
        }
        const InequalityReport rep = check_inequality_suite(samples, g, 1.0);
        verdict("gas_local_bound", rep.local_violations == 0);
    }
    // Rankine-Hugoniot residuals and Lax ordering
    {
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            const double e1 = 0.3 * unif(rng), e2 = 0.3 * unif(rng);
            const WaveFan fan = build_fan(State{1.0, 0.0}, e1, e2, g);
            if (rh_residuals(fan).max_abs() > 1e-10) ok = false;
            if (!(fan.left.v >= fan.middle.v && fan.left.u >= fan.middle.u &&
                  fan.middle.v <= fan.right.v && fan.middle.u >= fan.right.u))
                ok = false;
            if (!(fan.sigma1 < 0.0 && fan.sigma2 > 0.0) && (e1 > 0 || e2 > 0))
                ok = false;
        }
        verdict("riemann_rh_lax", ok);
    }
    // shift branch equivalence
    {
        bool ok = true;
        const WaveFan fan = build_fan(State{1.0, 0.0}, 0.1, 0.1, g);
        std::normal_distribution<double> gauss(0.0, 0.02);
        for (int i = 0; i < 10000; ++i) {
            const double y1 = gauss(rng), y2 = gauss(rng), jb = gauss(rng) * 10;
            const ShiftRates a = shift_rhs(y1, y2, jb, fan);
            const ShiftRates b = shift_rhs_explicit(y1, y2, jb, fan);
            if (std::abs(a.dX1 - b.dX1) >
                    1e-12 * (1.0 + std::abs(a.dX1)) ||
                std::abs(a.dX2 - b.dX2) > 1e-12 * (1.0 + std::abs(a.dX2)))
                ok = false;
            if (a.branch1 != b.branch1 || a.branch2 != b.branch2) ok = false;
        }
        verdict("shift_branch_equivalence", ok);
    }
    // profile residual and weight mass
    {
        const WaveFan fan = build_fan(State{1.0, 0.0}, 0.1, 0.1, g);
        CompositeWave waves = make_composite(fan, g);
        const ProfileResidual res = profile_residual(waves.wave1);
        verdict("profile_residual", res.max_abs() < 1e-6);
        WeightPair wp{cfg.lambda, &waves};
        // \int |da1| over the profile grid
        const ShockProfile& p1 = waves.wave1;
        std::vector<double> da(p1.v.size());
        for (std::size_t j = 0; j < p1.v.size(); ++j)
            da[j] = std::abs(wp.da1_of_xi(
                p1.xi0 + p1.dxi * static_cast<double>(j)));
        const double mass = trapezoid(da, p1.dxi);
        verdict("weight_mass", std::abs(mass - cfg.lambda) < 1e-6 * cfg.lambda);
    }
    // budget identity on a perturbed field + mutation probe
    {
        const WaveFan fan = build_fan(State{1.0, 0.0}, 0.1, 0.1, g);
        CompositeWave waves = make_composite(fan, g);
        WeightPair wp{cfg.lambda, &waves};
        Grid grid{-80.0, 80.0, 800};
        Field f = make_field_from_composite(waves, grid, 0.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int j = 1; j < grid.n; ++j) {
            const double x = grid.x(j);
            f.v[j] += 0.05 * std::exp(-x * x / 16.0) * gauss(rng) * 0.2;
            f.h[j] += 0.05 * std::exp(-(x - 3) * (x - 3) / 16.0) * gauss(rng) * 0.2;
        }
        const WaveFrame frame = build_frame(grid, waves, wp, 0.5, 0.1, -0.1);
        EntropyReport rep = compute_budget(f, frame, cfg.delta1);
        verdict("budget_identity", rep.identity_residual() < 1e-10);
        verdict("budget_goods_sign", rep.goods_nonnegative());
        EntropyReport mutated = rep;
        mutated.g2[0] = -mutated.g2[0];  // injected sign flip must be caught
        verdict("budget_mutation_detected",
                mutated.g2[0] == 0.0 || mutated.identity_residual() > 1e-10);
        // truncation ordering
        const TruncatedField tf = truncate(f, frame, cfg.delta1);
        bool mono = true;
        for (std::size_t j = 0; j < tf.bar_v.size(); ++j) {
            if (rel_Q(f.v[j], frame.vt[j], g) <
                rel_Q(tf.bar_v[j], frame.vt[j], g) - 1e-14)
                mono = false;
        }
        verdict("truncation_ordering", mono);
        // partition sums to one
        ShiftState s;
        s.X1 = -0.5 * fan.sigma1;
        s.X2 = -0.5 * fan.sigma2;
        s.t = 1.0;
        const PartitionPhi phi = partition_phi(1.0, s, fan);
        bool sum_one = true;
        for (int k = 0; k < 1000; ++k) {
            const double x = -100.0 + 0.2 * k;
            if (std::abs(phi.phi1(x) + phi.phi2(x) - 1.0) > 1e-15)
                sum_one = false;
        }
        verdict("partition_sum", sum_one);
    }
    // constant state is a fixed point of the solver
    {
        Grid grid{-10.0, 10.0, 200};
        Field f;
        f.grid = grid;
        f.v.assign(grid.n + 1, 1.3);
        f.h.assign(grid.n + 1, 0.7);
        f.far_left = f.far_right = BDState{1.3, 0.7};
        for (int i = 0; i < 20; ++i) step(f, 1e-3, g, 1.0);
        bool ok = true;
        for (int j = 0; j <= grid.n; ++j)
            if (f.v[j] != 1.3 || f.h[j] != 0.7) ok = false;
        verdict("solver_constant_fixed_point", ok);
    }
    // Poincare closed forms
    {
        TestProfileW zero;
        verdict("poincare_zero", winst_lhs(zero, 0.01, 256) == 0.0);
        TestProfileW cw;
        cw.c0 = -0.8;
        const double c = cw.c0, delta = 0.02;
        const double closed = -(c * c + 2 * c) * (c * c + 2 * c) / delta +
                              (1 + delta) * c * c + (2.0 / 3.0) * c * c * c +
                              delta * std::abs(c * c * c);
        verdict("poincare_constant_closed_form",
                std::abs(winst_lhs(cw, delta, 512) - closed) < 1e-10);
    }

    sum.status = all_ok ? "ok" : "failed";
    const std::string sum_path = cfg.out_dir + "/check_summary.json";
    write_file_atomic(sum_path, sum.to_json());
    sum.files.push_back(sum_path);
    if (!all_ok) throw NumericalError("check: one or more invariant suites failed");
    return sum;
}

}  // namespace shocklab
