// Command-line front end: simulate, find-orbit, sweep, bounds, verify.
//
// Exit status: 0 success, 1 bad arguments or I/O, 2 integration failure,
// 3 bracketing/convergence failure, 4 verification failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "schubart/schubart.hpp"

namespace {

using namespace schubart;
using nlohmann::json;

enum Exit : int { kOk = 0, kArgs = 1, kIntegration = 2, kBracket = 3, kVerify = 4 };

int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidR:
    case ErrorKind::NegativeCoordinate: return kArgs;
    case ErrorKind::CollisionSingularity:
    case ErrorKind::TotalCollapse:
    case ErrorKind::HorizonExceeded:
    case ErrorKind::StepUnderflow:
    case ErrorKind::NoSignChange: return kIntegration;
    case ErrorKind::BracketFailure:
    case ErrorKind::NoConvergence: return kBracket;
    case ErrorKind::CheckpointMismatch:
    case ErrorKind::NoSafeArc: return kVerify;
    }
    return kArgs;
}

struct Common
{
    double m{1.0};
    IntegratorConfig integrator;
    bool json_out{false};
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--m", c.m, "mass ratio of the inner bodies (outer masses are 1)")->capture_default_str();
    cmd->add_option("--rel-tol", c.integrator.rel_tol, "relative tolerance")->capture_default_str();
    cmd->add_option("--abs-tol", c.integrator.abs_tol, "absolute tolerance")->capture_default_str();
    cmd->add_option("--initial-step", c.integrator.initial_step, "initial step in s")->capture_default_str();
    cmd->add_option("--max-step", c.integrator.max_step, "largest step in s")->capture_default_str();
    cmd->add_option("--horizon", c.integrator.s_horizon, "maximum fictitious time")->capture_default_str();
    cmd->add_option("--event-tol", c.integrator.event_tol_s, "collision localization tolerance in s")
        ->capture_default_str();
    cmd->add_flag("--json", c.json_out, "machine-readable summary on standard output");
}

void write_json_file(const std::string& path, const json& j)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << j.dump(2) << '\n';
}

std::string num(double v) { return io::format_double(v); }

int run_simulate(const Common& c, double R, const std::string& out, const std::string& summary_path,
                 const std::string& stop_name, int k_events, double sample_ds, const std::string& plot_dir)
{
    const MassRatio m(c.m);
    IntegratorConfig cfg = c.integrator;
    cfg.sample_ds = sample_ds;

    StopCondition stop = StopCondition::horizon();
    if (stop_name == "sbc") stop = StopCondition::first_sbc();
    else if (stop_name == "bc") stop = StopCondition::first_bc();
    else if (stop_name == "events") stop = StopCondition::kth_event(k_events);

    const Trajectory traj = integrate(bc_initial_state(R, m), m, cfg, stop);
    io::write_trajectory_file(out, traj, m);
    if (!plot_dir.empty()) io::write_plot_data(plot_dir, traj);

    json summary = io::trajectory_summary(traj, m);
    summary["R"] = R;
    summary["trajectory"] = out;
    if (!summary_path.empty()) write_json_file(summary_path, summary);

    if (c.json_out) {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::cout << "samples     " << traj.samples.size() << '\n';
        for (const auto& e : traj.events) {
            std::cout << to_string(e.kind) << "  s = " << num(e.s) << "  t = " << num(e.state.t)
                      << "  Q2 = " << num(e.state.Q2) << "  P1 = " << num(e.state.P1) << "  P2 = " << num(e.state.P2)
                      << '\n';
        }
        std::cout << "gamma max   " << num(summary["gamma_max"].get<double>()) << '\n';
        std::cout << "trajectory  " << out << '\n';
    }
    return kOk;
}

int run_find_orbit(const Common& c, std::optional<double> r_lo, std::optional<double> r_hi, double r_tol,
                   double sample_ds, const std::string& out, const std::string& result_path, const std::string& plot_dir)
{
    const MassRatio m(c.m);
    ShootingConfig cfg;
    cfg.integrator = c.integrator;
    cfg.r_tol = r_tol;

    std::optional<std::pair<double, double>> bracket;
    if (r_lo || r_hi) {
        if (!r_lo || !r_hi) throw Error(ErrorKind::InvalidArgument, "--r-lo and --r-hi must be given together");
        bracket = std::make_pair(*r_lo, *r_hi);
    }
    const ShootingResult res = find_periodic_R(m, cfg, bracket);

    ShootingConfig period_cfg = cfg;
    period_cfg.integrator.sample_ds = sample_ds;
    const PeriodicOrbit orbit = build_period(res, period_cfg);

    io::write_trajectory_file(out, orbit.samples, m);
    if (!plot_dir.empty()) io::write_plot_data(plot_dir, orbit.samples);
    json j = io::to_json(orbit);
    j["trajectory"] = out;
    if (!result_path.empty()) write_json_file(result_path, j);

    if (c.json_out) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "m           " << num(res.m) << '\n'
                  << "R*          " << num(res.R_star) << '\n'
                  << "residual    " << num(res.residual) << '\n'
                  << "s1          " << num(res.s1) << '\n'
                  << "t1          " << num(res.t1) << '\n'
                  << "|P1| at SBC " << num(std::abs(res.sbc_state.P1)) << '\n'
                  << "period s    " << num(orbit.period_s) << '\n'
                  << "period t    " << num(orbit.period_t) << '\n';
        for (std::size_t k = 0; k < 4; ++k) {
            std::cout << "checkpoint " << k + 1 << " s1 deviation " << num(orbit.checkpoints[k].deviation) << '\n';
        }
        std::cout << "trajectory  " << out << '\n';
    }
    return kOk;
}

int run_sweep(const Common& c, const std::vector<double>& grid, unsigned threads, const std::string& out)
{
    ShootingConfig cfg;
    cfg.integrator = c.integrator;
    const auto records = sweep(grid, cfg, threads);

    std::ofstream file;
    if (!out.empty() && out != "-") {
        file.open(out);
        if (!file) throw std::runtime_error("cannot open " + out + " for writing");
    }
    std::ostream& os = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
    for (const auto& r : records) os << to_json(r).dump() << '\n';
    if (!os) throw std::runtime_error("write failed: " + out);

    if (file.is_open() && !c.json_out) {
        for (const auto& r : records) {
            std::cout << "m = " << num(r.m) << "  " << (r.ok ? "R* = " + num(r.R_star) : "failed: " + r.error)
                      << '\n';
        }
    }
    return kOk;
}

int run_bounds(const Common& c, bool numeric)
{
    const MassRatio m(c.m);
    const A0Estimate est = estimate_a0(m, c.integrator, numeric);
    if (c.json_out) {
        json j{{"m", c.m}, {"a_root", est.a_root}, {"a0_analytic_bound", est.analytic_bound}};
        if (est.numeric_threshold) j["numeric_a0"] = *est.numeric_threshold;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "a root            " << num(est.a_root) << '\n'
                  << "A0 analytic bound " << num(est.analytic_bound) << '\n';
        if (est.numeric_threshold) std::cout << "A0 numeric        " << num(*est.numeric_threshold) << '\n';
    }
    return kOk;
}

int run_verify(const Common& c, const std::string& trajectory, const VerifyThresholds& thr)
{
    const MassRatio m(c.m);
    Trajectory traj;
    if (!trajectory.empty()) {
        traj = io::read_trajectory_file(trajectory);
    } else {
        ShootingConfig cfg;
        cfg.integrator = c.integrator;
        const auto res = find_periodic_R(m, cfg);
        ShootingConfig period_cfg = cfg;
        period_cfg.integrator.sample_ds = 1e-4;
        traj = build_period(res, period_cfg).samples;
    }
    const VerificationReport rep = verify_trajectory(traj, m, c.integrator, thr);
    if (c.json_out) {
        std::cout << io::to_json(rep).dump(2) << '\n';
    } else {
        for (const auto& chk : rep.checks) {
            std::cout << (chk.passed ? "PASS " : "FAIL ") << chk.name << "  measured " << num(chk.measured)
                      << "  threshold " << num(chk.threshold) << '\n';
        }
    }
    return rep.all_passed() ? kOk : kVerify;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Schubart-like periodic orbits of the symmetric collinear four-body problem"};
    app.require_subcommand(1);

    Common c_sim, c_find, c_sweep, c_bounds, c_verify;

    auto* sim = app.add_subcommand("simulate", "integrate the regularized flow from a binary collision");
    add_common(sim, c_sim);
    double R = 0.0;
    std::string sim_out = "trajectory.csv", sim_summary, sim_stop = "horizon", sim_plot;
    int sim_k = 1;
    double sim_ds = 0.0;
    sim->add_option("--r", R, "initial outer parameter R (A = R^2)")->required();
    sim->add_option("--out", sim_out, "trajectory CSV path")->capture_default_str();
    sim->add_option("--summary", sim_summary, "write a JSON summary to this path");
    sim->add_option("--stop", sim_stop, "horizon | sbc | bc | events")
        ->check(CLI::IsMember({"horizon", "sbc", "bc", "events"}))
        ->capture_default_str();
    sim->add_option("--events", sim_k, "number of events for --stop events")->check(CLI::PositiveNumber);
    sim->add_option("--sample-ds", sim_ds, "also sample on a uniform grid in s (0 = accepted steps only)");
    sim->add_option("--plot-data", sim_plot, "directory for two-column (s, value) series");

    auto* find = app.add_subcommand("find-orbit", "shoot on R for the periodic orbit");
    add_common(find, c_find);
    std::optional<double> r_lo, r_hi;
    double r_tol = 1e-10, find_ds = 1e-4;
    std::string find_out = "orbit.csv", find_result, find_plot;
    find->add_option("--r-lo", r_lo, "lower end of a manual R bracket");
    find->add_option("--r-hi", r_hi, "upper end of a manual R bracket");
    find->add_option("--r-tol", r_tol, "residual tolerance")->capture_default_str();
    find->add_option("--sample-ds", find_ds, "sample spacing of the period trajectory")->capture_default_str();
    find->add_option("--out", find_out, "period trajectory CSV path")->capture_default_str();
    find->add_option("--result", find_result, "write the JSON result to this path");
    find->add_option("--plot-data", find_plot, "directory for two-column (s, value) series");

    auto* sw = app.add_subcommand("sweep", "solve the orbit for a grid of mass ratios");
    add_common(sw, c_sweep);
    std::vector<double> grid;
    unsigned threads = 0;
    std::string sweep_out = "-";
    sw->add_option("--m-grid", grid, "comma-separated mass ratios")->delimiter(',')->required();
    sw->add_option("--threads", threads, "worker threads (0 = hardware)");
    sw->add_option("--out", sweep_out, "catalog path, one JSON record per line ('-' = stdout)")->capture_default_str();

    auto* bnd = app.add_subcommand("bounds", "turning-point quartic root and A0 bounds");
    add_common(bnd, c_bounds);
    bool numeric = false;
    bnd->add_flag("--numeric", numeric, "also bisect the numerical monotonicity threshold");

    auto* ver = app.add_subcommand("verify", "run the invariant and oracle checks");
    add_common(ver, c_verify);
    std::string ver_traj;
    VerifyThresholds thr;
    ver->add_option("--trajectory", ver_traj, "trajectory CSV to check (omit to solve fresh for --m)");
    ver->add_option("--threshold-gamma", thr.gamma)->capture_default_str();
    ver->add_option("--threshold-energy", thr.energy)->capture_default_str();
    ver->add_option("--threshold-crossval", thr.crossval)->capture_default_str();
    ver->add_option("--threshold-sum", thr.sum_identity)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kArgs;
    }

    try {
        if (sim->parsed()) {
            if (!(R > 0.0)) throw Error(ErrorKind::InvalidR, "--r must be positive");
            return run_simulate(c_sim, R, sim_out, sim_summary, sim_stop, sim_k, sim_ds, sim_plot);
        }
        if (find->parsed()) return run_find_orbit(c_find, r_lo, r_hi, r_tol, find_ds, find_out, find_result, find_plot);
        if (sw->parsed()) return run_sweep(c_sweep, grid, threads, sweep_out);
        if (bnd->parsed()) return run_bounds(c_bounds, numeric);
        if (ver->parsed()) return run_verify(c_verify, ver_traj, thr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kArgs;
    }
    return kArgs;
}
