#pragma once

// File formats: trajectory CSV, two-column plot series and JSON records.
// Every number is written with 17 significant digits so files re-parse to
// the same doubles.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/integrator.hpp"
#include "schubart/model.hpp"
#include "schubart/shooting.hpp"
#include "schubart/verify.hpp"

namespace schubart::io {

inline constexpr const char* kTrajectoryHeader = "s,t,Q1,Q2,P1,P2,x1,x2,v1,v2,gamma";

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, MassRatio m)
{
    os << kTrajectoryHeader << '\n';
    for (const auto& st : traj.samples) {
        const auto [x1, x2] = positions(st);
        os << format_double(st.s) << ',' << format_double(st.t) << ',' << format_double(st.Q1) << ','
           << format_double(st.Q2) << ',' << format_double(st.P1) << ',' << format_double(st.P2) << ','
           << format_double(x1) << ',' << format_double(x2) << ',';
        if (const auto c = to_cartesian(st, m)) os << format_double(c->v1) << ',' << format_double(c->v2);
        else os << ',';
        os << ',' << format_double(gamma(st, m)) << '\n';
    }
}

/// Reads back (s, t, Q1, Q2, P1, P2); the derived columns are ignored.
inline Trajectory read_trajectory_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorKind::InvalidArgument, "empty trajectory file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader) throw Error(ErrorKind::InvalidArgument, "unexpected trajectory header: " + line);

    Trajectory traj;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() < 6) throw Error(ErrorKind::InvalidArgument, "row " + std::to_string(row) + " is short");
        double v[6];
        for (int i = 0; i < 6; ++i) {
            char* end = nullptr;
            v[i] = std::strtod(fields[i].c_str(), &end);
            if (fields[i].empty() || *end != '\0') {
                throw Error(ErrorKind::InvalidArgument, "row " + std::to_string(row) + ": bad number '" + fields[i] + "'");
            }
        }
        traj.samples.push_back({v[2], v[3], v[4], v[5], v[1], v[0]});
    }
    return traj;
}

inline void write_trajectory_file(const std::filesystem::path& path, const Trajectory& traj, MassRatio m)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trajectory_csv(os, traj, m);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline Trajectory read_trajectory_file(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_trajectory_csv(is);
}

/// One "s value" file per regularized variable (Q1.dat, Q2.dat, P1.dat, P2.dat).
inline void write_plot_data(const std::filesystem::path& dir, const Trajectory& traj)
{
    std::filesystem::create_directories(dir);
    const char* names[] = {"Q1", "Q2", "P1", "P2"};
    for (int k = 0; k < 4; ++k) {
        std::ofstream os(dir / (std::string(names[k]) + ".dat"));
        if (!os) throw std::runtime_error("cannot write plot data in " + dir.string());
        for (const auto& st : traj.samples) {
            const double v = k == 0 ? st.Q1 : k == 1 ? st.Q2 : k == 2 ? st.P1 : st.P2;
            os << format_double(st.s) << ' ' << format_double(v) << '\n';
        }
    }
}

using nlohmann::json;

inline json to_json(const RegularizedState& st)
{
    return {{"Q1", st.Q1}, {"Q2", st.Q2}, {"P1", st.P1}, {"P2", st.P2}, {"t", st.t}, {"s", st.s}};
}

inline json to_json(const EventHit& hit)
{
    return {{"kind", to_string(hit.kind)},
            {"s", hit.s},
            {"state", to_json(hit.state)},
            {"crossing_derivative", hit.crossing_derivative}};
}

inline json trajectory_summary(const Trajectory& traj, MassRatio m)
{
    json events = json::array();
    for (const auto& e : traj.events) events.push_back(to_json(e));
    double gmax = 0.0;
    for (const auto& st : traj.samples) gmax = std::max(gmax, std::abs(gamma(st, m)));
    json j{{"m", m.value()}, {"samples", traj.samples.size()}, {"events", events}, {"gamma_max", gmax}};
    for (const auto& e : traj.events) {
        if (e.kind == EventKind::SBC) {
            j["s1"] = e.s;
            j["t1"] = e.state.t;
            break;
        }
    }
    if (!traj.samples.empty()) j["final"] = to_json(traj.samples.back());
    return j;
}

inline json to_json(const ShootingResult& r)
{
    json trace = json::array();
    for (const auto& p : r.bracket_trace) trace.push_back({{"R", p.R}, {"residual", p.residual}});
    return {{"m", r.m},
            {"R_star", r.R_star},
            {"s1", r.s1},
            {"t1", r.t1},
            {"residual", r.residual},
            {"iterations", r.iterations},
            {"sbc_state", to_json(r.sbc_state)},
            {"sbc_abs_P1", std::abs(r.sbc_state.P1)},
            {"bracket_trace", trace}};
}

inline json to_json(const PeriodicOrbit& orbit)
{
    json j = to_json(orbit.result);
    j["period_s"] = orbit.period_s;
    j["period_t"] = orbit.period_t;
    json cps = json::array();
    for (const auto& cp : orbit.checkpoints) {
        cps.push_back({{"s", cp.s},
                       {"state", to_json(cp.state)},
                       {"expected", {cp.expected[0], cp.expected[1], cp.expected[2], cp.expected[3]}},
                       {"deviation", cp.deviation}});
    }
    j["checkpoints"] = cps;
    return j;
}

inline json to_json(const VerificationReport& rep)
{
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"threshold", c.threshold}});
    }
    return {{"checks", checks},
            {"worst_gamma", rep.worst_gamma},
            {"worst_energy", rep.worst_energy},
            {"crossval_max_dev", rep.crossval_max_dev},
            {"passed", rep.all_passed()}};
}

} // namespace schubart::io
