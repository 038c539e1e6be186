#pragma once

// Family of orbits over a grid of mass ratios. Each mass ratio is solved
// independently; a failure is recorded in its record and does not stop the
// sweep.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "schubart/bounds.hpp"
#include "schubart/shooting.hpp"

namespace schubart {

struct CatalogRecord
{
    double m{0.0};
    bool ok{false};
    std::string error;
    double R_star{0.0};
    double s1{0.0};
    double t1{0.0};
    double period_s{0.0};
    double period_t{0.0};
    double residual{0.0};
    double a_root{0.0};
    double a0_bound{0.0};
};

inline CatalogRecord solve_record(double m_value, const ShootingConfig& cfg)
{
    CatalogRecord rec;
    rec.m = m_value;
    try {
        const MassRatio m(m_value);
        rec.a_root = solve_turning_quartic(m);
        rec.a0_bound = a0_bound_at(rec.a_root, m);
        const auto res = find_periodic_R(m, cfg);
        const auto orbit = build_period(res, cfg);
        rec.R_star = res.R_star;
        rec.s1 = res.s1;
        rec.t1 = res.t1;
        rec.residual = res.residual;
        rec.period_s = orbit.period_s;
        rec.period_t = orbit.period_t;
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

/// Records come back in grid order whatever the thread count.
inline std::vector<CatalogRecord> sweep(const std::vector<double>& grid, const ShootingConfig& cfg,
                                        unsigned threads = 0)
{
    std::vector<CatalogRecord> out(grid.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, grid.size())));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) out[i] = solve_record(grid[i], cfg);
    };
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    return out;
}

inline nlohmann::json to_json(const CatalogRecord& r)
{
    nlohmann::json j{{"m", r.m}, {"status", r.ok ? "ok" : "failed"}};
    if (r.ok) {
        j.update({{"R_star", r.R_star},
                  {"s1", r.s1},
                  {"t1", r.t1},
                  {"period_s", r.period_s},
                  {"period_t", r.period_t},
                  {"residual", r.residual},
                  {"a_root", r.a_root},
                  {"a0_bound", r.a0_bound}});
    } else {
        j["error"] = r.error;
        if (r.a_root > 0.0) {
            j["a_root"] = r.a_root;
            j["a0_bound"] = r.a0_bound;
        }
    }
    return j;
}

} // namespace schubart
