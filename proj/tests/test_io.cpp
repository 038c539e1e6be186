#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "schubart/catalog.hpp"
#include "schubart/io.hpp"

using namespace schubart;

TEST(Io, CsvHeaderAndCollisionRows)
{
    const MassRatio m(1.0);
    IntegratorConfig cfg;
    const auto traj = integrate(bc_initial_state(2.295, m), m, cfg, StopCondition::first_sbc());
    std::stringstream ss;
    io::write_trajectory_csv(ss, traj, m);

    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "s,t,Q1,Q2,P1,P2,x1,x2,v1,v2,gamma");
    std::getline(ss, line);
    // Initial binary collision: velocities undefined.
    EXPECT_EQ(line, "0,0,2.2949999999999999,0,0,2,5.2670249999999994,0,,,0");

    std::string last, cur;
    while (std::getline(ss, cur)) last = cur;
    EXPECT_NE(last.find(",,,"), std::string::npos) << last; // SBC row
}

TEST(IoProperty, CsvRoundTripIsExact)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Trajectory traj;
    double s = 0.0;
    for (int i = 0; i < 500; ++i) {
        s += std::abs(u(rng)) * 1e-3 + 1e-9;
        traj.samples.push_back({u(rng), u(rng), u(rng), u(rng), std::abs(u(rng)) * 1e3, s});
    }
    std::stringstream ss;
    io::write_trajectory_csv(ss, traj, MassRatio(1.3));
    const auto back = io::read_trajectory_csv(ss);
    ASSERT_EQ(back.samples.size(), traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) EXPECT_EQ(back.samples[i], traj.samples[i]);
}

TEST(Io, CsvRejectsMalformedInput)
{
    std::stringstream bad_header("a,b,c\n1,2,3\n");
    EXPECT_THROW(io::read_trajectory_csv(bad_header), Error);
    std::stringstream bad_number(std::string(io::kTrajectoryHeader) + "\n0,0,x,0,0,2,1,0,,,0\n");
    EXPECT_THROW(io::read_trajectory_csv(bad_number), Error);
    std::stringstream empty;
    EXPECT_THROW(io::read_trajectory_csv(empty), Error);
}

TEST(Io, PlotDataFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "schubart_plot_test";
    std::filesystem::remove_all(dir);
    Trajectory traj;
    traj.samples.push_back({1.0, 0.0, 0.0, 2.0, 0.0, 0.0});
    traj.samples.push_back({0.5, 0.25, -1.0, 1.5, 0.1, 0.5});
    io::write_plot_data(dir, traj);
    for (const char* name : {"Q1", "Q2", "P1", "P2"}) EXPECT_TRUE(std::filesystem::exists(dir / (std::string(name) + ".dat")));
    std::ifstream is(dir / "P1.dat");
    std::string l1, l2;
    std::getline(is, l1);
    std::getline(is, l2);
    EXPECT_EQ(l1, "0 0");
    EXPECT_EQ(l2, "0.5 -1");
    std::filesystem::remove_all(dir);
}

TEST(Io, JsonDoublesRoundTrip)
{
    ShootingResult r;
    r.m = 1.0;
    r.R_star = 2.2955922587175395;
    r.residual = -3.1e-13;
    r.bracket_trace = {{0.57735026918962573, 4.7001027642237}};
    const auto j = nlohmann::json::parse(io::to_json(r).dump());
    EXPECT_EQ(j["R_star"].get<double>(), r.R_star);
    EXPECT_EQ(j["residual"].get<double>(), r.residual);
    EXPECT_EQ(j["bracket_trace"][0]["R"].get<double>(), 0.57735026918962573);
}

TEST(Catalog, SweepKeepsGridOrderAndIsolatesFailures)
{
    const ShootingConfig cfg;
    const std::vector<double> grid{2.0, -1.0, 0.5, 1.0};
    const auto recs = sweep(grid, cfg, 3);
    ASSERT_EQ(recs.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(recs[i].m, grid[i]);
    EXPECT_FALSE(recs[1].ok);
    EXPECT_FALSE(recs[1].error.empty());
    for (std::size_t i : {0u, 2u, 3u}) {
        EXPECT_TRUE(recs[i].ok) << recs[i].error;
        EXPECT_LE(std::abs(recs[i].residual), cfg.r_tol);
        EXPECT_NEAR(recs[i].period_s, 4.0 * recs[i].s1, 1e-15 * recs[i].period_s);
        EXPECT_GT(recs[i].a_root, 1.0);
    }

    // A singleton sweep reproduces a direct solve.
    const auto single = sweep({1.0}, cfg, 1);
    const auto direct = find_periodic_R(MassRatio(1.0), cfg);
    EXPECT_EQ(single[0].R_star, direct.R_star);
    EXPECT_EQ(single[0].R_star, recs[3].R_star);

    const auto j = to_json(recs[3]);
    for (const char* key : {"m", "R_star", "s1", "t1", "period_s", "period_t", "residual", "a_root", "a0_bound"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(to_json(recs[1])["status"], "failed");
}
