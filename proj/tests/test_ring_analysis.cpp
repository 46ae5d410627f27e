#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "helpers.hpp"
#include "ringdyn/errors.hpp"
#include "ringdyn/ring_analysis.hpp"
#include "ringdyn/trajectory.hpp"

using namespace ringdyn;
using namespace ringdyn::testutil;

namespace {

// Builds a flat trajectory from prescribed per-body angle histories on a
// circle of prescribed radius; only positions matter to the ring analysis.
Trajectory angle_trajectory(double t0, double t1, double dt,
                            const std::function<std::vector<double>(double)>& angles,
                            const std::function<double(double)>& radius) {
    Trajectory traj;
    traj.space = Trajectory::Space::Flat;
    for (double t = t0; t <= t1 + 1e-12; t += dt) {
        const std::vector<double> th = angles(t);
        const double r = radius(t);
        traj.n = th.size();
        traj.times.push_back(t);
        std::vector<double> pos, vel;
        for (double a : th) {
            pos.push_back(r * std::cos(a));
            pos.push_back(r * std::sin(a));
            vel.push_back(0.0);
            vel.push_back(0.0);
        }
        traj.positions.push_back(pos);
        traj.velocities.push_back(vel);
        traj.masses.push_back(std::vector<double>(th.size(), 1.0));
    }
    return traj;
}

}  // namespace

TEST_CASE("flat decomposition recovers a square and its center variant") {
    FlatState s = ring_flat(4, 2.0);
    const RingDecomposition d = decompose_flat(s, 1e-9);
    CHECK(!d.with_center);
    CHECK(d.r == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(d.angles.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(d.angles[i] == doctest::Approx(kTwoPi * i / 4.0).epsilon(1e-12));

    s.positions.push_back({0.0, 0.0});
    s.velocities.push_back({0.0, 0.0});
    const RingDecomposition dc = decompose_flat(s, 1e-9);
    CHECK(dc.with_center);
    REQUIRE(dc.center_index.has_value());
    CHECK(*dc.center_index == 4);
    CHECK(dc.angles.size() == 4);
}

TEST_CASE("inconsistent radii are rejected as not a ring") {
    FlatState s;
    s.positions = {{1.0, 0.0}, {-0.5, 0.8660254037844386}, {-0.55, -0.9526279441628825}};
    s.velocities = {{0, 0}, {0, 0}, {0, 0}};
    CHECK_THROWS_AS(decompose_flat(s, 1e-6), NotARingError);
}

TEST_CASE("curved decomposition recovers a ring and a pole body") {
    CurvedState s = curved_ring(1, 3, 0.8, 0.0);
    const RingDecomposition d = ring_decompose_curved(s, 1e-9);
    CHECK(d.r == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(d.z == doctest::Approx(0.6).epsilon(1e-12));
    REQUIRE(d.angles.size() == 3);
    CHECK(d.angles[1] - d.angles[0] == doctest::Approx(kTwoPi / 3.0).epsilon(1e-12));

    s.positions.push_back({0.0, 0.0, 1.0});
    s.velocities.push_back({0.0, 0.0, 0.0});
    const RingDecomposition dp = ring_decompose_curved(s, 1e-9);
    CHECK(dp.with_center);
    REQUIRE(dp.center_index.has_value());
    CHECK(*dp.center_index == 3);
    CHECK(dp.angles.size() == 3);

    CurvedState bad = curved_ring(1, 3, 0.8, 0.0);
    bad.positions[1].z += 1e-5;
    bad.positions[1].x *= std::sqrt(1.0 - bad.positions[1].z * bad.positions[1].z) / 0.8;
    bad.positions[1].y *= std::sqrt(1.0 - bad.positions[1].z * bad.positions[1].z) / 0.8;
    CHECK_THROWS_AS(ring_decompose_curved(bad, 1e-6), NotARingError);
}

TEST_CASE("smallest gap and its index follow the cyclic rules") {
    const RingDecomposition pent = decompose_flat(ring_flat(5, 1.0), 1e-9);
    const GapInfo gp = gap_function(pent);
    CHECK(gp.mu == doctest::Approx(kTwoPi / 5.0).epsilon(1e-12));
    CHECK(gp.argmin == 0);  // ties resolve to the first pair

    RingDecomposition three;
    three.r = 1.0;
    three.angles = {0.0, M_PI / 2.0, M_PI};
    three.order = {0, 1, 2};
    const GapInfo g3 = gap_function(three);
    CHECK(g3.mu == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(g3.argmin == 0);

    RingDecomposition pair;
    pair.r = 1.0;
    pair.angles = {0.0, 3.0 * M_PI / 2.0};
    pair.order = {0, 1};
    const GapInfo g2 = gap_function(pair);
    CHECK(g2.mu == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(g2.argmin == 1);  // the wraparound gap is the small one
}

TEST_CASE("cyclic gaps always sum to the full circle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int rep = 0; rep < 50; ++rep) {
        FlatState s;
        const std::size_t n = 2 + rep % 6;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = angle(rng);
            s.positions.push_back({1.7 * std::cos(a), 1.7 * std::sin(a)});
            s.velocities.push_back({0.0, 0.0});
        }
        RingDecomposition d;
        try {
            d = decompose_flat(s, 1e-9);
        } catch (const NotARingError&) {
            continue;  // coincident random angles
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < d.angles.size(); ++j) {
            const double next = j + 1 < d.angles.size() ? d.angles[j + 1] : d.angles[0] + kTwoPi;
            sum += next - d.angles[j];
        }
        CHECK(sum == doctest::Approx(kTwoPi).epsilon(1e-9));
    }
}

TEST_CASE("regularity is scale and rotation invariant") {
    for (double r : {1.0, 5.0})
        for (double phase : {0.0, 1.234}) {
            const RingDecomposition hex = decompose_flat(ring_flat(6, r, phase), 1e-9);
            CHECK(is_regular(hex, 1e-6));
        }

    const RingDecomposition pair = decompose_flat(ring_flat(2, 1.0, 0.4), 1e-9);
    CHECK(is_regular(pair, 1e-6));

    FlatState skew;
    const double base = kTwoPi / 3.0;
    for (double a : {0.0, base - 0.01, 2.0 * base - 0.0}) {
        skew.positions.push_back({std::cos(a), std::sin(a)});
        skew.velocities.push_back({0.0, 0.0});
    }
    CHECK(!is_regular(decompose_flat(skew, 1e-9), 1e-3));
}

TEST_CASE("a rigidly rotating regular ring has a flat gap series") {
    const std::size_t n = 5;
    const Trajectory traj = angle_trajectory(
        0.0, 3.0, 0.01,
        [&](double t) {
            std::vector<double> th;
            for (std::size_t i = 0; i < n; ++i) th.push_back(0.3 * t + kTwoPi * i / n);
            return th;
        },
        [](double t) { return 1.0 + 0.2 * std::sin(t); });

    const GapSeries series = gap_series(traj, 1e-6);
    REQUIRE(series.times.size() == traj.samples());
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        CHECK(std::abs(series.mu[k] - kTwoPi / n) < 1e-9);
        CHECK(series.argmin[k] == series.argmin[0]);
        CHECK(series.interval_id[k] == 0);
    }
    CHECK(series.break_times.empty());
    for (double w : series.weighted_rate)
        if (!std::isnan(w)) CHECK(std::abs(w) < 1e-8);
    CHECK(detect_local_minima(series, 5).empty());
}

TEST_CASE("quadratic gap histories give exact rates and a downward break") {
    // three bodies on the unit circle with quadratic gap histories; the two
    // leading gaps cross at t = 2 - sqrt(0.4) ~ 1.3675
    auto g1 = [](double t) { return 1.9 + 0.1 * t - 0.1 * t * t; };
    auto g2 = [](double t) { return 2.08 - 0.1 * t - 0.05 * t * t; };
    auto d_g1 = [](double t) { return 0.1 - 0.2 * t; };
    auto d_g2 = [](double t) { return -0.1 - 0.1 * t; };
    const double t_cross = 2.0 - std::sqrt(0.4);

    const Trajectory traj = angle_trajectory(
        0.0, 2.0, 0.01,
        [&](double t) { return std::vector<double>{0.0, g1(t), g1(t) + g2(t)}; },
        [](double) { return 1.0; });

    const GapSeries series = gap_series(traj, 1e-6);

    // exactly one argmin change, at the first sample past the crossing
    REQUIRE(series.break_times.size() == 1);
    CHECK(series.break_times[0] == doctest::Approx(1.37).epsilon(1e-12));
    CHECK(series.argmin.front() == 0);
    CHECK(series.argmin.back() == 1);

    // the mu series follows the winning gap and the finite-difference rates
    // reproduce the quadratic's derivative to rounding accuracy
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        const double t = series.times[k];
        const bool first = t < t_cross;
        CHECK(std::abs(series.mu[k] - (first ? g1(t) : g2(t))) < 1e-12);
        if (!std::isnan(series.weighted_rate[k]))
            CHECK(std::abs(series.weighted_rate[k] - (first ? d_g1(t) : d_g2(t))) < 1e-8);
    }

    // rates never increase inside an interval
    for (std::size_t k = 1; k < series.times.size(); ++k)
        if (series.interval_id[k] == series.interval_id[k - 1] &&
            !std::isnan(series.weighted_rate[k]) && !std::isnan(series.weighted_rate[k - 1]))
            CHECK(series.weighted_rate[k] <= series.weighted_rate[k - 1] + 1e-8);

    // the one-sided limits at the break jump downward
    REQUIRE(series.break_limits.size() == 1);
    const auto& lim = series.break_limits[0];
    CHECK(lim.t == doctest::Approx(1.37).epsilon(1e-12));
    CHECK(lim.left_rate == doctest::Approx(d_g1(1.36)).epsilon(1e-6));
    CHECK(lim.right_rate == doctest::Approx(d_g2(1.37)).epsilon(1e-6));
    CHECK(lim.left_rate >= lim.right_rate);

    CHECK(detect_local_minima(series, 5).empty());
}

TEST_CASE("persistent ties keep the first gap index") {
    // two gaps equal by construction at every sample
    const Trajectory traj = angle_trajectory(
        0.0, 1.0, 0.01,
        [](double t) {
            const double g = 1.5 - 0.1 * t;
            return std::vector<double>{0.0, g, 2.0 * g};
        },
        [](double) { return 1.0; });
    const GapSeries series = gap_series(traj, 1e-6);
    for (std::size_t k = 0; k < series.times.size(); ++k) CHECK(series.argmin[k] == 0);
    CHECK(series.break_times.empty());
}

TEST_CASE("angle jumps beyond a quarter turn are a tracking failure") {
    const Trajectory traj = angle_trajectory(
        0.0, 0.2, 0.1,
        [](double t) {
            return std::vector<double>{t < 0.05 ? 0.1 : 2.0, 3.0, 5.0};
        },
        [](double) { return 1.0; });
    CHECK_THROWS_AS(gap_series(traj, 1e-6), TrackingError);
}

TEST_CASE("losing the ring mid-run surfaces the decomposition failure") {
    Trajectory traj = angle_trajectory(
        0.0, 0.5, 0.1,
        [](double t) { return std::vector<double>{0.3 * t, 2.0 + 0.3 * t, 4.0 + 0.3 * t}; },
        [](double) { return 1.0; });
    traj.positions.back()[0] *= 1.5;  // push one body off the shared circle
    CHECK_THROWS_AS(gap_series(traj, 1e-6), NotARingError);
}

TEST_CASE("local minima are found at the bottom of a parabolic dip") {
    GapSeries series;
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.1 * k;
        series.times.push_back(t);
        series.mu.push_back(1.0 + 0.01 * (t - 5.0) * (t - 5.0));
        series.argmin.push_back(0);
        series.r.push_back(1.0);
        series.weighted_rate.push_back(0.0);
        series.interval_id.push_back(0);
    }
    const auto minima = detect_local_minima(series, 5);
    REQUIRE(minima.size() == 1);
    CHECK(std::abs(minima[0] - 5.0) <= 0.1 + 1e-12);

    GapSeries flat = series;
    for (auto& v : flat.mu) v = 2.0;
    CHECK(detect_local_minima(flat, 5).empty());

    GapSeries monotone = series;
    for (std::size_t k = 0; k < monotone.mu.size(); ++k)
        monotone.mu[k] = 3.0 - 0.01 * static_cast<double>(k);
    CHECK(detect_local_minima(monotone, 5).empty());
}

TEST_CASE("constant phase offsets are recognized as homographic") {
    const std::vector<double> alphas = {0.0, 1.0, 2.5, 4.0};
    auto make = [&](bool pulsate) {
        return angle_trajectory(
            0.0, 2.0, 0.01,
            [&](double t) {
                std::vector<double> th;
                for (double a : alphas) th.push_back(a + 0.3 * t);
                return th;
            },
            [pulsate](double t) { return pulsate ? 1.0 + 0.2 * std::sin(t) : 1.0; });
    };

    const HomographicVerdict pulsating = is_homographic(make(true), 1e-6, 1e-6);
    CHECK(pulsating.homographic);
    CHECK(!pulsating.relative_equilibrium);
    REQUIRE(pulsating.alphas.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(pulsating.alphas[i] == doctest::Approx(alphas[i]).epsilon(1e-9));
    REQUIRE(pulsating.phi.size() == 201);
    CHECK(pulsating.phi.back() - pulsating.phi.front() == doctest::Approx(0.6).epsilon(1e-9));

    const HomographicVerdict rigid = is_homographic(make(false), 1e-6, 1e-6);
    CHECK(rigid.homographic);
    CHECK(rigid.relative_equilibrium);
}

TEST_CASE("drifting phase offsets are not homographic") {
    const Trajectory traj = angle_trajectory(
        0.0, 2.0, 0.01,
        [](double t) {
            return std::vector<double>{0.3 * t, M_PI + 0.3 * t, 1.5 + 0.45 * t,
                                       1.5 + M_PI + 0.45 * t};
        },
        [](double) { return 1.0; });
    const HomographicVerdict verdict = is_homographic(traj, 1e-6, 1e-6);
    CHECK(!verdict.homographic);
}

TEST_CASE("gap series ignores body labels and global rotation") {
    auto angles = [](double t) {
        return std::vector<double>{0.2 + 0.3 * t, 1.7 + 0.28 * t, 3.9 + 0.31 * t};
    };
    const Trajectory base = angle_trajectory(0.0, 1.0, 0.02, angles,
                                             [](double) { return 1.3; });

    Trajectory permuted = base;
    for (auto& pos : permuted.positions) {
        std::vector<double> p = pos;
        pos = {p[4], p[5], p[0], p[1], p[2], p[3]};  // rotate body order
    }
    Trajectory rotated = angle_trajectory(
        0.0, 1.0, 0.02,
        [&](double t) {
            std::vector<double> th = angles(t);
            for (double& a : th) a += 0.05;
            return th;
        },
        [](double) { return 1.3; });

    const GapSeries s0 = gap_series(base, 1e-6);
    const GapSeries s1 = gap_series(permuted, 1e-6);
    const GapSeries s2 = gap_series(rotated, 1e-6);
    REQUIRE(s1.times.size() == s0.times.size());
    REQUIRE(s2.times.size() == s0.times.size());
    for (std::size_t k = 0; k < s0.times.size(); ++k) {
        CHECK(s1.mu[k] == doctest::Approx(s0.mu[k]).epsilon(1e-12));
        CHECK(s1.argmin[k] == s0.argmin[k]);
        CHECK(s2.mu[k] == doctest::Approx(s0.mu[k]).epsilon(1e-10));
        CHECK(s2.argmin[k] == s0.argmin[k]);
    }
}
