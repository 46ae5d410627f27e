#pragma once

// Shared fixtures for the test suites: ring builders, random valid states,
// and small numeric utilities.

#include <cmath>
#include <random>
#include <vector>

#include "ringdyn/curved_dynamics.hpp"
#include "ringdyn/state.hpp"
#include "ringdyn/vec.hpp"

namespace ringdyn::testutil {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

// Distance between two angles on the circle.
inline double circular_distance(double a, double b) {
    double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

// n bodies evenly spaced on a flat circle, optionally rigidly rotating.
inline FlatState ring_flat(std::size_t n, double r, double phase = 0.0, double omega = 0.0) {
    FlatState s;
    for (std::size_t i = 0; i < n; ++i) {
        const double th = phase + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        s.positions.push_back({r * std::cos(th), r * std::sin(th)});
        s.velocities.push_back({-omega * r * std::sin(th), omega * r * std::cos(th)});
    }
    return s;
}

// n bodies evenly spaced on a horizontal circle of the curved surface
// x^2 + y^2 + sigma z^2 = sigma, rotating about the z axis at rate omega.
inline CurvedState curved_ring(int sigma, std::size_t n, double r, double omega,
                               double phase = 0.0) {
    CurvedState s;
    s.sigma = sigma;
    const double z = sigma == 1 ? std::sqrt(1.0 - r * r) : std::sqrt(1.0 + r * r);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = phase + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        s.positions.push_back({r * std::cos(th), r * std::sin(th), z});
        s.velocities.push_back({-omega * r * std::sin(th), omega * r * std::cos(th), 0.0});
    }
    return s;
}

// Squared angular rate that makes curved_ring(sigma, n, r, omega) a relative
// equilibrium with equal masses m: balance of the radial and vertical
// components of the pairwise attraction against the rotation.
inline double relative_equilibrium_omega2(int sigma, std::size_t n, double r, double m) {
    const double z2 = sigma == 1 ? 1.0 - r * r : 1.0 + r * r;
    double sum = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        const double delta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        const double w = r * r * std::cos(delta) + static_cast<double>(sigma) * z2;
        const double den = static_cast<double>(sigma) * (1.0 - w * w);
        sum += (1.0 - std::cos(delta)) / (den * std::sqrt(den));
    }
    return m * sum;
}

// Random valid curved state: bodies on the surface with tangent velocities,
// pairwise well separated so no force denominator is near singular.
inline CurvedState random_curved_state(std::mt19937_64& rng, int sigma, std::size_t n) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> vel(-1.0, 1.0);
    for (;;) {
        CurvedState s;
        s.sigma = sigma;
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 q;
            if (sigma == 1) {
                std::uniform_real_distribution<double> height(-0.9, 0.9);
                const double z = height(rng);
                const double rho = std::sqrt(1.0 - z * z);
                const double th = angle(rng);
                q = {rho * std::cos(th), rho * std::sin(th), z};
            } else {
                std::uniform_real_distribution<double> radius(0.0, 2.0);
                const double rho = radius(rng);
                const double th = angle(rng);
                q = {rho * std::cos(th), rho * std::sin(th), std::sqrt(1.0 + rho * rho)};
            }
            Vec3 v{vel(rng), vel(rng), vel(rng)};
            v -= static_cast<double>(sigma) * odot(q, v, sigma) * q;
            s.positions.push_back(q);
            s.velocities.push_back(v);
        }
        bool separated = true;
        for (std::size_t i = 0; i + 1 < n && separated; ++i)
            for (std::size_t j = i + 1; j < n && separated; ++j) {
                const double w = odot(s.positions[i], s.positions[j], sigma);
                if (static_cast<double>(sigma) * (1.0 - w * w) < 1e-4) separated = false;
            }
        if (separated) return s;
    }
}

}  // namespace ringdyn::testutil
