#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ringdyn/force_law.hpp"
#include "ringdyn/interp.hpp"
#include "ringdyn/trajectory.hpp"

namespace ringdyn {

// Twice-differentiable positive radius history r(t).
class RadiusProfile {
  public:
    static RadiusProfile constant(double r0);
    // r(t) = c0 + c1 * sin(omega * t + phase); requires |c1| < c0.
    static RadiusProfile sinusoid(double c0, double c1, double omega, double phase = 0.0);
    static RadiusProfile tabulated(std::vector<double> times, std::vector<double> values);

    double r(double t) const;
    double dr(double t) const;
    double ddr(double t) const;

  private:
    RadiusProfile() = default;
    enum class Kind { Constant, Sinusoid, Table } kind_ = Kind::Constant;
    double c0_ = 0.0, c1_ = 0.0, omega_ = 0.0, phase_ = 0.0;
    std::optional<CubicSpline> table_;
};

// Ring of n equal bodies on a pulsating circle, rotating with phi' = a / r^2,
// optionally balanced around a fixed central mass at the origin.
struct HomographicProfile {
    std::size_t n = 0;  // ring bodies, excluding any central one
    RadiusProfile radius = RadiusProfile::constant(1.0);
    double a = 0.0;
    std::optional<double> central_mass;
    ForceLaw law = ForceLaw::newtonian();
};

// Sum over the other vertices of a regular n-gon of radius r of
// (1 - cos(2 pi j / n)) * f(2 r^2 (1 - cos(2 pi j / n))).
double regular_polygon_sum(std::size_t n, double r, const ForceLaw& law);

// The shared ring mass that makes the profile an exact orbit at time t.
// Throws InfeasibleProfileError when the required mass is not positive.
double ring_mass(const HomographicProfile& profile, double t);

struct SynthesisOptions {
    double sample_dt = 0.01;
};

// Emits the orbit described by the profile over [t0, t1] with exact masses,
// positions and velocities; the central body (if any) is appended last.
// max_residual reports the worst acceleration defect over the samples.
Trajectory synthesize_orbit(const HomographicProfile& profile, double t0, double t1,
                            const SynthesisOptions& opts = {});

struct SolveOptions {
    double r = 1.0;
    std::optional<double> A2;  // prescribed squared spin; derived when absent
    int starts = 40;
    std::uint64_t seed = 0;
};

struct PolygonalConfiguration {
    std::vector<double> alphas;  // alphas[0] == 0, the rest in [0, 2pi)
    double A2 = 0.0;
    double residual = 0.0;  // max-abs equation residual
};

struct SolveReport {
    std::vector<PolygonalConfiguration> solutions;   // residual <= 1e-10
    std::vector<PolygonalConfiguration> stationary;  // stalled non-solutions
    int starts = 0;
    int converged = 0;
};

// Finds angle assignments alpha for the given masses on a circle of radius r
// such that every body obeys the same rigid rotation: for each i,
//   sum_j m_j (1 - cos d_ij) f(2 r^2 (1 - cos d_ij)) = A^2   (radial)
//   sum_j m_j sin(d_ij) f(2 r^2 (1 - cos d_ij))      = 0     (tangential)
// with d_ij = alpha_j - alpha_i. Damped Gauss-Newton over multistarts; the
// first start is the regular polygon, the rest are sorted uniform draws.
SolveReport solve_polygonal_configuration(const std::vector<double>& masses,
                                          const ForceLaw& law, const SolveOptions& opts);

}  // namespace ringdyn
