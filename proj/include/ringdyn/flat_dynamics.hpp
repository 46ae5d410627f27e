#pragma once

#include <vector>

#include "ringdyn/force_law.hpp"
#include "ringdyn/mass_model.hpp"
#include "ringdyn/state.hpp"
#include "ringdyn/trajectory.hpp"

namespace ringdyn {

// Pairwise accelerations a_i = sum_j m_j (q_j - q_i) f(|q_j - q_i|^2).
// Throws CollisionError when a pair sits below the law's domain minimum.
std::vector<Vec2> acceleration(const FlatState& state, const MassModel& masses,
                               const ForceLaw& law);

// Total angular momentum sum m_i (x_i vy_i - y_i vx_i) at the state's time.
double angular_momentum(const FlatState& state, const MassModel& masses);

// Normalized defect of a claimed acceleration field:
// max_i |claimed_i - a_i| / (1 + max_i |a_i|).
double residual(const FlatState& state, const MassModel& masses, const ForceLaw& law,
                const std::vector<Vec2>& claimed);

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double sample_dt = 0.01;
};

Trajectory integrate(const FlatState& initial, const MassModel& masses, const ForceLaw& law,
                     double t_end, const IntegrateOptions& options = {});

// The sample grid integrate() emits: t0, t0+dt, ... plus t_end if the span
// is not an exact multiple of dt.
std::vector<double> sample_grid(double t0, double t_end, double sample_dt);

}  // namespace ringdyn
