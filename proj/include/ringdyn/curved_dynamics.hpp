#pragma once

#include <vector>

#include "ringdyn/mass_model.hpp"
#include "ringdyn/state.hpp"
#include "ringdyn/trajectory.hpp"

namespace ringdyn {

// Curvature-signed inner product x1 y1 + x2 y2 + sigma x3 y3.
inline double odot(const Vec3& a, const Vec3& b, int sigma) {
    return a.x * b.x + a.y * b.y + static_cast<double>(sigma) * a.z * b.z;
}

// Accelerations of the intrinsic cotangent dynamics:
// a_i = sum_j m_j (q_j - sigma (q_i . q_j) q_i) / (sigma - sigma (q_i . q_j)^2)^(3/2)
//       - sigma (qdot_i . qdot_i) q_i
// where . is the odot product. Pairs with denominator below 1e-10 raise
// SingularConfigError. For on-surface states the result is tangent:
// q_i . a_i = -(qdot_i . qdot_i).
std::vector<Vec3> acceleration_curved(const CurvedState& state, const MassModel& masses);

struct CurvedIntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double sample_dt = 0.01;
};

// Adaptive integration with per-step reprojection onto the surface and the
// tangent bundle; emitted samples are projected as well.
Trajectory integrate_curved(const CurvedState& initial, const MassModel& masses, double t_end,
                            const CurvedIntegrateOptions& options = {});

}  // namespace ringdyn
