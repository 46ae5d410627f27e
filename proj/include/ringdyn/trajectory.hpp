#pragma once

#include <cstddef>
#include <vector>

#include "ringdyn/state.hpp"

namespace ringdyn {

// Sampled solution curve plus integrator accounting. Positions and
// velocities are flattened per sample (2 or 3 coordinates per body).
struct Trajectory {
    enum class Space { Flat, Curved };

    Space space = Space::Flat;
    int sigma = 1;  // meaningful for curved trajectories
    std::size_t n = 0;

    std::vector<double> times;
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> velocities;
    std::vector<std::vector<double>> masses;

    long steps_accepted = 0;
    long steps_rejected = 0;
    double max_residual = 0.0;            // dense-output defect against the dynamics
    double max_constraint_drift = 0.0;    // curved: max |q dot q - sigma| over samples
    double max_tangency_drift = 0.0;      // curved: max |q dot qdot| over samples
    double max_pre_projection_drift = 0.0;

    std::size_t coords() const { return space == Space::Flat ? 2 : 3; }
    std::size_t samples() const { return times.size(); }

    FlatState flat_state(std::size_t k) const;
    CurvedState curved_state(std::size_t k) const;
};

}  // namespace ringdyn
