#pragma once

#include <vector>

#include "ringdyn/vec.hpp"

namespace ringdyn {

struct FlatState {
    double t = 0.0;
    std::vector<Vec2> positions;
    std::vector<Vec2> velocities;

    std::size_t size() const { return positions.size(); }
};

// Bodies on the surface x^2 + y^2 + sigma z^2 = sigma (unit sphere for
// sigma=+1, upper hyperboloid sheet for sigma=-1) with tangent velocities.
struct CurvedState {
    double t = 0.0;
    int sigma = 1;
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;

    std::size_t size() const { return positions.size(); }
};

void validate_state(const FlatState& state);

// Admission tolerance for the surface and tangency constraints.
void validate_state(const CurvedState& state, double tol = 1e-9);

}  // namespace ringdyn
