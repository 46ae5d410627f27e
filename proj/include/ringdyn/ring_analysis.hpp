#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ringdyn/state.hpp"
#include "ringdyn/trajectory.hpp"

namespace ringdyn {

// Polar form of a state whose bodies share a circle, optionally with one
// extra body at the center (flat) or at the pole (0,0,1) (curved).
struct RingDecomposition {
    bool with_center = false;
    std::optional<std::size_t> center_index;
    double r = 0.0;
    double z = 0.0;  // curved rings: common height
    std::vector<double> angles;       // sorted ascending in [0, 2pi)
    std::vector<std::size_t> order;   // body index providing each sorted angle
};

RingDecomposition decompose_flat(const FlatState& state, double tol);
RingDecomposition ring_decompose_curved(const CurvedState& state, double tol);

struct GapInfo {
    double mu = 0.0;          // smallest cyclic gap
    std::size_t argmin = 0;   // 0-based gap index; gap j runs from angle j to j+1
};

// Smallest cyclic gap of a decomposition; ties resolve to the smallest index.
GapInfo gap_function(const RingDecomposition& decomp);

struct GapSeries {
    std::vector<double> times;
    std::vector<double> mu;
    std::vector<std::size_t> argmin;   // 0-based gap index in the t0 adjacency
    std::vector<double> r;
    std::vector<double> weighted_rate;  // r^2 dmu/dt, finite differences per interval
    std::vector<int> interval_id;
    std::vector<double> break_times;    // first sample time of each new interval

    struct BreakLimits {
        double t;
        double left_rate;   // one-sided rate at the last sample before the break
        double right_rate;  // one-sided rate at the first sample after it
    };
    std::vector<BreakLimits> break_limits;
};

// Tracks per-body angles continuously through the trajectory (unwrapping
// across 2pi; jumps above pi/2 between samples raise TrackingError), pairs
// cyclically adjacent bodies by the t0 ordering, and differentiates the
// minimal gap inside each constant-argmin interval (second-order one-sided
// stencils at interval ends).
GapSeries gap_series(const Trajectory& traj, double ring_tol);

// Sample times that minimize mu over a +-window neighborhood and improve
// strictly on at least one adjacent sample. Series endpoints are excluded.
std::vector<double> detect_local_minima(const GapSeries& series, std::size_t window);

bool is_regular(const RingDecomposition& decomp, double tol);

struct HomographicVerdict {
    bool homographic = false;
    bool relative_equilibrium = false;
    std::vector<double> alphas;  // ring-body phases at t0 relative to the first
    std::vector<double> phi;     // reference-body angle series
};

// A trajectory is homographic when every ring body keeps a constant phase
// offset against the reference body.
HomographicVerdict is_homographic(const Trajectory& traj, double ring_tol, double tol);

}  // namespace ringdyn
