#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ringdyn/ring_analysis.hpp"
#include "ringdyn/trajectory.hpp"

namespace ringdyn {

// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

// Flat rows: t,body,x,y,vx,vy,m. Curved rows: t,body,x,y,z,vx,vy,vz,m.
// Bodies are 0-based and rows are grouped by sample.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

// Rows: t,mu,argmin_j,r,weighted_rate,interval_id with argmin_j 1-based.
void write_gap_series_csv(const GapSeries& series, const std::string& path);

// Flat rows: t,r,angular_momentum. Curved rows add z and per-sample
// constraint and tangency drifts. r is the mean planar body radius.
void write_plotdata_csv(const Trajectory& traj, const std::string& path);

// Per-sample angular momentum about the origin (z component).
std::vector<double> angular_momentum_series(const Trajectory& traj);

nlohmann::json trajectory_diagnostics(const Trajectory& traj);

// Serializes with sorted keys, two-space indent and a trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace ringdyn
