#include "ringdyn/ring_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "ringdyn/errors.hpp"

namespace ringdyn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

struct Polar {
    double rho;
    double theta;
};

RingDecomposition decompose_impl(const std::vector<Polar>& polar,
                                 const std::vector<double>& heights,
                                 bool curved, double tol) {
    const std::size_t n = polar.size();
    if (n < 2) throw NotARingError("ring decomposition needs at least 2 bodies");

    std::optional<std::size_t> center;
    for (std::size_t i = 0; i < n; ++i) {
        bool at_center = polar[i].rho <= tol;
        if (curved) at_center = at_center && std::abs(heights[i] - 1.0) <= tol;
        if (at_center) {
            if (center) throw NotARingError("more than one body sits at the center");
            center = i;
        }
    }

    RingDecomposition d;
    d.with_center = center.has_value();
    d.center_index = center;

    std::vector<std::size_t> ring;
    for (std::size_t i = 0; i < n; ++i)
        if (!center || i != *center) ring.push_back(i);
    if (ring.size() < 2) throw NotARingError("ring decomposition needs at least 2 ring bodies");

    double r_sum = 0.0, z_sum = 0.0;
    for (std::size_t i : ring) {
        r_sum += polar[i].rho;
        if (curved) z_sum += heights[i];
    }
    d.r = r_sum / static_cast<double>(ring.size());
    d.z = curved ? z_sum / static_cast<double>(ring.size()) : 0.0;
    if (d.r <= tol) throw NotARingError("ring radius is not separated from zero");

    for (std::size_t i : ring) {
        if (std::abs(polar[i].rho - d.r) > tol) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "body %zu is off the shared circle by %.3e", i,
                          std::abs(polar[i].rho - d.r));
            throw NotARingError(buf);
        }
        if (curved && std::abs(heights[i] - d.z) > tol) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "body %zu is off the shared height by %.3e", i,
                          std::abs(heights[i] - d.z));
            throw NotARingError(buf);
        }
    }

    d.order = ring;
    std::sort(d.order.begin(), d.order.end(), [&](std::size_t a, std::size_t b) {
        return polar[a].theta < polar[b].theta;
    });
    d.angles.reserve(d.order.size());
    for (std::size_t i : d.order) d.angles.push_back(polar[i].theta);

    const std::size_t m = d.angles.size();
    for (std::size_t j = 0; j < m; ++j) {
        double gap = (j + 1 < m) ? d.angles[j + 1] - d.angles[j]
                                 : kTwoPi + d.angles[0] - d.angles[m - 1];
        if (gap < 1e-15) throw NotARingError("two ring bodies share an angle");
    }
    return d;
}

}  // namespace

RingDecomposition decompose_flat(const FlatState& state, double tol) {
    if (tol <= 0.0) throw ValidationError("ring tolerance must be positive", "tol");
    std::vector<Polar> polar(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Vec2& q = state.positions[i];
        polar[i] = {norm(q), wrap_angle(std::atan2(q.y, q.x))};
    }
    return decompose_impl(polar, {}, false, tol);
}

RingDecomposition ring_decompose_curved(const CurvedState& state, double tol) {
    if (tol <= 0.0) throw ValidationError("ring tolerance must be positive", "tol");
    std::vector<Polar> polar(state.size());
    std::vector<double> heights(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Vec3& q = state.positions[i];
        polar[i] = {std::hypot(q.x, q.y), wrap_angle(std::atan2(q.y, q.x))};
        heights[i] = q.z;
    }
    return decompose_impl(polar, heights, true, tol);
}

GapInfo gap_function(const RingDecomposition& decomp) {
    const std::size_t m = decomp.angles.size();
    if (m < 2) throw NotARingError("gap function needs at least 2 ring bodies");
    GapInfo info;
    info.mu = std::numeric_limits<double>::infinity();
    // Ties (within rounding of the angles) resolve to the smallest index.
    const double tie_eps = 1e-12;
    for (std::size_t j = 0; j < m; ++j) {
        double gap = (j + 1 < m) ? decomp.angles[j + 1] - decomp.angles[j]
                                 : kTwoPi + decomp.angles[0] - decomp.angles[m - 1];
        if (gap < info.mu - tie_eps) {
            info.mu = gap;
            info.argmin = j;
        } else if (gap < info.mu) {
            info.mu = gap;
        }
    }
    return info;
}

namespace {

struct RingTrack {
    RingDecomposition base;
    std::vector<double> r;                     // per sample
    std::vector<std::vector<double>> tracked;  // [sample][sorted ring slot]
};

RingTrack track_ring(const Trajectory& traj, double tol) {
    if (traj.samples() == 0) throw ValidationError("trajectory has no samples", "trajectory");
    const bool curved = traj.space == Trajectory::Space::Curved;

    RingTrack track;
    std::vector<RingDecomposition> decomps(traj.samples());
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        decomps[k] = curved ? ring_decompose_curved(traj.curved_state(k), tol)
                            : decompose_flat(traj.flat_state(k), tol);
        if (k > 0) {
            if (decomps[k].with_center != decomps[0].with_center ||
                decomps[k].center_index != decomps[0].center_index)
                throw NotARingError("center body changes along the trajectory");
        }
    }
    track.base = decomps[0];
    track.r.resize(traj.samples());
    for (std::size_t k = 0; k < traj.samples(); ++k) track.r[k] = decomps[k].r;

    const std::size_t m = track.base.order.size();
    const std::size_t c = traj.coords();
    track.tracked.assign(traj.samples(), std::vector<double>(m));
    track.tracked[0] = track.base.angles;
    for (std::size_t k = 1; k < traj.samples(); ++k) {
        for (std::size_t slot = 0; slot < m; ++slot) {
            std::size_t body = track.base.order[slot];
            double x = traj.positions[k][body * c + 0];
            double y = traj.positions[k][body * c + 1];
            double raw = std::atan2(y, x);
            double prev = track.tracked[k - 1][slot];
            double d = std::remainder(raw - prev, kTwoPi);
            if (std::abs(d) > 1.5707963267948966) {
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "body %zu moved %.3f rad between samples %zu and %zu; "
                              "sampling is too coarse to track angles",
                              body, std::abs(d), k - 1, k);
                throw TrackingError(buf);
            }
            track.tracked[k][slot] = prev + d;
        }
    }
    return track;
}

}  // namespace

GapSeries gap_series(const Trajectory& traj, double ring_tol) {
    RingTrack track = track_ring(traj, ring_tol);
    const std::size_t m = track.base.order.size();
    const std::size_t len = traj.samples();

    GapSeries series;
    series.times = traj.times;
    series.r = track.r;
    series.mu.resize(len);
    series.argmin.resize(len);
    series.interval_id.resize(len);

    // Exact ties (regular rings) would make the argmin flicker on rounding
    // noise, so a sample keeps the previous argmin while its gap stays
    // within a hair of the minimum. Genuine crossings separate by far more
    // than the hysteresis after one sample.
    const double tie_eps = 1e-12;
    std::vector<double> gaps(m);
    for (std::size_t k = 0; k < len; ++k) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t a = j, b = (j + 1) % m;
            double gap = track.tracked[k][b] - track.tracked[k][a];
            if (j + 1 == m) gap += kTwoPi;
            if (gap <= 0.0)
                throw TrackingError("ring ordering changed along the trajectory");
            gaps[j] = gap;
            if (gap < best) {
                best = gap;
                arg = j;
            }
        }
        if (k > 0 && gaps[series.argmin[k - 1]] <= best + tie_eps) arg = series.argmin[k - 1];
        series.mu[k] = best;
        series.argmin[k] = arg;
    }

    int id = 0;
    series.interval_id[0] = 0;
    for (std::size_t k = 1; k < len; ++k) {
        if (series.argmin[k] != series.argmin[k - 1]) {
            ++id;
            series.break_times.push_back(series.times[k]);
        }
        series.interval_id[k] = id;
    }

    series.weighted_rate.assign(len, std::numeric_limits<double>::quiet_NaN());
    std::size_t i0 = 0;
    while (i0 < len) {
        std::size_t i1 = i0;
        while (i1 + 1 < len && series.interval_id[i1 + 1] == series.interval_id[i0]) ++i1;
        const std::size_t run = i1 - i0 + 1;
        auto& t = series.times;
        auto& mu = series.mu;
        for (std::size_t i = i0; i <= i1; ++i) {
            double rate;
            if (run == 1) {
                rate = std::numeric_limits<double>::quiet_NaN();
            } else if (i > i0 && i < i1) {
                rate = (mu[i + 1] - mu[i - 1]) / (t[i + 1] - t[i - 1]);
            } else if (i == i0) {
                if (run >= 3) {
                    double h = t[i + 1] - t[i];
                    rate = (-3.0 * mu[i] + 4.0 * mu[i + 1] - mu[i + 2]) / (2.0 * h);
                } else {
                    rate = (mu[i + 1] - mu[i]) / (t[i + 1] - t[i]);
                }
            } else {  // i == i1
                if (run >= 3) {
                    double h = t[i] - t[i - 1];
                    rate = (3.0 * mu[i] - 4.0 * mu[i - 1] + mu[i - 2]) / (2.0 * h);
                } else {
                    rate = (mu[i] - mu[i - 1]) / (t[i] - t[i - 1]);
                }
            }
            series.weighted_rate[i] = series.r[i] * series.r[i] * rate;
        }
        i0 = i1 + 1;
    }

    for (std::size_t k = 1; k < len; ++k) {
        if (series.interval_id[k] != series.interval_id[k - 1]) {
            GapSeries::BreakLimits lim;
            lim.t = series.times[k];
            lim.left_rate = series.weighted_rate[k - 1];
            lim.right_rate = series.weighted_rate[k];
            series.break_limits.push_back(lim);
        }
    }
    return series;
}

std::vector<double> detect_local_minima(const GapSeries& series, std::size_t window) {
    if (window == 0) throw ValidationError("window must be at least 1", "window");
    const std::size_t len = series.mu.size();
    std::vector<double> out;
    if (len < 3) return out;
    for (std::size_t i = 1; i + 1 < len; ++i) {
        // Plateaus (constant mu up to rounding) are not minima; a real dip
        // must beat its surroundings by more than accumulated noise.
        const double eps = 1e-12 * (1.0 + std::abs(series.mu[i]));
        std::size_t lo = (i >= window) ? i - window : 0;
        std::size_t hi = std::min(len - 1, i + window);
        bool is_min = true;
        for (std::size_t j = lo; j <= hi && is_min; ++j)
            if (series.mu[j] < series.mu[i] - eps) is_min = false;
        bool strict = series.mu[i - 1] - series.mu[i] > eps ||
                      series.mu[i + 1] - series.mu[i] > eps;
        if (is_min && strict) out.push_back(series.times[i]);
    }
    return out;
}

bool is_regular(const RingDecomposition& decomp, double tol) {
    const std::size_t m = decomp.angles.size();
    if (m < 2) return false;
    const double target = kTwoPi / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
        double gap = (j + 1 < m) ? decomp.angles[j + 1] - decomp.angles[j]
                                 : kTwoPi + decomp.angles[0] - decomp.angles[m - 1];
        if (std::abs(gap - target) > tol) return false;
    }
    return true;
}

HomographicVerdict is_homographic(const Trajectory& traj, double ring_tol, double tol) {
    if (tol <= 0.0) throw ValidationError("tolerance must be positive", "tol");
    RingTrack track = track_ring(traj, ring_tol);
    const std::size_t m = track.base.order.size();
    const std::size_t len = traj.samples();

    HomographicVerdict verdict;
    verdict.alphas.resize(m);
    for (std::size_t slot = 0; slot < m; ++slot)
        verdict.alphas[slot] = track.tracked[0][slot] - track.tracked[0][0];
    verdict.phi.resize(len);
    for (std::size_t k = 0; k < len; ++k) verdict.phi[k] = track.tracked[k][0];

    double max_phase_dev = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        for (std::size_t slot = 0; slot < m; ++slot) {
            double offset = track.tracked[k][slot] - track.tracked[k][0];
            max_phase_dev = std::max(max_phase_dev, std::abs(offset - verdict.alphas[slot]));
        }
    }
    verdict.homographic = max_phase_dev <= tol;

    double max_r_dev = 0.0;
    for (std::size_t k = 0; k < len; ++k)
        max_r_dev = std::max(max_r_dev, std::abs(track.r[k] - track.r[0]));
    verdict.relative_equilibrium = verdict.homographic && max_r_dev <= tol;
    return verdict;
}

}  // namespace ringdyn
