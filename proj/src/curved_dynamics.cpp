#include "ringdyn/curved_dynamics.hpp"

#include <cmath>
#include <string>

#include "ringdyn/errors.hpp"
#include "ringdyn/flat_dynamics.hpp"
#include "ringdyn/ode.hpp"

namespace ringdyn {

void validate_state(const CurvedState& state, double tol) {
    if (state.sigma != 1 && state.sigma != -1)
        throw ValidationError("curved state: curvature sign must be +1 or -1");
    if (state.positions.empty()) throw ValidationError("curved state: needs at least one body");
    if (state.positions.size() != state.velocities.size())
        throw ValidationError("curved state: position/velocity counts differ");
    const double sigma = state.sigma;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Vec3& q = state.positions[i];
        const Vec3& v = state.velocities[i];
        if (!std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(q.z) ||
            !std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw ValidationError("curved state: non-finite component");
        if (std::abs(odot(q, q, state.sigma) - sigma) > tol)
            throw GeometryError("curved state: body " + std::to_string(i) +
                                " is off the surface");
        if (state.sigma == -1 && !(q.z > 0.0))
            throw GeometryError("curved state: body " + std::to_string(i) +
                                " is off the upper sheet");
        if (std::abs(odot(q, v, state.sigma)) > tol)
            throw GeometryError("curved state: body " + std::to_string(i) +
                                " has a non-tangent velocity");
    }
}

CurvedState Trajectory::curved_state(std::size_t k) const {
    CurvedState s;
    s.t = times.at(k);
    s.sigma = sigma;
    s.positions.resize(n);
    s.velocities.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.positions[i] = {positions[k][3 * i], positions[k][3 * i + 1], positions[k][3 * i + 2]};
        s.velocities[i] = {velocities[k][3 * i], velocities[k][3 * i + 1],
                           velocities[k][3 * i + 2]};
    }
    return s;
}

namespace {

constexpr double kDenomFloor = 1e-10;

void accumulate_curved(const std::vector<Vec3>& q, const std::vector<Vec3>& v,
                       const std::vector<double>& m, int sigma, std::vector<Vec3>& acc) {
    const std::size_t n = q.size();
    const double sg = sigma;
    acc.assign(n, Vec3{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = odot(q[i], q[j], sigma);
            const double den = sg - sg * w * w;
            if (!(den >= kDenomFloor))
                throw SingularConfigError("curved dynamics: bodies " + std::to_string(i) +
                                          " and " + std::to_string(j) +
                                          " form a singular pair");
            const double scale = 1.0 / (den * std::sqrt(den));
            acc[i] += m[j] * scale * (q[j] - sg * w * q[i]);
            acc[j] += m[i] * scale * (q[i] - sg * w * q[j]);
        }
        acc[i] -= sg * odot(v[i], v[i], sigma) * q[i];
    }
}

// Renormalize to the surface, then remove the normal velocity component.
void project(std::vector<Vec3>& q, std::vector<Vec3>& v, int sigma) {
    const double sg = sigma;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double qq = odot(q[i], q[i], sigma);
        const double s2 = sg * qq;  // |q|^2 in the surface normalization
        if (!(s2 > 0.0))
            throw GeometryError("curved dynamics: state left the surface chart");
        q[i] *= 1.0 / std::sqrt(s2);
        if (sigma == -1 && !(q[i].z > 0.0))
            throw GeometryError("curved dynamics: state left the upper sheet");
        v[i] -= sg * odot(q[i], v[i], sigma) * q[i];
    }
}

}  // namespace

std::vector<Vec3> acceleration_curved(const CurvedState& state, const MassModel& masses) {
    validate_state(state);
    if (masses.size() != state.size())
        throw ValidationError("curved acceleration: mass count does not match body count");
    std::vector<double> m;
    masses.masses(state.t, m);
    std::vector<Vec3> acc;
    accumulate_curved(state.positions, state.velocities, m, state.sigma, acc);
    return acc;
}

Trajectory integrate_curved(const CurvedState& initial, const MassModel& masses, double t_end,
                            const CurvedIntegrateOptions& options) {
    validate_state(initial);
    if (masses.size() != initial.size())
        throw ValidationError("integrate: mass count does not match body count");
    if (!(t_end > initial.t)) throw ValidationError("integrate: t_end must exceed initial time");

    const std::size_t n = initial.size();
    const std::size_t dim = 6 * n;
    const int sigma = initial.sigma;
    const double sg = sigma;

    std::vector<double> y0(dim);
    for (std::size_t i = 0; i < n; ++i) {
        y0[3 * i] = initial.positions[i].x;
        y0[3 * i + 1] = initial.positions[i].y;
        y0[3 * i + 2] = initial.positions[i].z;
        y0[3 * n + 3 * i] = initial.velocities[i].x;
        y0[3 * n + 3 * i + 1] = initial.velocities[i].y;
        y0[3 * n + 3 * i + 2] = initial.velocities[i].z;
    }

    std::vector<Vec3> q(n), v(n), acc(n);
    std::vector<double> m(n);
    auto unpack = [&](const std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = {y[3 * i], y[3 * i + 1], y[3 * i + 2]};
            v[i] = {y[3 * n + 3 * i], y[3 * n + 3 * i + 1], y[3 * n + 3 * i + 2]};
        }
    };
    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt.resize(dim);
        unpack(y);
        masses.masses(t, m);
        accumulate_curved(q, v, m, sigma, acc);
        for (std::size_t i = 0; i < 3 * n; ++i) dydt[i] = y[3 * n + i];
        for (std::size_t i = 0; i < n; ++i) {
            dydt[3 * n + 3 * i] = acc[i].x;
            dydt[3 * n + 3 * i + 1] = acc[i].y;
            dydt[3 * n + 3 * i + 2] = acc[i].z;
        }
    };

    Trajectory traj;
    traj.space = Trajectory::Space::Curved;
    traj.sigma = sigma;
    traj.n = n;
    const std::vector<double> ts = sample_grid(initial.t, t_end, options.sample_dt);

    auto drift_of = [&](const std::vector<double>& y) {
        unpack(y);
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d = std::max(d, std::abs(odot(q[i], q[i], sigma) - sg));
            d = std::max(d, std::abs(odot(q[i], v[i], sigma)));
        }
        return d;
    };

    auto post_step = [&](double, std::vector<double>& y) {
        traj.max_pre_projection_drift = std::max(traj.max_pre_projection_drift, drift_of(y));
        unpack(y);
        project(q, v, sigma);
        for (std::size_t i = 0; i < n; ++i) {
            y[3 * i] = q[i].x;
            y[3 * i + 1] = q[i].y;
            y[3 * i + 2] = q[i].z;
            y[3 * n + 3 * i] = v[i].x;
            y[3 * n + 3 * i + 1] = v[i].y;
            y[3 * n + 3 * i + 2] = v[i].z;
        }
    };

    std::vector<double> m_sample(n), rhs_at_sample(dim);
    auto sink = [&](double t, std::vector<double>& y, const std::vector<double>& dydt) {
        // Project the dense-output sample before recording it.
        unpack(y);
        project(q, v, sigma);
        for (std::size_t i = 0; i < n; ++i) {
            y[3 * i] = q[i].x;
            y[3 * i + 1] = q[i].y;
            y[3 * i + 2] = q[i].z;
            y[3 * n + 3 * i] = v[i].x;
            y[3 * n + 3 * i + 1] = v[i].y;
            y[3 * n + 3 * i + 2] = v[i].z;
        }
        traj.times.push_back(t);
        traj.positions.emplace_back(y.begin(), y.begin() + 3 * n);
        traj.velocities.emplace_back(y.begin() + 3 * n, y.end());
        masses.masses(t, m_sample);
        traj.masses.push_back(m_sample);

        double cdrift = 0.0, tdrift = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cdrift = std::max(cdrift, std::abs(odot(q[i], q[i], sigma) - sg));
            tdrift = std::max(tdrift, std::abs(odot(q[i], v[i], sigma)));
        }
        traj.max_constraint_drift = std::max(traj.max_constraint_drift, cdrift);
        traj.max_tangency_drift = std::max(traj.max_tangency_drift, tdrift);

        rhs(t, y, rhs_at_sample);
        double scale = 0.0, defect = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 a{rhs_at_sample[3 * n + 3 * i], rhs_at_sample[3 * n + 3 * i + 1],
                         rhs_at_sample[3 * n + 3 * i + 2]};
            const Vec3 ai{dydt[3 * n + 3 * i], dydt[3 * n + 3 * i + 1],
                          dydt[3 * n + 3 * i + 2]};
            scale = std::max(scale, norm(a));
            defect = std::max(defect, norm(ai - a));
        }
        traj.max_residual = std::max(traj.max_residual, defect / (1.0 + scale));
    };

    OdeOptions ode_opt;
    ode_opt.rel_tol = options.rel_tol;
    ode_opt.abs_tol = options.abs_tol;
    const OdeStats stats =
        integrate_ode(rhs, initial.t, t_end, std::move(y0), ts, sink, ode_opt, post_step);
    traj.steps_accepted = stats.accepted;
    traj.steps_rejected = stats.rejected;
    return traj;
}

}  // namespace ringdyn
