#include "ringdyn/flat_dynamics.hpp"

#include <cmath>
#include <string>

#include "ringdyn/errors.hpp"
#include "ringdyn/ode.hpp"

namespace ringdyn {

void validate_state(const FlatState& state) {
    if (state.positions.empty()) throw ValidationError("state: needs at least one body");
    if (state.positions.size() != state.velocities.size())
        throw ValidationError("state: position/velocity counts differ");
    for (const auto& p : state.positions)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ValidationError("state: non-finite position");
    for (const auto& v : state.velocities)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw ValidationError("state: non-finite velocity");
}

FlatState Trajectory::flat_state(std::size_t k) const {
    FlatState s;
    s.t = times.at(k);
    s.positions.resize(n);
    s.velocities.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.positions[i] = {positions[k][2 * i], positions[k][2 * i + 1]};
        s.velocities[i] = {velocities[k][2 * i], velocities[k][2 * i + 1]};
    }
    return s;
}

namespace {

void accumulate_acceleration(const std::vector<Vec2>& q, const std::vector<double>& m,
                             const ForceLaw& law, std::vector<Vec2>& acc) {
    const std::size_t n = q.size();
    acc.assign(n, Vec2{});
    const double dmin = law.domain_min();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 d = q[j] - q[i];
            const double s = norm2(d);
            if (s < dmin)
                throw CollisionError("collision: bodies " + std::to_string(i) + " and " +
                                     std::to_string(j) + " within domain minimum");
            const double w = law(s);
            acc[i] += m[j] * w * d;
            acc[j] -= m[i] * w * d;
        }
    }
}

}  // namespace

std::vector<Vec2> acceleration(const FlatState& state, const MassModel& masses,
                               const ForceLaw& law) {
    validate_state(state);
    if (masses.size() != state.size())
        throw ValidationError("acceleration: mass count does not match body count");
    std::vector<double> m;
    masses.masses(state.t, m);
    std::vector<Vec2> acc;
    accumulate_acceleration(state.positions, m, law, acc);
    return acc;
}

double angular_momentum(const FlatState& state, const MassModel& masses) {
    validate_state(state);
    if (masses.size() != state.size())
        throw ValidationError("angular momentum: mass count does not match body count");
    double L = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        L += masses.mass(i, state.t) * cross(state.positions[i], state.velocities[i]);
    return L;
}

double residual(const FlatState& state, const MassModel& masses, const ForceLaw& law,
                const std::vector<Vec2>& claimed) {
    if (claimed.size() != state.size())
        throw ValidationError("residual: claimed acceleration count does not match body count");
    const std::vector<Vec2> acc = acceleration(state, masses, law);
    double scale = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        scale = std::max(scale, norm(acc[i]));
        defect = std::max(defect, norm(claimed[i] - acc[i]));
    }
    return defect / (1.0 + scale);
}

std::vector<double> sample_grid(double t0, double t_end, double sample_dt) {
    if (!(sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
    if (!(t_end > t0)) throw ValidationError("sample grid: end time must exceed start time");
    std::vector<double> ts;
    const double span = t_end - t0;
    const long k_max = static_cast<long>(std::floor(span / sample_dt + 1e-9));
    ts.reserve(static_cast<std::size_t>(k_max) + 2);
    for (long k = 0; k <= k_max; ++k) ts.push_back(t0 + static_cast<double>(k) * sample_dt);
    if (t_end - ts.back() > 1e-9 * sample_dt) ts.push_back(t_end);
    else ts.back() = t_end;
    return ts;
}

Trajectory integrate(const FlatState& initial, const MassModel& masses, const ForceLaw& law,
                     double t_end, const IntegrateOptions& options) {
    validate_state(initial);
    if (masses.size() != initial.size())
        throw ValidationError("integrate: mass count does not match body count");
    if (!(t_end > initial.t)) throw ValidationError("integrate: t_end must exceed initial time");

    const std::size_t n = initial.size();
    const std::size_t dim = 4 * n;

    std::vector<double> y0(dim);
    for (std::size_t i = 0; i < n; ++i) {
        y0[2 * i] = initial.positions[i].x;
        y0[2 * i + 1] = initial.positions[i].y;
        y0[2 * n + 2 * i] = initial.velocities[i].x;
        y0[2 * n + 2 * i + 1] = initial.velocities[i].y;
    }

    std::vector<Vec2> q(n), acc(n);
    std::vector<double> m(n);
    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt.resize(dim);
        for (std::size_t i = 0; i < n; ++i) q[i] = {y[2 * i], y[2 * i + 1]};
        masses.masses(t, m);
        accumulate_acceleration(q, m, law, acc);
        for (std::size_t i = 0; i < 2 * n; ++i) dydt[i] = y[2 * n + i];
        for (std::size_t i = 0; i < n; ++i) {
            dydt[2 * n + 2 * i] = acc[i].x;
            dydt[2 * n + 2 * i + 1] = acc[i].y;
        }
    };

    Trajectory traj;
    traj.space = Trajectory::Space::Flat;
    traj.n = n;
    const std::vector<double> ts = sample_grid(initial.t, t_end, options.sample_dt);

    std::vector<double> m_sample(n), rhs_at_sample(dim);
    auto sink = [&](double t, std::vector<double>& y, const std::vector<double>& dydt) {
        traj.times.push_back(t);
        traj.positions.emplace_back(y.begin(), y.begin() + 2 * n);
        traj.velocities.emplace_back(y.begin() + 2 * n, y.end());
        masses.masses(t, m_sample);
        traj.masses.push_back(m_sample);
        // Defect of the dense output against the dynamics at the sample.
        rhs(t, y, rhs_at_sample);
        double scale = 0.0, defect = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a{rhs_at_sample[2 * n + 2 * i], rhs_at_sample[2 * n + 2 * i + 1]};
            const Vec2 ai{dydt[2 * n + 2 * i], dydt[2 * n + 2 * i + 1]};
            scale = std::max(scale, norm(a));
            defect = std::max(defect, norm(ai - a));
        }
        traj.max_residual = std::max(traj.max_residual, defect / (1.0 + scale));
    };

    OdeOptions ode_opt;
    ode_opt.rel_tol = options.rel_tol;
    ode_opt.abs_tol = options.abs_tol;
    const OdeStats stats = integrate_ode(rhs, initial.t, t_end, std::move(y0), ts, sink, ode_opt);
    traj.steps_accepted = stats.accepted;
    traj.steps_rejected = stats.rejected;
    return traj;
}

}  // namespace ringdyn
