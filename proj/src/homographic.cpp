#include "ringdyn/homographic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ringdyn/errors.hpp"
#include "ringdyn/flat_dynamics.hpp"
#include "ringdyn/mass_model.hpp"

namespace ringdyn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

RadiusProfile RadiusProfile::constant(double r0) {
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw ValidationError("constant radius must be positive and finite", "r.value");
    RadiusProfile p;
    p.kind_ = Kind::Constant;
    p.c0_ = r0;
    return p;
}

RadiusProfile RadiusProfile::sinusoid(double c0, double c1, double omega, double phase) {
    if (!std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(omega) ||
        !std::isfinite(phase))
        throw ValidationError("sinusoid parameters must be finite", "r");
    if (!(c0 > 0.0)) throw ValidationError("mean radius must be positive", "r.c0");
    if (!(std::abs(c1) < c0))
        throw ValidationError("amplitude must be smaller than the mean radius", "r.c1");
    RadiusProfile p;
    p.kind_ = Kind::Sinusoid;
    p.c0_ = c0;
    p.c1_ = c1;
    p.omega_ = omega;
    p.phase_ = phase;
    return p;
}

RadiusProfile RadiusProfile::tabulated(std::vector<double> times, std::vector<double> values) {
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("tabulated radii must be positive and finite", "r.values");
    RadiusProfile p;
    p.kind_ = Kind::Table;
    p.table_.emplace(std::move(times), std::move(values));
    return p;
}

double RadiusProfile::r(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return c0_;
        case Kind::Sinusoid:
            return c0_ + c1_ * std::sin(omega_ * t + phase_);
        case Kind::Table: {
            double v = (*table_)(t);
            if (!(v > 0.0)) throw DomainError("tabulated radius is not positive here");
            return v;
        }
    }
    return c0_;
}

double RadiusProfile::dr(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Sinusoid:
            return c1_ * omega_ * std::cos(omega_ * t + phase_);
        case Kind::Table:
            return table_->derivative(t);
    }
    return 0.0;
}

double RadiusProfile::ddr(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Sinusoid:
            return -c1_ * omega_ * omega_ * std::sin(omega_ * t + phase_);
        case Kind::Table:
            return table_->second_derivative(t);
    }
    return 0.0;
}

double regular_polygon_sum(std::size_t n, double r, const ForceLaw& law) {
    if (n < 2) throw ValidationError("a ring needs at least 2 bodies", "n");
    if (!(r > 0.0) || !std::isfinite(r))
        throw ValidationError("radius must be positive and finite", "r");
    double sum = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        double u = 1.0 - std::cos(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        sum += u * law(2.0 * r * r * u);
    }
    return sum;
}

double ring_mass(const HomographicProfile& profile, double t) {
    if (profile.n < 2) throw ValidationError("a ring needs at least 2 bodies", "n");
    if (profile.central_mass && !(*profile.central_mass > 0.0))
        throw ValidationError("central mass must be positive", "central_mass");
    const double r = profile.radius.r(t);
    const double rdd = profile.radius.ddr(t);
    const double S = regular_polygon_sum(profile.n, r, profile.law);

    double pull = rdd;
    if (profile.central_mass)
        pull += r * (*profile.central_mass) * profile.law(r * r);
    const double num = profile.a * profile.a - pull * r * r * r;
    const double den = r * r * r * r * S;
    if (!(num > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "profile needs nonpositive ring mass at t=%.6g "
                      "(numerator %.6g)", t, num);
        throw InfeasibleProfileError(buf);
    }
    return num / den;
}

Trajectory synthesize_orbit(const HomographicProfile& profile, double t0, double t1,
                            const SynthesisOptions& opts) {
    if (!(t1 > t0)) throw ValidationError("time span must be increasing", "span");
    if (!(opts.sample_dt > 0.0))
        throw ValidationError("sample spacing must be positive", "sample_dt");
    if (profile.n < 2) throw ValidationError("a ring needs at least 2 bodies", "n");

    const std::vector<double> grid = sample_grid(t0, t1, opts.sample_dt);
    const std::size_t n_ring = profile.n;
    const bool with_center = profile.central_mass.has_value();
    const std::size_t n_total = n_ring + (with_center ? 1 : 0);

    Trajectory traj;
    traj.space = Trajectory::Space::Flat;
    traj.n = n_total;
    traj.times = grid;

    // phi(t0) = 0; later values accumulate the quadrature of a / r^2.
    std::vector<double> phi(grid.size(), 0.0);
    auto rate = [&](double s) {
        double rr = profile.radius.r(s);
        return profile.a / (rr * rr);
    };
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double inc = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            rate, grid[k - 1], grid[k], 12, 1e-13);
        phi[k] = phi[k - 1] + inc;
    }

    traj.positions.resize(grid.size());
    traj.velocities.resize(grid.size());
    traj.masses.resize(grid.size());
    double worst = 0.0;

    std::vector<Vec2> claimed(n_total);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const double r = profile.radius.r(t);
        const double rd = profile.radius.dr(t);
        const double rdd = profile.radius.ddr(t);
        const double phid = profile.a / (r * r);
        const double m = ring_mass(profile, t);

        auto& pos = traj.positions[k];
        auto& vel = traj.velocities[k];
        auto& mas = traj.masses[k];
        pos.resize(2 * n_total);
        vel.resize(2 * n_total);
        mas.resize(n_total);

        const double a_radial = rdd - profile.a * profile.a / (r * r * r);
        for (std::size_t i = 0; i < n_ring; ++i) {
            double theta = phi[k] + kTwoPi * static_cast<double>(i) / static_cast<double>(n_ring);
            double c = std::cos(theta), s = std::sin(theta);
            pos[2 * i + 0] = r * c;
            pos[2 * i + 1] = r * s;
            vel[2 * i + 0] = rd * c - r * phid * s;
            vel[2 * i + 1] = rd * s + r * phid * c;
            mas[i] = m;
            claimed[i] = {a_radial * c, a_radial * s};
        }
        if (with_center) {
            pos[2 * n_ring + 0] = 0.0;
            pos[2 * n_ring + 1] = 0.0;
            vel[2 * n_ring + 0] = 0.0;
            vel[2 * n_ring + 1] = 0.0;
            mas[n_ring] = *profile.central_mass;
            claimed[n_ring] = {0.0, 0.0};
        }

        FlatState state = traj.flat_state(k);
        worst = std::max(worst, residual(state, MassModel::constant(mas), profile.law, claimed));
    }
    traj.max_residual = worst;
    return traj;
}

namespace {

struct ConfigSystem {
    const std::vector<double>& m;
    const ForceLaw& law;
    double r;
    std::optional<double> A2;

    std::size_t n() const { return m.size(); }
    std::size_t unknowns() const { return n() - 1; }
    std::size_t equations() const { return A2 ? 2 * n() : 2 * n() - 1; }

    double radial(const std::vector<double>& alpha, std::size_t i) const {
        double sum = 0.0;
        for (std::size_t j = 0; j < n(); ++j) {
            if (j == i) continue;
            double u = 1.0 - std::cos(alpha[j] - alpha[i]);
            sum += m[j] * u * law(2.0 * r * r * u);
        }
        return sum;
    }

    double tangential(const std::vector<double>& alpha, std::size_t i) const {
        double sum = 0.0;
        for (std::size_t j = 0; j < n(); ++j) {
            if (j == i) continue;
            double u = 1.0 - std::cos(alpha[j] - alpha[i]);
            sum += m[j] * std::sin(alpha[j] - alpha[i]) * law(2.0 * r * r * u);
        }
        return sum;
    }

    // x holds alpha[1..n-1]; alpha[0] is gauge-fixed to zero.
    Eigen::VectorXd residuals(const Eigen::VectorXd& x) const {
        std::vector<double> alpha(n());
        alpha[0] = 0.0;
        for (std::size_t i = 1; i < n(); ++i) alpha[i] = x[static_cast<long>(i - 1)];
        Eigen::VectorXd F(static_cast<long>(equations()));
        double spin2 = A2 ? *A2 : radial(alpha, 0);
        long row = 0;
        std::size_t first_radial = A2 ? 0 : 1;
        for (std::size_t i = first_radial; i < n(); ++i)
            F[row++] = radial(alpha, i) - spin2;
        for (std::size_t i = 0; i < n(); ++i) F[row++] = tangential(alpha, i);
        return F;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        const double h = 1e-6;
        Eigen::MatrixXd J(static_cast<long>(equations()), static_cast<long>(unknowns()));
        for (long c = 0; c < static_cast<long>(unknowns()); ++c) {
            Eigen::VectorXd xp = x, xm = x;
            xp[c] += h;
            xm[c] -= h;
            J.col(c) = (residuals(xp) - residuals(xm)) / (2.0 * h);
        }
        return J;
    }
};

double circular_distance(double a, double b) {
    double d = std::abs(std::remainder(a - b, kTwoPi));
    return d;
}

bool same_configuration(const PolygonalConfiguration& a, const PolygonalConfiguration& b) {
    if (a.alphas.size() != b.alphas.size()) return false;
    for (std::size_t i = 0; i < a.alphas.size(); ++i)
        if (circular_distance(a.alphas[i], b.alphas[i]) > 1e-6) return false;
    return true;
}

bool lexicographic_less(const PolygonalConfiguration& a, const PolygonalConfiguration& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return a.alphas < b.alphas;
}

}  // namespace

SolveReport solve_polygonal_configuration(const std::vector<double>& masses,
                                          const ForceLaw& law, const SolveOptions& opts) {
    const std::size_t n = masses.size();
    if (n < 2) throw ValidationError("need at least 2 masses", "masses");
    for (std::size_t i = 0; i < n; ++i)
        if (!(masses[i] > 0.0) || !std::isfinite(masses[i]))
            throw ValidationError("masses must be positive and finite", "masses");
    if (!(opts.r > 0.0) || !std::isfinite(opts.r))
        throw ValidationError("radius must be positive and finite", "r");
    if (opts.A2 && !(*opts.A2 > 0.0))
        throw ValidationError("prescribed squared spin must be positive", "A2");
    if (opts.starts < 1) throw ValidationError("need at least one start", "starts");

    ConfigSystem sys{masses, law, opts.r, opts.A2};
    std::mt19937_64 rng(opts.seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    SolveReport report;
    report.starts = opts.starts;
    std::vector<PolygonalConfiguration> terminals;

    for (int start = 0; start < opts.starts; ++start) {
        Eigen::VectorXd x(static_cast<long>(n - 1));
        if (start == 0) {
            for (std::size_t i = 1; i < n; ++i)
                x[static_cast<long>(i - 1)] =
                    kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        } else {
            std::vector<double> draws(n - 1);
            for (auto& d : draws) d = kTwoPi * uniform();
            std::sort(draws.begin(), draws.end());
            for (std::size_t i = 0; i + 1 < n; ++i) x[static_cast<long>(i)] = draws[i];
        }

        bool valid = true;
        Eigen::VectorXd F;
        try {
            F = sys.residuals(x);
        } catch (const Error&) {
            valid = false;
        }

        for (int iter = 0; valid && iter < 200; ++iter) {
            double norm = F.lpNorm<Eigen::Infinity>();
            if (norm <= 1e-14) break;
            Eigen::MatrixXd J;
            try {
                J = sys.jacobian(x);
            } catch (const Error&) {
                valid = false;
                break;
            }
            Eigen::VectorXd step = J.colPivHouseholderQr().solve(-F);
            if (!step.allFinite() || step.norm() < 1e-15) break;

            double lambda = 1.0;
            bool improved = false;
            double f2 = F.squaredNorm();
            while (lambda >= 1e-6) {
                Eigen::VectorXd xt = x + lambda * step;
                Eigen::VectorXd Ft;
                try {
                    Ft = sys.residuals(xt);
                } catch (const Error&) {
                    lambda *= 0.5;
                    continue;
                }
                if (Ft.squaredNorm() < f2) {
                    x = xt;
                    F = Ft;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!improved) break;  // stalled at a stationary point
        }
        if (!valid || !F.allFinite()) continue;

        PolygonalConfiguration cfg;
        cfg.alphas.resize(n);
        cfg.alphas[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            double a = std::fmod(x[static_cast<long>(i - 1)], kTwoPi);
            if (a < 0.0) a += kTwoPi;
            cfg.alphas[i] = a;
        }
        cfg.residual = F.lpNorm<Eigen::Infinity>();
        {
            std::vector<double> alpha(cfg.alphas);
            cfg.A2 = opts.A2 ? *opts.A2 : sys.radial(alpha, 0);
        }
        if (cfg.residual <= 1e-10) ++report.converged;

        bool dup = false;
        for (auto& known : terminals) {
            if (same_configuration(known, cfg)) {
                if (cfg.residual < known.residual) known = cfg;
                dup = true;
                break;
            }
        }
        if (!dup) terminals.push_back(cfg);
    }

    for (auto& cfg : terminals) {
        if (cfg.residual <= 1e-10)
            report.solutions.push_back(cfg);
        else
            report.stationary.push_back(cfg);
    }
    std::sort(report.solutions.begin(), report.solutions.end(), lexicographic_less);
    std::sort(report.stationary.begin(), report.stationary.end(), lexicographic_less);
    return report;
}

}  // namespace ringdyn
