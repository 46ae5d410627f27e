#include "ringdyn/force_law.hpp"

#include <algorithm>
#include <cmath>

#include "ringdyn/errors.hpp"

namespace ringdyn {

ForceLaw ForceLaw::newtonian() {
    ForceLaw law;
    law.kind_ = Kind::Newtonian;
    return law;
}

ForceLaw ForceLaw::quasihomogeneous(std::vector<Term> terms) {
    if (terms.empty()) throw ValidationError("quasihomogeneous law: needs at least one term");
    for (const auto& t : terms) {
        if (!(t.coeff > 0.0) || !std::isfinite(t.coeff))
            throw ValidationError("quasihomogeneous law: coefficients must be positive");
        if (!(t.exponent > 0.0) || !std::isfinite(t.exponent))
            throw ValidationError("quasihomogeneous law: exponents must be positive");
    }
    ForceLaw law;
    law.kind_ = Kind::Quasihomogeneous;
    law.terms_ = std::move(terms);
    return law;
}

ForceLaw ForceLaw::tabulated(std::vector<double> s, std::vector<double> f) {
    for (double v : f)
        if (!(v > 0.0)) throw ValidationError("tabulated law: values must be positive");
    for (double v : s)
        if (!(v > 0.0)) throw ValidationError("tabulated law: abscissae must be positive");
    ForceLaw law;
    law.kind_ = Kind::Tabulated;
    law.table_ = MonotoneCubic(std::move(s), std::move(f));
    law.has_table_ = true;
    return law;
}

void ForceLaw::set_domain_min(double v) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError("force law: domain_min must be positive");
    domain_min_ = v;
}

double ForceLaw::table_min() const {
    if (!has_table_) throw ValidationError("force law: not tabulated");
    return table_.x_min();
}

double ForceLaw::table_max() const {
    if (!has_table_) throw ValidationError("force law: not tabulated");
    return table_.x_max();
}

double ForceLaw::raw(double s) const {
    if (!(s > 0.0)) throw DomainError("force law: squared separation must be positive");
    switch (kind_) {
        case Kind::Newtonian:
            return 1.0 / (s * std::sqrt(s));
        case Kind::Quasihomogeneous: {
            double v = 0.0;
            for (const auto& t : terms_) v += t.coeff * std::pow(s, -t.exponent);
            return v;
        }
        case Kind::Tabulated:
            return table_(s);
    }
    throw DomainError("force law: unknown kind");
}

double ForceLaw::operator()(double s) const {
    if (!(s > 0.0)) throw DomainError("force law: squared separation must be positive");
    if (s < domain_min_)
        throw DomainError("force law: squared separation below domain minimum");
    return raw(s);
}

AngularKernel AngularKernel::flat(ForceLaw law, double radius) {
    if (!(radius > 0.0)) throw ValidationError("angular kernel: radius must be positive");
    AngularKernel k;
    k.flat_ = true;
    k.radius_ = radius;
    k.law_ = std::move(law);
    return k;
}

AngularKernel AngularKernel::curved(int sigma, double radius) {
    if (sigma != 1 && sigma != -1)
        throw ValidationError("angular kernel: curvature sign must be +1 or -1");
    if (!(radius > 0.0)) throw ValidationError("angular kernel: radius must be positive");
    AngularKernel k;
    k.flat_ = false;
    k.sigma_ = sigma;
    k.radius_ = radius;
    return k;
}

double AngularKernel::radial(double u) const {
    const double r2 = radius_ * radius_;
    if (flat_) return law_.raw(2.0 * r2 * u);
    const double w = r2 * u;
    const double den = 2.0 * w - static_cast<double>(sigma_) * w * w;
    if (!(den > 0.0))
        throw SingularConfigError("curved kernel: singular denominator at gap with 1-cos = " +
                                  std::to_string(u));
    return 1.0 / (den * std::sqrt(den));
}

double AngularKernel::operator()(double gap) const {
    return std::sin(gap) * radial(1.0 - std::cos(gap));
}

MonotonicityReport check_sqrt_decreasing(const ForceLaw& law, double s_min, double s_max,
                                         int grid_points) {
    if (!(s_min > 0.0) || !(s_max > s_min))
        throw ValidationError("admissibility check: need 0 < s_min < s_max");
    if (grid_points < 2) throw ValidationError("admissibility check: need at least 2 grid points");

    const double tol = 1e-12;
    const double la = std::log(s_min), lb = std::log(s_max);
    MonotonicityReport rep;
    rep.decreasing = true;
    double prev = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double s =
            std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(grid_points - 1));
        const double h = std::sqrt(s) * law(s);
        if (k > 0 && h - prev > tol) {
            rep.decreasing = false;
            rep.first_violation = s;
            return rep;
        }
        prev = h;
    }
    return rep;
}

MonotonicityReport check_g_decreasing(const AngularKernel& kernel, int grid_points) {
    if (grid_points < 2) throw ValidationError("kernel check: need at least 2 grid points");
    const double eps = 1e-6;
    const double tol = 1e-12;
    MonotonicityReport rep;
    rep.decreasing = true;

    if (kernel.is_flat()) {
        double prev = 0.0;
        for (int k = 0; k < grid_points; ++k) {
            const double x = eps + (2.0 * M_PI - 2.0 * eps) * static_cast<double>(k) /
                                       static_cast<double>(grid_points - 1);
            const double g = kernel(x);
            if (k > 0 && g - prev > tol) {
                rep.decreasing = false;
                rep.first_violation = x;
                return rep;
            }
            prev = g;
        }
        return rep;
    }

    // Curved: check the admissibility quantity sqrt(u) radial(u) against the
    // gap-induced u = 1 - cos(x) grid, ordered by u.
    std::vector<std::pair<double, double>> ux;  // (u, gap)
    ux.reserve(static_cast<std::size_t>(grid_points));
    for (int k = 0; k < grid_points; ++k) {
        const double x = eps + (2.0 * M_PI - 2.0 * eps) * static_cast<double>(k) /
                                   static_cast<double>(grid_points - 1);
        ux.emplace_back(1.0 - std::cos(x), x);
    }
    std::sort(ux.begin(), ux.end());
    double prev = 0.0;
    bool first = true;
    for (const auto& [u, x] : ux) {
        const double h = std::sqrt(u) * kernel.radial(u);
        if (!first && h - prev > tol) {
            rep.decreasing = false;
            rep.first_violation = x;
            return rep;
        }
        prev = h;
        first = false;
    }
    return rep;
}

}  // namespace ringdyn
