#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringdyn/interp.hpp"

namespace ringdyn {

// Attraction profile f acting on squared separations: the acceleration of a
// body is a sum of m_j (q_j - q_i) f(|q_j - q_i|^2) contributions. f must be
// positive; a law is admissible when sqrt(s) f(s) is decreasing.
class ForceLaw {
  public:
    enum class Kind { Newtonian, Quasihomogeneous, Tabulated };

    struct Term {
        double coeff;
        double exponent;  // f contribution coeff * s^(-exponent)
    };

    static ForceLaw newtonian();  // f(s) = s^(-3/2)
    static ForceLaw quasihomogeneous(std::vector<Term> terms);
    static ForceLaw tabulated(std::vector<double> s, std::vector<double> f);

    // Value with the collision gate: s must be >= domain_min().
    double operator()(double s) const;

    // Value with only positivity (and table range) enforced. Analytic
    // diagnostics sample kernels at gaps approaching zero separation and
    // must not trip the collision gate.
    double raw(double s) const;

    double domain_min() const { return domain_min_; }
    void set_domain_min(double v);

    Kind kind() const { return kind_; }
    const std::vector<Term>& terms() const { return terms_; }
    double table_min() const;
    double table_max() const;

  private:
    ForceLaw() = default;
    Kind kind_ = Kind::Newtonian;
    double domain_min_ = 1e-12;
    std::vector<Term> terms_;
    MonotoneCubic table_;
    bool has_table_ = false;
};

// Ring interaction kernel at angular gap x in (0, 2pi) for bodies sharing a
// circle of the given radius. Flat kernels wrap a ForceLaw; curved kernels
// are intrinsic to the curvature sign.
class AngularKernel {
  public:
    static AngularKernel flat(ForceLaw law, double radius);
    static AngularKernel curved(int sigma, double radius);

    // Kernel value sin(x) * radial(1 - cos x).
    double operator()(double gap) const;

    // Radial factor as a function of u = 1 - cos(gap): flat -> f(2 r^2 u),
    // curved -> (2 r^2 u - sigma (r^2 u)^2)^(-3/2).
    double radial(double u) const;

    bool is_flat() const { return flat_; }
    int sigma() const { return sigma_; }
    double radius() const { return radius_; }
    const ForceLaw& law() const { return law_; }

  private:
    AngularKernel() = default;
    bool flat_ = true;
    int sigma_ = 1;
    double radius_ = 1.0;
    ForceLaw law_ = ForceLaw::newtonian();
};

struct MonotonicityReport {
    bool decreasing = false;
    std::optional<double> first_violation;  // abscissa of the first observed rise
};

// Samples sqrt(s) f(s) on a log-spaced grid of grid_points points covering
// [s_min, s_max]; the law is admissible when the samples never rise by more
// than 1e-12.
MonotonicityReport check_sqrt_decreasing(const ForceLaw& law, double s_min, double s_max,
                                         int grid_points);

// Monotonicity probe for ring kernels over gaps in (eps, 2pi - eps),
// eps = 1e-6. Flat kernels must have a decreasing kernel value; curved
// kernels are checked through the admissibility quantity sqrt(u) radial(u),
// u = 1 - cos(gap), the form whose decrease the gap diagnostics rely on
// (for sigma=+1 it fails for ring radii above sqrt(10)/5).
MonotonicityReport check_g_decreasing(const AngularKernel& kernel, int grid_points);

}  // namespace ringdyn
