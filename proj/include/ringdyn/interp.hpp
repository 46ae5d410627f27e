#pragma once

#include <cstddef>
#include <vector>

namespace ringdyn {

// Natural cubic spline through (x_k, y_k). C2, refuses extrapolation.
// Used where twice-differentiable reconstruction is required (mass tables,
// tabulated radius profiles).
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::size_t locate(double x) const;
    std::vector<double> x_, y_, m_;  // m_: knot second derivatives
};

// Monotone cubic interpolant (Fritsch-Carlson slopes). C1, no overshoot
// between knots, refuses extrapolation. Used for tabulated force laws.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::size_t locate(double x) const;
    std::vector<double> x_, y_, d_;  // d_: knot slopes
};

}  // namespace ringdyn
