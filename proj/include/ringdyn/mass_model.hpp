#pragma once

#include <cstddef>
#include <vector>

#include "ringdyn/interp.hpp"

namespace ringdyn {

// Per-body masses, constant or time-tabulated. Tabulated bodies use a C2
// spline so synthesized orbits can be differentiated twice; every queried
// value must be strictly positive.
class MassModel {
  public:
    struct Table {
        std::vector<double> times;
        std::vector<double> values;
    };

    static MassModel constant(std::vector<double> masses);
    static MassModel tabulated(std::vector<Table> tables);

    std::size_t size() const { return n_; }
    bool is_constant() const { return constant_; }

    double mass(std::size_t body, double t) const;
    void masses(double t, std::vector<double>& out) const;

  private:
    MassModel() = default;
    std::size_t n_ = 0;
    bool constant_ = true;
    std::vector<double> values_;
    std::vector<CubicSpline> splines_;
};

}  // namespace ringdyn
