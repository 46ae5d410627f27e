#include "ringdyn/mass_model.hpp"

#include <cmath>
#include <string>

#include "ringdyn/errors.hpp"

namespace ringdyn {

MassModel MassModel::constant(std::vector<double> masses) {
    if (masses.empty()) throw ValidationError("mass model: needs at least one body");
    for (double m : masses)
        if (!(m > 0.0) || !std::isfinite(m))
            throw ValidationError("mass model: masses must be positive and finite");
    MassModel mm;
    mm.n_ = masses.size();
    mm.constant_ = true;
    mm.values_ = std::move(masses);
    return mm;
}

MassModel MassModel::tabulated(std::vector<Table> tables) {
    if (tables.empty()) throw ValidationError("mass model: needs at least one body");
    MassModel mm;
    mm.n_ = tables.size();
    mm.constant_ = false;
    mm.splines_.reserve(tables.size());
    for (auto& tb : tables) {
        for (double v : tb.values)
            if (!(v > 0.0))
                throw ValidationError("mass model: tabulated masses must be positive");
        mm.splines_.emplace_back(std::move(tb.times), std::move(tb.values));
    }
    return mm;
}

double MassModel::mass(std::size_t body, double t) const {
    if (body >= n_) throw ValidationError("mass model: body index out of range");
    if (constant_) return values_[body];
    const double m = splines_[body](t);
    if (!(m > 0.0))
        throw DomainError("mass model: interpolated mass is not positive at t=" +
                          std::to_string(t));
    return m;
}

void MassModel::masses(double t, std::vector<double>& out) const {
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = mass(i, t);
}

}  // namespace ringdyn
