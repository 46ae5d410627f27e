#include "ringdyn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringdyn/errors.hpp"

namespace ringdyn {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Dense-output weights for the 4th-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct Dense {
    double t0 = 0.0, h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;

    // P(theta) = r1 + theta(r2 + (1-theta)(r3 + theta(r4 + (1-theta) r5)))
    void eval(double t, std::vector<double>& out) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        const std::size_t n = r1.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }

    void eval_derivative(double t, std::vector<double>& out) const {
        const double th = (t - t0) / h;
        const std::size_t n = r1.size();
        out.resize(n);
        const double w3 = 1.0 - 2.0 * th;
        const double w4 = th * (2.0 - 3.0 * th);
        const double w5 = 2.0 * th * (1.0 - th) * (1.0 - 2.0 * th);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = (r2[i] + w3 * r3[i] + w4 * r4[i] + w5 * r5[i]) / h;
    }
};

}  // namespace

OdeStats integrate_ode(const Rhs& rhs, double t0, double t1, std::vector<double> y,
                       const std::vector<double>& sample_times, const SampleSink& on_sample,
                       const OdeOptions& opt, const PostStep& post_step) {
    if (!(t1 > t0)) throw ValidationError("integrate: end time must exceed start time");
    if (!(opt.rel_tol > 0.0 && opt.rel_tol <= 1e-2) || !(opt.abs_tol > 0.0 && opt.abs_tol <= 1e-2))
        throw ValidationError("integrate: tolerances must lie in (0, 1e-2]");

    const std::size_t dim = y.size();
    const double span = t1 - t0;
    OdeStats stats;

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim), yerr(dim);
    std::vector<double> sample_y(dim), sample_dy(dim);
    Dense dense;
    dense.r1.resize(dim);
    dense.r2.resize(dim);
    dense.r3.resize(dim);
    dense.r4.resize(dim);
    dense.r5.resize(dim);

    std::size_t next_sample = 0;
    auto emit_up_to = [&](double t_reached, bool have_dense) {
        const double fuzz = 1e-12 * std::max(1.0, std::abs(t_reached));
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t_reached + fuzz) {
            const double ts = sample_times[next_sample];
            if (have_dense) {
                dense.eval(ts, sample_y);
                dense.eval_derivative(ts, sample_dy);
            } else {
                sample_y = y;
                rhs(ts, sample_y, sample_dy);
            }
            on_sample(ts, sample_y, sample_dy);
            ++next_sample;
        }
    };

    double t = t0;
    rhs(t, y, k1);
    emit_up_to(t0, false);  // samples at (or numerically before) t0

    // Initial step from the state/derivative balance in the scaled norm;
    // a too-small guess recovers quickly through the growth factor.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
            const double qy = y[i] / sc;
            const double qf = k1[i] / sc;
            d0 += qy * qy;
            d1 += qf * qf;
        }
        d0 = std::sqrt(d0 / static_cast<double>(dim));
        d1 = std::sqrt(d1 / static_cast<double>(dim));
        h = (d0 > 0.0 && d1 > 0.0) ? 0.01 * d0 / d1 : 1e-6 * span;
        h = std::min(h, 0.1 * span);
        if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6 * span;
    }

    bool last_rejected = false;
    long steps = 0;
    while (t < t1) {
        if (++steps > opt.max_steps)
            throw StiffnessError("integrate: step budget exhausted at t=" + std::to_string(t));
        if (h < opt.h_min)
            throw StiffnessError("integrate: step size underflow at t=" + std::to_string(t));
        if (t + h > t1) h = t1 - t;

        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = e / sc;
            err += q * q;
        }
        err = std::sqrt(err / static_cast<double>(dim));

        if (err <= 1.0) {
            ++stats.accepted;
            dense.t0 = t;
            dense.h = h;
            for (std::size_t i = 0; i < dim; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                dense.r1[i] = y[i];
                dense.r2[i] = ydiff;
                dense.r3[i] = bspl;
                dense.r4[i] = ydiff - h * k7[i] - bspl;
                dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
            }
            t += h;
            y.swap(ynew);
            emit_up_to(t, true);
            if (post_step) {
                post_step(t, y);
                rhs(t, y, k1);  // projection may move the state off the FSAL derivative
            } else {
                k1.swap(k7);
            }
            double fac = 0.9 * std::pow(err > 0.0 ? err : 1e-16, -0.2);
            fac = std::min(5.0, std::max(0.2, fac));
            if (last_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            last_rejected = false;
        } else {
            ++stats.rejected;
            last_rejected = true;
            double fac = 0.9 * std::pow(err, -0.2);
            h *= std::min(0.9, std::max(0.2, fac));
        }
    }

    emit_up_to(t1, false);  // samples that round past t1
    return stats;
}

}  // namespace ringdyn
