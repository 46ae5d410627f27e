#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ringdyn {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_min = 1e-14;    // below this the step controller declares stiffness
    long max_steps = 20000000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
};

// Called for every requested sample time with the dense-output state and its
// time derivative at that time. The state may be adjusted in place (e.g.
// constraint projection) before it is recorded by the caller.
using SampleSink =
    std::function<void(double t, std::vector<double>& y, const std::vector<double>& dydt)>;

// Called after every accepted step with the step end state; may project it.
using PostStep = std::function<void(double t, std::vector<double>& y)>;

using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

// Adaptive Dormand-Prince 5(4) with a 4th-order continuous extension.
// Samples are evaluated from the dense polynomial of the accepted step that
// covers them, so the sampled states do not depend on the sample grid.
OdeStats integrate_ode(const Rhs& rhs, double t0, double t1, std::vector<double> y0,
                       const std::vector<double>& sample_times, const SampleSink& on_sample,
                       const OdeOptions& options = {}, const PostStep& post_step = nullptr);

}  // namespace ringdyn
