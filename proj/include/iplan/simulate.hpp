#pragma once

// Fixed-step RK4 integration of the two-state realization of the aggregated
// frequency response: swing state plus one governor washout state, with the
// governor path split into an instantaneous fraction F_s and a lagged
// fraction (R_s - F_s) / (1 + sT).

#include <cmath>
#include <cstddef>
#include <vector>

#include "iplan/errors.hpp"
#include "iplan/freq.hpp"

namespace iplan {

struct SimTrace {
    double dt = 0;
    double f_base_hz = 50.0;
    std::vector<double> freq_hz;     // deviation from nominal, Hz
    std::vector<double> deriv_hz_s;  // d(freq)/dt at the same samples
};

inline SimTrace simulate(const AggregateParams& a, double turbine_t, double delta_p,
                         double horizon_s = 30.0, double dt = 1e-3,
                         double f_base_hz = 50.0) {
    if (dt > 1e-2) throw StepTooLargeError();
    if (dt <= 0 || horizon_s <= 0) throw InputError("dt and horizon must be positive");
    if (a.M <= 0) throw ZeroInertiaError();
    if (turbine_t <= 0) throw InputError("turbine time constant must be positive");

    // w: frequency deviation [pu]; x: lagged governor power [pu].
    auto f_w = [&](double w, double x) {
        return (-delta_p - (a.D + a.F_s) * w + x) / a.M;
    };
    auto f_x = [&](double w, double x) {
        return (-(a.R_s - a.F_s) * w - x) / turbine_t;
    };

    const std::size_t steps = static_cast<std::size_t>(std::ceil(horizon_s / dt));
    SimTrace tr;
    tr.dt = dt;
    tr.f_base_hz = f_base_hz;
    tr.freq_hz.reserve(steps + 1);
    tr.deriv_hz_s.reserve(steps + 1);

    double w = 0.0, x = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        tr.freq_hz.push_back(f_base_hz * w);
        tr.deriv_hz_s.push_back(f_base_hz * f_w(w, x));
        const double k1w = f_w(w, x), k1x = f_x(w, x);
        const double k2w = f_w(w + 0.5 * dt * k1w, x + 0.5 * dt * k1x);
        const double k2x = f_x(w + 0.5 * dt * k1w, x + 0.5 * dt * k1x);
        const double k3w = f_w(w + 0.5 * dt * k2w, x + 0.5 * dt * k2x);
        const double k3x = f_x(w + 0.5 * dt * k2w, x + 0.5 * dt * k2x);
        const double k4w = f_w(w + dt * k3w, x + dt * k3x);
        const double k4x = f_x(w + dt * k3w, x + dt * k3x);
        w += dt / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        x += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    }
    return tr;
}

// Extracts nadir / RoCoF / QSS from a trace. RoCoF is the derivative at the
// first sample; QSS is the final sample. Throws NotSettledError when the
// trajectory is still moving at the end of the horizon.
inline FrequencyMetrics trace_metrics(const SimTrace& tr) {
    if (tr.freq_hz.size() < 2) throw InputError("trace too short");
    if (std::abs(tr.deriv_hz_s.back()) > 1e-6) throw NotSettledError();

    FrequencyMetrics m;
    m.rocof_hz_s = tr.deriv_hz_s.front();
    m.qss_hz = tr.freq_hz.back();
    double peak = 0.0;
    for (double v : tr.freq_hz)
        if (std::abs(v) > std::abs(peak)) peak = v;
    m.nadir_hz = peak;
    return m;
}

}  // namespace iplan
