#pragma once

// First-order (Taylor) model of the nadir gain h: the nadir constraint
// |p| <= h * df_max is nonlinear in the fleet aggregates, so h is expanded
// around a frozen operating point with finite-difference sensitivities.

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>

#include "iplan/errors.hpp"
#include "iplan/freq.hpp"

namespace iplan {

// Expansion point and sensitivities of h with respect to (D, R_s, F_s, M).
struct TaylorPoint {
    double D = 0, R_s = 0, F_s = 0, M = 0;
    double h0 = 0;
    double dh_dD = 0, dh_dRs = 0, dh_dFs = 0, dh_dM = 0;
    double turbine_t = 0;
};

struct ApproxErrorStats {
    double mean_abs = 0, max_abs = 0;   // |exact - approx| in pu frequency
    double mean_rel = 0, max_rel = 0;   // relative to |exact|
    std::size_t samples = 0;
};

// Nadir gain h such that |delta_f_pu| = |delta_p_pu| / h for the underdamped
// closed form. Requires zeta < 1 and R_s >= F_s.
inline double nadir_gain_at(double D, double R_s, double F_s, double M, double turbine_t) {
    AggregateParams a;
    a.D = D;
    a.R_s = R_s;
    a.F_s = F_s;
    a.M = M;
    if (M <= 0) throw ZeroInertiaError();
    const SecondOrderCoeffs c = coefficients(a, turbine_t);
    const double radicand = turbine_t * (R_s - F_s) / M;
    if (radicand < 0) throw NegativeRadicandError();
    const double boost =
        1.0 + std::sqrt(radicand) * std::exp(-c.zeta * c.omega_n * c.t_nadir);
    return (D + R_s) / boost;
}

inline double nadir_gain(const AggregateParams& a, double turbine_t) {
    return nadir_gain_at(a.D, a.R_s, a.F_s, a.M, turbine_t);
}

// Central finite differences with relative step 1e-6 on each coordinate of an
// arbitrary gain function g(D, R_s, F_s, M).
inline TaylorPoint gradient_of(const std::function<double(double, double, double, double)>& g,
                               double D, double R_s, double F_s, double M,
                               double turbine_t) {
    TaylorPoint tp;
    tp.D = D;
    tp.R_s = R_s;
    tp.F_s = F_s;
    tp.M = M;
    tp.turbine_t = turbine_t;
    tp.h0 = g(D, R_s, F_s, M);

    const double kRelStep = 1e-6;
    const char* names[4] = {"D", "R_s", "F_s", "M"};
    double x[4] = {D, R_s, F_s, M};
    double* out[4] = {&tp.dh_dD, &tp.dh_dRs, &tp.dh_dFs, &tp.dh_dM};
    for (int j = 0; j < 4; ++j) {
        const double step = kRelStep * std::abs(x[j]);
        if (step < 1e-18) throw StepUnderflowError(names[j]);
        double xp[4] = {x[0], x[1], x[2], x[3]};
        double xm[4] = {x[0], x[1], x[2], x[3]};
        xp[j] += step;
        xm[j] -= step;
        *out[j] = (g(xp[0], xp[1], xp[2], xp[3]) - g(xm[0], xm[1], xm[2], xm[3])) /
                  (2.0 * step);
    }
    return tp;
}

inline TaylorPoint gradient(const AggregateParams& a, double turbine_t) {
    return gradient_of(
        [turbine_t](double D, double R_s, double F_s, double M) {
            return nadir_gain_at(D, R_s, F_s, M, turbine_t);
        },
        a.D, a.R_s, a.F_s, a.M, turbine_t);
}

inline double taylor_h(const TaylorPoint& tp, double D, double R_s, double F_s, double M) {
    return tp.h0 + tp.dh_dD * (D - tp.D) + tp.dh_dRs * (R_s - tp.R_s) +
           tp.dh_dFs * (F_s - tp.F_s) + tp.dh_dM * (M - tp.M);
}

struct ErrorSampler {
    double D = 0, R_s = 0, F_s = 0, M = 0;  // sample center
    double turbine_t = 8.0;
    double delta_p = 0.2;     // disturbance, pu on the fleet base
    double rel_width = 0.2;   // uniform +/- width around the center
};

// Compares exact vs first-order nadir deviation over uniformly perturbed
// aggregates. Draws that leave the underdamped validity region are skipped
// (they are outside the model's domain); `n` accepted samples are collected.
inline ApproxErrorStats error_stats(std::size_t n, const ErrorSampler& cfg,
                                    std::uint64_t seed) {
    const TaylorPoint tp = gradient_of(
        [&](double D, double R_s, double F_s, double M) {
            return nadir_gain_at(D, R_s, F_s, M, cfg.turbine_t);
        },
        cfg.D, cfg.R_s, cfg.F_s, cfg.M, cfg.turbine_t);

    // splitmix64-style generator: portable and stable across platforms.
    std::uint64_t state = seed;
    auto uniform = [&state](double lo, double hi) {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    };

    ApproxErrorStats st;
    double sum_abs = 0, sum_rel = 0;
    std::size_t guard = 0;
    while (st.samples < n) {
        if (++guard > 100 * n + 1000)
            throw ModelError("error_stats: sampler rejects nearly all draws");
        const double D = cfg.D * uniform(1 - cfg.rel_width, 1 + cfg.rel_width);
        const double Rs = cfg.R_s * uniform(1 - cfg.rel_width, 1 + cfg.rel_width);
        const double Fs = cfg.F_s * uniform(1 - cfg.rel_width, 1 + cfg.rel_width);
        const double M = cfg.M * uniform(1 - cfg.rel_width, 1 + cfg.rel_width);
        double h_exact;
        try {
            h_exact = nadir_gain_at(D, Rs, Fs, M, cfg.turbine_t);
        } catch (const ModelError&) {
            continue;
        }
        const double h_approx = taylor_h(tp, D, Rs, Fs, M);
        if (h_approx <= 0) continue;
        const double exact = -cfg.delta_p / h_exact;
        const double approx = -cfg.delta_p / h_approx;
        const double eabs = std::abs(exact - approx);
        const double erel = eabs / std::abs(exact);
        sum_abs += eabs;
        sum_rel += erel;
        st.max_abs = std::max(st.max_abs, eabs);
        st.max_rel = std::max(st.max_rel, erel);
        ++st.samples;
    }
    st.mean_abs = sum_abs / static_cast<double>(n);
    st.mean_rel = sum_rel / static_cast<double>(n);
    return st;
}

}  // namespace iplan
