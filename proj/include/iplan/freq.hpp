#pragma once

// Center-of-inertia frequency response of a mixed SG/CIG fleet, reduced to a
// second-order model with closed-form nadir, RoCoF and quasi-steady-state
// expressions.

#include <cmath>
#include <utility>
#include <vector>

#include "iplan/errors.hpp"

namespace iplan {

struct SyncGenParams {
    double inertia_s = 0;          // M_i [s]
    double damping = 0;            // D_i [pu]
    double gain = 1;               // K_i [pu]
    double droop = 0.05;           // R_i [pu]
    double turbine_fraction = 0;   // F_i [-], fraction of power through the fast path
    double capacity_kw = 0;
};

struct VsmCigParams {
    double inertia_s = 0;   // emulated M_v [s]
    double damping = 0;     // emulated D_v [pu]
    double capacity_kw = 0;
};

struct DroopCigParams {
    double gain = 1;        // K_d [pu]
    double droop = 0.05;    // R_d [pu]; contributes damping K_d / R_d
    double capacity_kw = 0;
};

// Second member of each pair: unit is committed (built / connected).
struct FleetComposition {
    std::vector<std::pair<SyncGenParams, bool>> sync_units;
    std::vector<std::pair<VsmCigParams, bool>> vsm_cigs;
    std::vector<std::pair<DroopCigParams, bool>> droop_cigs;
    std::vector<std::pair<double, bool>> fixed_cigs;  // grid-feeding, capacity only
};

// Aggregated model parameters. SG quantities (M_s, D_s, R_s, F_s) are per-unit
// on the committed SG capacity base; CIG quantities on the committed CIG base;
// M and D on the whole-fleet base. The breve_* fields are the un-normalized
// capacity-weighted sums (pu * kW), convenient for optimization models where
// the base itself depends on the investment decision.
struct AggregateParams {
    double M_s = 0, D_s = 0, R_s = 0, F_s = 0;
    double M_c = 0, D_c = 0, R_c = 0;
    double M = 0, D = 0;
    double p_s_base_kw = 0, p_c_base_kw = 0, p_base_kw = 0;
    double breve_M_s = 0, breve_D_s = 0, breve_R_s = 0, breve_F_s = 0;
    double breve_M_c = 0, breve_D_c = 0, breve_R_c = 0;
    double breve_M = 0, breve_D = 0;
};

struct SecondOrderCoeffs {
    double turbine_t = 0;   // governor time constant T [s]
    double omega_n = 0;     // natural frequency [rad/s]
    double zeta = 0;        // damping ratio
    double omega_d = 0;     // damped frequency [rad/s]
    double phase = 0;       // asin(sqrt(1 - zeta^2))
    double t_nadir = 0;     // time of the frequency extremum [s]
};

struct FrequencyMetrics {
    double nadir_hz = 0;
    double rocof_hz_s = 0;
    double qss_hz = 0;
};

struct SecurityLimits {
    double nadir_bound_hz = 0.6;
    double rocof_bound_hz_s = 2.0;
    double qss_bound_hz = 0.2;
    double f_base_hz = 50.0;
};

struct MetricCheck {
    double value = 0;
    double bound = 0;
    double margin = 0;  // bound - |value|
    bool pass = false;
};

struct LimitCheck {
    MetricCheck nadir, rocof, qss;
    bool all_pass = false;
};

inline AggregateParams aggregate(const FleetComposition& fleet) {
    AggregateParams a;
    for (const auto& [sg, on] : fleet.sync_units) {
        if (!on) continue;
        if (sg.capacity_kw <= 0 || sg.inertia_s <= 0 || sg.droop <= 0)
            throw InputError("sync unit needs positive capacity, inertia and droop");
        a.p_s_base_kw += sg.capacity_kw;
        a.breve_M_s += sg.inertia_s * sg.capacity_kw;
        a.breve_D_s += sg.damping * sg.capacity_kw;
        a.breve_R_s += sg.gain / sg.droop * sg.capacity_kw;
        a.breve_F_s += sg.gain * sg.turbine_fraction / sg.droop * sg.capacity_kw;
    }
    for (const auto& [vsm, on] : fleet.vsm_cigs) {
        if (!on) continue;
        if (vsm.capacity_kw <= 0) throw InputError("VSM unit needs positive capacity");
        a.p_c_base_kw += vsm.capacity_kw;
        a.breve_M_c += vsm.inertia_s * vsm.capacity_kw;
        a.breve_D_c += vsm.damping * vsm.capacity_kw;
    }
    for (const auto& [dr, on] : fleet.droop_cigs) {
        if (!on) continue;
        if (dr.capacity_kw <= 0 || dr.droop <= 0)
            throw InputError("droop unit needs positive capacity and droop");
        a.p_c_base_kw += dr.capacity_kw;
        a.breve_R_c += dr.gain / dr.droop * dr.capacity_kw;
    }
    for (const auto& [cap, on] : fleet.fixed_cigs) {
        if (!on) continue;
        if (cap <= 0) throw InputError("fixed-output unit needs positive capacity");
        a.p_c_base_kw += cap;  // dilutes the base, contributes no response
    }
    a.p_base_kw = a.p_s_base_kw + a.p_c_base_kw;
    if (a.p_base_kw <= 0) throw EmptyFleetError();

    if (a.p_s_base_kw > 0) {
        a.M_s = a.breve_M_s / a.p_s_base_kw;
        a.D_s = a.breve_D_s / a.p_s_base_kw;
        a.R_s = a.breve_R_s / a.p_s_base_kw;
        a.F_s = a.breve_F_s / a.p_s_base_kw;
    }
    if (a.p_c_base_kw > 0) {
        a.M_c = a.breve_M_c / a.p_c_base_kw;
        a.D_c = a.breve_D_c / a.p_c_base_kw;
        a.R_c = a.breve_R_c / a.p_c_base_kw;
    }
    a.breve_M = a.breve_M_s + a.breve_M_c;
    a.breve_D = a.breve_D_s + a.breve_D_c + a.breve_R_c;
    a.M = a.breve_M / a.p_base_kw;
    a.D = a.breve_D / a.p_base_kw;
    return a;
}

inline SecondOrderCoeffs coefficients(const AggregateParams& a, double turbine_t) {
    if (turbine_t <= 0) throw InputError("turbine time constant must be positive");
    if (a.M <= 0) throw ZeroInertiaError();
    const double stiffness = a.D + a.R_s;
    if (stiffness <= 0) throw NonPositiveStiffnessError();

    SecondOrderCoeffs c;
    c.turbine_t = turbine_t;
    c.omega_n = std::sqrt(stiffness / (a.M * turbine_t));
    c.zeta = (a.M + turbine_t * (a.D + a.F_s)) /
             (2.0 * std::sqrt(a.M * turbine_t * stiffness));
    if (c.zeta >= 1.0) throw OverdampedError(c.zeta);
    c.omega_d = c.omega_n * std::sqrt(1.0 - c.zeta * c.zeta);
    c.phase = std::asin(std::sqrt(1.0 - c.zeta * c.zeta));
    // First stationary point of the step response; atan2 picks the first
    // positive root when zeta*omega_n < 1/T.
    c.t_nadir = std::atan2(c.omega_d, c.zeta * c.omega_n - 1.0 / turbine_t) / c.omega_d;
    return c;
}

// Peak frequency deviation after a step power change delta_p (pu on the fleet
// base; positive = power deficit). Returns Hz, negative for a deficit.
inline double nadir(const AggregateParams& a, const SecondOrderCoeffs& c,
                    double delta_p, double f_base_hz = 50.0) {
    const double stiffness = a.D + a.R_s;
    if (stiffness <= 0) throw NonPositiveStiffnessError();
    const double radicand = c.turbine_t * (a.R_s - a.F_s) / a.M;
    if (radicand < 0) throw NegativeRadicandError();
    const double boost =
        1.0 + std::sqrt(radicand) * std::exp(-c.zeta * c.omega_n * c.t_nadir);
    return f_base_hz * (-delta_p / stiffness) * boost;
}

inline double rocof(const AggregateParams& a, double delta_p, double f_base_hz = 50.0) {
    if (a.M <= 0) throw ZeroInertiaError();
    return f_base_hz * (-delta_p / a.M);
}

inline double qss(const AggregateParams& a, double delta_p, double f_base_hz = 50.0) {
    const double stiffness = a.D + a.R_s;
    if (stiffness <= 0) throw NonPositiveStiffnessError();
    return f_base_hz * (-delta_p / stiffness);
}

// Frequency deviation at time t [s] after the step, in Hz. Obtained by
// inverse-transforming (1+sT) / (s (s^2 + 2 zeta w_n s + w_n^2)); satisfies
// trajectory(0) = 0, trajectory(t_nadir) = nadir, trajectory(inf) = qss.
inline double trajectory(const AggregateParams& a, const SecondOrderCoeffs& c,
                         double delta_p, double t, double f_base_hz = 50.0) {
    const double stiffness = a.D + a.R_s;
    if (stiffness <= 0) throw NonPositiveStiffnessError();
    const double alpha = c.zeta * c.omega_n;
    const double beta =
        (alpha - c.turbine_t * c.omega_n * c.omega_n) / c.omega_d;
    const double env = std::exp(-alpha * t) *
                       (std::cos(c.omega_d * t) + beta * std::sin(c.omega_d * t));
    return f_base_hz * (-delta_p / stiffness) * (1.0 - env);
}

inline FrequencyMetrics metrics(const AggregateParams& a, const SecondOrderCoeffs& c,
                                double delta_p, double f_base_hz = 50.0) {
    return {nadir(a, c, delta_p, f_base_hz), rocof(a, delta_p, f_base_hz),
            qss(a, delta_p, f_base_hz)};
}

inline LimitCheck check_limits(const FrequencyMetrics& m, const SecurityLimits& lim) {
    auto one = [](double value, double bound) {
        MetricCheck mc;
        mc.value = value;
        mc.bound = bound;
        mc.margin = bound - std::abs(value);
        mc.pass = mc.margin >= 0;
        return mc;
    };
    LimitCheck r;
    r.nadir = one(m.nadir_hz, lim.nadir_bound_hz);
    r.rocof = one(m.rocof_hz_s, lim.rocof_bound_hz_s);
    r.qss = one(m.qss_hz, lim.qss_bound_hz);
    r.all_pass = r.nadir.pass && r.rocof.pass && r.qss.pass;
    return r;
}

}  // namespace iplan
