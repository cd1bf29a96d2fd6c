#pragma once

// Decomposition engines. A1/A2 iterate a master MILP against per-(day, hour)
// security sub-problems whose duals yield feasibility cuts; A0 is the
// conservative baseline that re-solves with hard |p_grid| caps computed from
// the current fleet; the exhaustive oracle enumerates candidate subsets with
// exact caps.

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "iplan/errors.hpp"
#include "iplan/freq.hpp"
#include "iplan/instance.hpp"
#include "iplan/linearize.hpp"
#include "iplan/lp.hpp"
#include "iplan/mip.hpp"
#include "iplan/planmodel.hpp"

namespace iplan {

// Nadir gain valid for any damping regime. Underdamped uses the oscillatory
// closed form; overdamped uses the real-pole analogue (hyperbolic functions,
// extremum from atanh); with no interior extremum the response is monotonic
// and the worst deviation is the quasi-steady-state one.
inline double exact_nadir_gain(double D, double R_s, double F_s, double M, double T) {
    const double stiff = D + R_s;
    if (stiff <= 0) throw NonPositiveStiffnessError();
    if (M <= 0) return stiff;  // first-order response, no overshoot
    const double zeta = (M + T * (D + F_s)) / (2.0 * std::sqrt(M * T * stiff));
    if (zeta < 1.0) return nadir_gain_at(D, R_s, F_s, M, T);

    const double wn = std::sqrt(stiff / (M * T));
    const double a = zeta * wn;
    const double wh = std::max(wn * std::sqrt(std::max(zeta * zeta - 1.0, 0.0)), wn * 1e-9);
    const double den = a - 1.0 / T;
    if (den <= 0 || wh >= den) return stiff;  // monotonic approach to QSS
    const double ts = std::atanh(wh / den) / wh;
    const double beta = (a - T * wn * wn) / wh;
    const double env = std::exp(-a * ts) * (std::cosh(wh * ts) + beta * std::sinh(wh * ts));
    const double factor = std::abs(1.0 - env);
    return stiff / std::max(factor, 1.0);
}

// Hard |p_grid| caps [kW] implied by the exact metrics at a frozen fleet.
struct FrozenBounds {
    double p_nadir_kw = 0, p_rocof_kw = 0, p_qss_kw = 0;
    double binding() const {
        return std::min(p_nadir_kw, std::min(p_rocof_kw, p_qss_kw));
    }
};

inline FrozenBounds frozen_bounds(const AggregateParams& a, double turbine_t,
                                  const SecurityLimits& lim) {
    FrozenBounds fb;
    const double stiff = a.D + a.R_s;
    if (stiff <= 0) throw NonPositiveStiffnessError();
    fb.p_rocof_kw = a.breve_M * lim.rocof_bound_hz_s / lim.f_base_hz;
    fb.p_qss_kw = stiff * a.p_base_kw * lim.qss_bound_hz / lim.f_base_hz;
    fb.p_nadir_kw = exact_nadir_gain(a.D, a.R_s, a.F_s, a.M, turbine_t) * a.p_base_kw *
                    lim.nadir_bound_hz / lim.f_base_hz;
    return fb;
}

// Exact metrics for islanding at import level pgrid_kw against fleet a.
// Sign convention: the disturbance is delta_p = -p_grid / P_base (pu).
inline FrequencyMetrics exact_metrics(const AggregateParams& a, double turbine_t,
                                      double pgrid_kw, double f_base_hz) {
    FrequencyMetrics m;
    if (pgrid_kw == 0) return m;
    const double dp = -pgrid_kw / a.p_base_kw;
    m.rocof_hz_s = a.M > 0 ? -f_base_hz * dp / a.M : 0.0;
    m.qss_hz = -f_base_hz * dp / (a.D + a.R_s);
    m.nadir_hz = -f_base_hz * dp / exact_nadir_gain(a.D, a.R_s, a.F_s, a.M, turbine_t);
    return m;
}

// Frozen point of one sub-problem: master p_grid plus the fleet aggregates.
struct SubFrozen {
    int day = 0, hour = 0;
    double pgrid = 0;
    double bM = 0, bD = 0, bRs = 0, bFs = 0;  // breve aggregates, pu * kW
    double p_base = 0, ps_base = 0;
    std::vector<double> z;
};

struct SubBuild {
    opt::Model model;
    int row_pg = -1, row_M = -1, row_D = -1, row_Rs = -1, row_Fs = -1;
    std::vector<int> row_z;
};

struct SubResult {
    opt::SolveStatus status = opt::SolveStatus::Infeasible;
    double slack = 0;  // minimal |shift of p_grid| to restore linearized security
    double lambda = 0;
    double alpha = 0, pi = 0, mu = 0, sigma = 0;
    std::vector<double> z_duals;
};

namespace detail {

struct SecurityRowSpec {
    // A linearized cap row: sign * s - sum_j coeff_j x_j <= rhs, where s is
    // the adjusted exchange pg + dp+ - dp-.
    double rhs = 0;
    std::vector<std::pair<int, double>> terms;
};

inline void add_cap_rows(opt::Model& m, const std::string& name, int pg, int dpp, int dpm,
                         const std::vector<std::pair<int, double>>& cap_terms, double cap_const) {
    // s <= cap  and  -s <= cap.
    for (int sign : {+1, -1}) {
        std::vector<std::pair<int, double>> row = {
            {pg, static_cast<double>(sign)}, {dpp, static_cast<double>(sign)}, {dpm, -static_cast<double>(sign)}};
        for (const auto& [v, c] : cap_terms) row.push_back({v, -c});
        m.add_row(name + (sign > 0 ? "_hi" : "_lo"), row, opt::Sense::LE, cap_const);
    }
}

}  // namespace detail

// A1 sub-problem: complicating variables are p_grid and the breve aggregates.
inline SubBuild build_sub_a1(const SubFrozen& fr, const TaylorPoint& tp,
                             const SecurityLimits& lim) {
    SubBuild sb;
    opt::Model& m = sb.model;
    const int pg = m.add_var("pg", -opt::kInf, opt::kInf);
    const int dpp = m.add_var("dp+", 0, opt::kInf, opt::VarKind::Continuous, 1.0);
    const int dpm = m.add_var("dp-", 0, opt::kInf, opt::VarKind::Continuous, 1.0);
    const int vM = m.add_var("M", -opt::kInf, opt::kInf);
    const int vD = m.add_var("D", -opt::kInf, opt::kInf);
    const int vRs = m.add_var("Rs", -opt::kInf, opt::kInf);
    const int vFs = m.add_var("Fs", -opt::kInf, opt::kInf);

    const double nb = lim.nadir_bound_hz / lim.f_base_hz;
    const double rb = lim.rocof_bound_hz_s / lim.f_base_hz;
    const double qb = lim.qss_bound_hz / lim.f_base_hz;
    const double P = fr.p_base;
    const double Ps = std::max(fr.ps_base, 1e-9);

    // Nadir: |s| <= nb * P * h_tilde(D, Rs, Fs, M) with breve displacements
    // normalized by the frozen bases.
    const double h_const = tp.h0 - (tp.dh_dD * fr.bD + tp.dh_dM * fr.bM) / P -
                           (tp.dh_dRs * fr.bRs + tp.dh_dFs * fr.bFs) / Ps;
    detail::add_cap_rows(m, "nadir", pg, dpp, dpm,
                         {{vD, nb * tp.dh_dD}, {vRs, nb * P / Ps * tp.dh_dRs},
                          {vFs, nb * P / Ps * tp.dh_dFs}, {vM, nb * tp.dh_dM}},
                         nb * P * h_const);
    // RoCoF: |s| <= rb * breve_M.
    detail::add_cap_rows(m, "rocof", pg, dpp, dpm, {{vM, rb}}, 0.0);
    // QSS: |s| <= qb * (breve_D + breve_Rs * P / Ps).
    detail::add_cap_rows(m, "qss", pg, dpp, dpm, {{vD, qb}, {vRs, qb * P / Ps}}, 0.0);

    sb.row_pg = m.add_row("fix_pg", {{pg, 1.0}}, opt::Sense::EQ, fr.pgrid);
    sb.row_M = m.add_row("fix_M", {{vM, 1.0}}, opt::Sense::EQ, fr.bM);
    sb.row_D = m.add_row("fix_D", {{vD, 1.0}}, opt::Sense::EQ, fr.bD);
    sb.row_Rs = m.add_row("fix_Rs", {{vRs, 1.0}}, opt::Sense::EQ, fr.bRs);
    sb.row_Fs = m.add_row("fix_Fs", {{vFs, 1.0}}, opt::Sense::EQ, fr.bFs);
    return sb;
}

// A2 sub-problem: complicating variables are p_grid and the commitments; the
// aggregates are internal linear functions of z with frozen bases.
inline SubBuild build_sub_a2(const SubFrozen& fr, const PlanningInstance& inst,
                             const TaylorPoint& tp, const SecurityLimits& lim) {
    SubBuild sb;
    opt::Model& m = sb.model;
    const int pg = m.add_var("pg", -opt::kInf, opt::kInf);
    const int dpp = m.add_var("dp+", 0, opt::kInf, opt::VarKind::Continuous, 1.0);
    const int dpm = m.add_var("dp-", 0, opt::kInf, opt::VarKind::Continuous, 1.0);

    const double nb = lim.nadir_bound_hz / lim.f_base_hz;
    const double rb = lim.rocof_bound_hz_s / lim.f_base_hz;
    const double qb = lim.qss_bound_hz / lim.f_base_hz;
    const double P = fr.p_base;
    const double Ps = std::max(fr.ps_base, 1e-9);

    const std::size_t U = inst.units.size();
    std::vector<int> zv(U);
    std::vector<double> cM(U, 0), cD(U, 0), cRs(U, 0), cFs(U, 0);  // normalized per z
    for (std::size_t u = 0; u < U; ++u) {
        const Unit& un = inst.units[u];
        zv[u] = m.add_var("z_" + un.id, -opt::kInf, opt::kInf);
        switch (un.kind) {
            case UnitKind::Sg:
                cM[u] = un.inertia_s * un.capacity_kw / P;
                cD[u] = un.damping * un.capacity_kw / P;
                cRs[u] = un.gain / un.droop * un.capacity_kw / Ps;
                cFs[u] = un.gain * un.turbine_fraction / un.droop * un.capacity_kw / Ps;
                break;
            case UnitKind::Vsm:
                cM[u] = un.inertia_s * un.capacity_kw / P;
                cD[u] = un.damping * un.capacity_kw / P;
                break;
            case UnitKind::Droop:
                cD[u] = un.gain / un.droop * un.capacity_kw / P;
                break;
            case UnitKind::Fixed:
                break;
        }
    }

    auto combo = [&](const std::vector<double>& wD, const std::vector<double>& wRs,
                     const std::vector<double>& wFs, const std::vector<double>& wM,
                     double gD, double gRs, double gFs, double gM) {
        std::vector<std::pair<int, double>> terms;
        for (std::size_t u = 0; u < U; ++u) {
            const double c = gD * wD[u] + gRs * wRs[u] + gFs * wFs[u] + gM * wM[u];
            if (c != 0) terms.push_back({zv[u], c});
        }
        return terms;
    };

    const double h_const = tp.h0 - tp.dh_dD * tp.D - tp.dh_dRs * tp.R_s -
                           tp.dh_dFs * tp.F_s - tp.dh_dM * tp.M;
    detail::add_cap_rows(m, "nadir", pg, dpp, dpm,
                         combo(cD, cRs, cFs, cM, nb * P * tp.dh_dD, nb * P * tp.dh_dRs,
                               nb * P * tp.dh_dFs, nb * P * tp.dh_dM),
                         nb * P * h_const);
    detail::add_cap_rows(m, "rocof", pg, dpp, dpm, combo(cD, cRs, cFs, cM, 0, 0, 0, rb * P),
                         0.0);
    detail::add_cap_rows(m, "qss", pg, dpp, dpm,
                         combo(cD, cRs, cFs, cM, qb * P, qb * P, 0, 0), 0.0);

    sb.row_pg = m.add_row("fix_pg", {{pg, 1.0}}, opt::Sense::EQ, fr.pgrid);
    sb.row_z.resize(U);
    for (std::size_t u = 0; u < U; ++u)
        sb.row_z[u] = m.add_row("fix_z_" + inst.units[u].id, {{zv[u], 1.0}}, opt::Sense::EQ,
                                fr.z[u]);
    return sb;
}

inline SubResult solve_sub(const SubBuild& sb) {
    const opt::Solution sol = opt::solve_lp(sb.model);
    SubResult r;
    r.status = sol.status;
    if (sol.status != opt::SolveStatus::Optimal) return r;
    r.slack = sol.objective;
    r.lambda = sol.duals[static_cast<std::size_t>(sb.row_pg)];
    if (sb.row_M >= 0) {
        r.alpha = sol.duals[static_cast<std::size_t>(sb.row_M)];
        r.pi = sol.duals[static_cast<std::size_t>(sb.row_D)];
        r.mu = sol.duals[static_cast<std::size_t>(sb.row_Rs)];
        r.sigma = sol.duals[static_cast<std::size_t>(sb.row_Fs)];
    }
    r.z_duals.resize(sb.row_z.size());
    for (std::size_t u = 0; u < sb.row_z.size(); ++u)
        r.z_duals[u] = sol.duals[static_cast<std::size_t>(sb.row_z[u])];
    return r;
}

inline FeasibilityCut make_cut(FeasibilityCut::Kind kind, const SubFrozen& fr,
                               const SubResult& sr) {
    FeasibilityCut cut;
    cut.kind = kind;
    cut.day = fr.day;
    cut.hour = fr.hour;
    cut.slack = sr.slack;
    cut.lambda = sr.lambda;
    cut.pgrid_at = fr.pgrid;
    cut.breve_at[0] = fr.bM;
    cut.breve_at[1] = fr.bD;
    cut.breve_at[2] = fr.bRs;
    cut.breve_at[3] = fr.bFs;
    cut.z_at = fr.z;
    if (kind == FeasibilityCut::Kind::A1) {
        cut.alpha = sr.alpha;
        cut.pi = sr.pi;
        cut.mu = sr.mu;
        cut.sigma = sr.sigma;
    } else {
        cut.z_coeffs = sr.z_duals;
    }
    return cut;
}

enum class Algorithm { A0, A1, A2, Exhaustive };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::A0: return "a0";
        case Algorithm::A1: return "a1";
        case Algorithm::A2: return "a2";
        default: return "exhaustive";
    }
}

struct RunConfig {
    int max_iter = 30;
    double tol_kw = 1e-4;  // sub-problem slack tolerance
};

struct IterationRecord {
    int iter = 0;
    double master_objective = 0;
    int violations = 0;
    double max_slack_kw = 0;
    int cuts_added = 0;
    double wall_ms = 0;
};

struct HourAudit {
    double pgrid_kw = 0;
    FrequencyMetrics metrics;
    bool pass = true;
};

struct PlanResult {
    std::string algorithm;
    bool converged = false;
    std::string message;
    std::vector<double> z;
    double total_cost = 0;
    CostBreakdown costs;
    std::vector<std::vector<double>> pgrid;  // [day][hour]
    double gamma = 0;
    AggregateParams fleet;
    std::vector<IterationRecord> iterations;
    std::vector<std::vector<HourAudit>> audit;  // [day][hour]
    bool audit_pass = false;
};

namespace detail {

inline void finalize_result(const PlanningInstance& inst, const MasterModel& mm,
                            const opt::Solution& sol, const RunConfig& cfg, PlanResult& res) {
    const int O = static_cast<int>(inst.days.size());
    const int T = inst.hours();
    res.z.assign(inst.units.size(), 0.0);
    for (std::size_t u = 0; u < inst.units.size(); ++u)
        res.z[u] = inst.units[u].existing
                       ? 1.0
                       : std::round(sol.x[static_cast<std::size_t>(mm.z[u])]);
    res.pgrid.assign(static_cast<std::size_t>(O), std::vector<double>(static_cast<std::size_t>(T), 0.0));
    for (int d = 0; d < O; ++d)
        for (int t = 0; t < T; ++t)
            res.pgrid[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)] =
                sol.x[static_cast<std::size_t>(
                    mm.gm[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)].pgrid)];
    res.gamma = sol.x[static_cast<std::size_t>(mm.gamma)];
    res.costs = cost_breakdown(inst, mm, sol);
    res.total_cost = res.costs.total;
    res.fleet = aggregate(fleet_for(inst, res.z));

    const FrozenBounds fb = frozen_bounds(res.fleet, inst.turbine_t, inst.limits);
    res.audit.assign(static_cast<std::size_t>(O), {});
    res.audit_pass = true;
    for (int d = 0; d < O; ++d) {
        for (int t = 0; t < T; ++t) {
            HourAudit ha;
            ha.pgrid_kw = res.pgrid[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)];
            ha.metrics = exact_metrics(res.fleet, inst.turbine_t, ha.pgrid_kw, inst.f_base_hz);
            ha.pass = std::abs(ha.pgrid_kw) <= fb.binding() + 2 * cfg.tol_kw;
            res.audit_pass = res.audit_pass && ha.pass;
            res.audit[static_cast<std::size_t>(d)].push_back(ha);
        }
    }
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace detail

inline PlanResult run(const PlanningInstance& inst, Algorithm alg, const RunConfig& cfg = {}) {
    if (alg != Algorithm::A1 && alg != Algorithm::A2)
        throw InputError("run() drives A1/A2; use run_a0 or run_exhaustive");
    PlanResult res;
    res.algorithm = algorithm_name(alg);
    std::vector<FeasibilityCut> cuts;

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();
        MasterModel mm = (alg == Algorithm::A1) ? build_master_a1(inst, cuts)
                                                : build_master_a2(inst, cuts);
        const opt::Solution sol = opt::solve_mip(mm.model);
        if (sol.status != opt::SolveStatus::Optimal) {
            res.message = "master not optimal at iteration " + std::to_string(iter);
            return res;
        }
        std::vector<double> z(inst.units.size());
        for (std::size_t u = 0; u < inst.units.size(); ++u)
            z[u] = inst.units[u].existing ? 1.0
                                          : std::round(sol.x[static_cast<std::size_t>(mm.z[u])]);
        const AggregateParams agg = aggregate(fleet_for(inst, z));
        const TaylorPoint tp = gradient_of(
            [&](double D, double Rs, double Fs, double M) {
                return exact_nadir_gain(D, Rs, Fs, M, inst.turbine_t);
            },
            agg.D, agg.R_s, agg.F_s, agg.M, inst.turbine_t);

        IterationRecord rec;
        rec.iter = iter;
        rec.master_objective = sol.objective;
        for (int d = 0; d < static_cast<int>(inst.days.size()); ++d) {
            for (int t = 0; t < inst.hours(); ++t) {
                SubFrozen fr;
                fr.day = d;
                fr.hour = t;
                fr.pgrid = sol.x[static_cast<std::size_t>(
                    mm.gm[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)].pgrid)];
                fr.bM = agg.breve_M;
                fr.bD = agg.breve_D;
                fr.bRs = agg.breve_R_s;
                fr.bFs = agg.breve_F_s;
                fr.p_base = agg.p_base_kw;
                fr.ps_base = agg.p_s_base_kw;
                fr.z = z;
                const SubBuild sb = (alg == Algorithm::A1)
                                        ? build_sub_a1(fr, tp, inst.limits)
                                        : build_sub_a2(fr, inst, tp, inst.limits);
                const SubResult sr = solve_sub(sb);
                if (sr.status != opt::SolveStatus::Optimal) {
                    res.message = "sub-problem failed at (" + std::to_string(d) + "," +
                                  std::to_string(t) + ")";
                    return res;
                }
                if (sr.slack > cfg.tol_kw) {
                    cuts.push_back(make_cut(alg == Algorithm::A1 ? FeasibilityCut::Kind::A1
                                                                 : FeasibilityCut::Kind::A2,
                                            fr, sr));
                    ++rec.violations;
                    ++rec.cuts_added;
                    rec.max_slack_kw = std::max(rec.max_slack_kw, sr.slack);
                }
            }
        }
        rec.wall_ms = detail::ms_since(t0);
        res.iterations.push_back(rec);
        if (rec.violations == 0) {
            res.converged = true;
            detail::finalize_result(inst, mm, sol, cfg, res);
            return res;
        }
    }
    res.message = "no convergence within max_iter";
    return res;
}

inline PlanResult run_a0(const PlanningInstance& inst, const RunConfig& cfg = {}) {
    PlanResult res;
    res.algorithm = "a0";
    const int O = static_cast<int>(inst.days.size());
    const int T = inst.hours();
    std::vector<std::vector<double>> caps(static_cast<std::size_t>(O),
                                          std::vector<double>(static_cast<std::size_t>(T), -1.0));

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();
        MasterOptions mo;
        mo.kind = MasterKind::Base;
        mo.pgrid_caps = &caps;
        MasterModel mm = build_master(inst, mo);
        const opt::Solution sol = opt::solve_mip(mm.model);
        if (sol.status != opt::SolveStatus::Optimal) {
            res.message = "master not optimal at iteration " + std::to_string(iter);
            return res;
        }
        std::vector<double> z(inst.units.size());
        for (std::size_t u = 0; u < inst.units.size(); ++u)
            z[u] = inst.units[u].existing ? 1.0
                                          : std::round(sol.x[static_cast<std::size_t>(mm.z[u])]);
        const AggregateParams agg = aggregate(fleet_for(inst, z));
        const double bind = frozen_bounds(agg, inst.turbine_t, inst.limits).binding();

        IterationRecord rec;
        rec.iter = iter;
        rec.master_objective = sol.objective;
        for (int d = 0; d < O; ++d) {
            for (int t = 0; t < T; ++t) {
                const double pg = sol.x[static_cast<std::size_t>(
                    mm.gm[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)].pgrid)];
                if (std::abs(pg) > bind + cfg.tol_kw) {
                    double& cap = caps[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)];
                    cap = (cap < 0) ? bind : std::min(cap, bind);
                    ++rec.violations;
                    rec.max_slack_kw = std::max(rec.max_slack_kw, std::abs(pg) - bind);
                }
            }
        }
        rec.wall_ms = detail::ms_since(t0);
        res.iterations.push_back(rec);
        if (rec.violations == 0) {
            res.converged = true;
            detail::finalize_result(inst, mm, sol, cfg, res);
            return res;
        }
    }
    res.message = "no convergence within max_iter";
    return res;
}

inline PlanResult run_a0(const PlanningInstance& inst, const RunConfig& cfg);
inline PlanResult run_exhaustive(const PlanningInstance& inst, const RunConfig& cfg);

// Single entry point across the four engines.
inline PlanResult plan(const PlanningInstance& inst, Algorithm alg, const RunConfig& cfg = {}) {
    switch (alg) {
        case Algorithm::A0: return run_a0(inst, cfg);
        case Algorithm::Exhaustive: return run_exhaustive(inst, cfg);
        default: return run(inst, alg, cfg);
    }
}

inline PlanResult run_exhaustive(const PlanningInstance& inst, const RunConfig& cfg = {}) {
    PlanResult res;
    res.algorithm = "exhaustive";
    const std::vector<int> cands = inst.candidate_indices();
    if (cands.size() > 12) throw TooManyCandidatesError(cands.size());
    const int O = static_cast<int>(inst.days.size());
    const int T = inst.hours();

    double best = opt::kInf;
    bool found = false;
    for (std::uint32_t mask = 0; mask < (1u << cands.size()); ++mask) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> z(inst.units.size(), 0.0);
        for (std::size_t u = 0; u < inst.units.size(); ++u)
            if (inst.units[u].existing) z[u] = 1.0;
        for (std::size_t c = 0; c < cands.size(); ++c)
            if (mask & (1u << c)) z[static_cast<std::size_t>(cands[c])] = 1.0;

        const AggregateParams agg = aggregate(fleet_for(inst, z));
        const double bind = frozen_bounds(agg, inst.turbine_t, inst.limits).binding();
        std::vector<std::vector<double>> caps(
            static_cast<std::size_t>(O),
            std::vector<double>(static_cast<std::size_t>(T), std::max(bind, 0.0)));

        MasterOptions mo;
        mo.kind = MasterKind::Base;
        mo.pgrid_caps = &caps;
        mo.fix_z = &z;
        MasterModel mm = build_master(inst, mo);
        const opt::Solution sol = opt::solve_mip(mm.model);
        if (sol.status != opt::SolveStatus::Optimal) continue;

        IterationRecord rec;
        rec.iter = static_cast<int>(mask) + 1;
        rec.master_objective = sol.objective;
        rec.wall_ms = detail::ms_since(t0);
        res.iterations.push_back(rec);

        if (sol.objective < best - 1e-9) {
            best = sol.objective;
            found = true;
            detail::finalize_result(inst, mm, sol, cfg, res);
        }
    }
    res.converged = found;
    if (!found) res.message = "no feasible candidate combination";
    return res;
}

}  // namespace iplan
