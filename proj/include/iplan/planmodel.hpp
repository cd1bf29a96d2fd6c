#pragma once

// Builds the investment-planning MILP: binary unit commitments, grid-mode
// dispatch per representative (day, hour) with import/export, demand shift
// and disconnection recourse, islanded-mode blocks feeding a worst-case
// penalty epigraph, and (for the decomposition variants) the un-normalized
// fleet aggregates and accumulated security cuts.

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "iplan/errors.hpp"
#include "iplan/instance.hpp"
#include "iplan/lp.hpp"

namespace iplan {

enum class MasterKind { Base, A1, A2 };

// Security feasibility cut generated from one (day, hour) sub-problem.
// A1 cuts act on p_grid and the un-normalized aggregates; A2 cuts act on
// p_grid and the commitment binaries directly.
struct FeasibilityCut {
    enum class Kind { A1, A2 };
    Kind kind = Kind::A1;
    int day = 0, hour = 0;
    double slack = 0;   // sub-problem objective at the frozen point (> 0)
    double lambda = 0;  // dual of the p_grid fix
    double alpha = 0, pi = 0, mu = 0, sigma = 0;  // duals on M, D, R_s, F_s fixes
    std::vector<double> z_coeffs;                 // A2: dual per unit
    double pgrid_at = 0;
    double breve_at[4] = {0, 0, 0, 0};  // frozen breve M, D, R_s, F_s
    std::vector<double> z_at;

    // Left-hand side of the cut at an arbitrary point; the cut is lhs <= 0.
    double lhs(double pgrid, const double breve[4], const std::vector<double>& z) const {
        double v = slack + lambda * (pgrid - pgrid_at);
        if (kind == Kind::A1) {
            v += alpha * (breve[0] - breve_at[0]) + pi * (breve[1] - breve_at[1]) +
                 mu * (breve[2] - breve_at[2]) + sigma * (breve[3] - breve_at[3]);
        } else {
            for (std::size_t u = 0; u < z_coeffs.size(); ++u)
                v += z_coeffs[u] * (z[u] - z_at[u]);
        }
        return v;
    }
};

struct BlockVars {
    std::vector<int> gen;                 // per unit; -1 when not present
    std::vector<int> flow;                // per line
    std::map<std::string, int> disc;      // per bus with demand
    std::map<std::string, int> shift_up;  // grid mode: extra consumption
    std::map<std::string, int> shift_dn;  // grid mode: deferred consumption
    int pgrid = -1, imp = -1, exp = -1;   // grid mode only
};

struct MasterModel {
    opt::Model model;
    std::vector<int> z;  // per unit (existing units fixed at 1)
    int gamma = -1;
    int p_base = -1;
    // A1 aggregates (un-normalized, pu * kW).
    int breve_Ms = -1, breve_Ds = -1, breve_Rs = -1, breve_Fs = -1;
    int breve_Mc = -1, breve_Dc = -1, breve_Rc = -1;
    int breve_M = -1, breve_D = -1;
    std::vector<std::vector<BlockVars>> gm, im;  // [day][hour]
};

namespace detail {

inline void check_structure(const PlanningInstance& inst) {
    // Every bus with demand must reach a source (unit or the grid tie).
    std::map<std::string, int> id;
    for (std::size_t b = 0; b < inst.buses.size(); ++b)
        id[inst.buses[b]] = static_cast<int>(b);
    std::vector<int> parent(inst.buses.size());
    for (std::size_t b = 0; b < parent.size(); ++b) parent[b] = static_cast<int>(b);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& l : inst.lines)
        parent[static_cast<std::size_t>(find(id.at(l.from)))] = find(id.at(l.to));
    std::set<int> sourced;
    sourced.insert(find(id.at(inst.grid.bus)));
    for (const auto& u : inst.units) sourced.insert(find(id.at(u.bus)));
    for (const auto& day : inst.days)
        for (const auto& [bus, prof] : day.demand_kw)
            for (double v : prof)
                if (v > 0 && !sourced.count(find(id.at(bus))))
                    throw InputError("bus " + bus + " has demand but no path to any source");
}

inline double unit_avail(const Unit& u, const RepDay& day, int t) {
    return u.is_pv ? day.pv_availability[static_cast<std::size_t>(t)] : 1.0;
}

}  // namespace detail

// Appends one operational block (one day/hour, one mode) to the model.
// Islanded blocks have no grid exchange and use one-sided (load-reducing)
// shift; dispatch is otherwise free within committed capacity, representing
// unrestricted reserve deployment around the grid-mode point.
inline BlockVars build_operational_constraints(opt::Model& model, const PlanningInstance& inst,
                                               int o, int t, bool islanded,
                                               const std::vector<int>& z) {
    const RepDay& day = inst.days[static_cast<std::size_t>(o)];
    const double w = day.weight_days;
    const std::string tag = (islanded ? "im_" : "gm_") + std::to_string(o) + "_" + std::to_string(t) + "_";
    BlockVars bv;

    bv.gen.resize(inst.units.size(), -1);
    for (std::size_t u = 0; u < inst.units.size(); ++u) {
        const Unit& un = inst.units[u];
        const double avail = detail::unit_avail(un, day, t);
        const double cap = un.capacity_kw * avail;
        if (cap <= 0) continue;
        const double cost = islanded ? 0.0 : w * un.marginal_cost;
        const int g = model.add_var(tag + "g_" + un.id, 0, cap, opt::VarKind::Continuous, cost);
        bv.gen[u] = g;
        if (!un.existing)
            model.add_row(tag + "cap_" + un.id, {{g, 1.0}, {z[u], -cap}}, opt::Sense::LE, 0.0);
    }
    bv.flow.resize(inst.lines.size());
    for (std::size_t l = 0; l < inst.lines.size(); ++l)
        bv.flow[l] = model.add_var(tag + "f" + std::to_string(l), -inst.lines[l].capacity_kw,
                                   inst.lines[l].capacity_kw);

    if (!islanded) {
        bv.imp = model.add_var(tag + "imp", 0, inst.grid.rating_kw, opt::VarKind::Continuous,
                               w * inst.grid.import_tariff[static_cast<std::size_t>(t)]);
        bv.exp = model.add_var(tag + "exp", 0, inst.grid.rating_kw, opt::VarKind::Continuous,
                               -w * inst.grid.export_tariff[static_cast<std::size_t>(t)]);
        bv.pgrid = model.add_var(tag + "pgrid", -inst.grid.rating_kw, inst.grid.rating_kw);
        model.add_row(tag + "pgrid_def", {{bv.pgrid, 1.0}, {bv.imp, -1.0}, {bv.exp, 1.0}},
                      opt::Sense::EQ, 0.0);
    }

    for (const auto& bus : inst.buses) {
        const auto it = day.demand_kw.find(bus);
        const double demand = (it != day.demand_kw.end())
                                  ? it->second[static_cast<std::size_t>(t)]
                                  : 0.0;
        std::vector<std::pair<int, double>> bal;
        for (std::size_t u = 0; u < inst.units.size(); ++u)
            if (bv.gen[u] >= 0 && inst.units[u].bus == bus) bal.push_back({bv.gen[u], 1.0});
        for (std::size_t l = 0; l < inst.lines.size(); ++l) {
            if (inst.lines[l].to == bus) bal.push_back({bv.flow[l], 1.0});
            if (inst.lines[l].from == bus) bal.push_back({bv.flow[l], -1.0});
        }
        if (!islanded && bus == inst.grid.bus) bal.push_back({bv.pgrid, 1.0});

        if (demand > 0) {
            const double smax = inst.shift_fraction * demand;
            const int disc = model.add_var(tag + "disc_" + bus, 0, demand, opt::VarKind::Continuous,
                                           islanded ? 0.0 : w * inst.penalties.disconnection_per_kwh);
            bv.disc[bus] = disc;
            bal.push_back({disc, 1.0});
            if (islanded) {
                const int sd = model.add_var(tag + "sh_" + bus, 0, smax);
                bv.shift_dn[bus] = sd;
                bal.push_back({sd, 1.0});
                model.add_row(tag + "recourse_" + bus, {{disc, 1.0}, {sd, 1.0}},
                              opt::Sense::LE, demand);
            } else {
                const int su = model.add_var(tag + "shu_" + bus, 0, smax, opt::VarKind::Continuous,
                                             w * inst.penalties.demand_shift_per_kwh);
                const int sd = model.add_var(tag + "shd_" + bus, 0, smax, opt::VarKind::Continuous,
                                             w * inst.penalties.demand_shift_per_kwh);
                bv.shift_up[bus] = su;
                bv.shift_dn[bus] = sd;
                bal.push_back({su, -1.0});
                bal.push_back({sd, 1.0});
            }
        }
        if (!bal.empty() || demand > 0)
            model.add_row(tag + "bal_" + bus, bal, opt::Sense::EQ, demand);
    }
    return bv;
}

struct MasterOptions {
    MasterKind kind = MasterKind::Base;
    const std::vector<FeasibilityCut>* cuts = nullptr;
    // Hard symmetric |p_grid| caps per [day][hour]; <= 0 entries mean none.
    const std::vector<std::vector<double>>* pgrid_caps = nullptr;
    const std::vector<double>* fix_z = nullptr;  // per unit, candidates only
};

inline MasterModel build_master(const PlanningInstance& inst, const MasterOptions& o) {
    detail::check_structure(inst);
    MasterModel mm;
    opt::Model& m = mm.model;

    mm.z.resize(inst.units.size());
    for (std::size_t u = 0; u < inst.units.size(); ++u) {
        const Unit& un = inst.units[u];
        double lo = un.existing ? 1.0 : 0.0;
        double hi = 1.0;
        if (!un.existing && o.fix_z) {
            lo = hi = std::round((*o.fix_z)[u]);
        }
        mm.z[u] = m.add_var("z_" + un.id, lo, hi, opt::VarKind::Binary,
                            un.existing ? 0.0 : un.invest_cost);
    }
    mm.gamma = m.add_var("gamma", 0, opt::kInf, opt::VarKind::Continuous, 1.0);

    const int O = static_cast<int>(inst.days.size());
    const int T = inst.hours();
    mm.gm.resize(static_cast<std::size_t>(O));
    mm.im.resize(static_cast<std::size_t>(O));
    for (int d = 0; d < O; ++d) {
        for (int t = 0; t < T; ++t) {
            mm.gm[static_cast<std::size_t>(d)].push_back(
                build_operational_constraints(m, inst, d, t, false, mm.z));
            mm.im[static_cast<std::size_t>(d)].push_back(
                build_operational_constraints(m, inst, d, t, true, mm.z));
        }
        // Grid-mode shift is energy neutral per bus over each day.
        for (const auto& bus : inst.buses) {
            std::vector<std::pair<int, double>> net;
            for (int t = 0; t < T; ++t) {
                const auto& bvt = mm.gm[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)];
                const auto iu = bvt.shift_up.find(bus);
                const auto id = bvt.shift_dn.find(bus);
                if (iu != bvt.shift_up.end()) net.push_back({iu->second, 1.0});
                if (id != bvt.shift_dn.end()) net.push_back({id->second, -1.0});
            }
            if (!net.empty())
                m.add_row("shift_neutral_" + std::to_string(d) + "_" + bus, net,
                          opt::Sense::EQ, 0.0);
        }
        // Worst-case islanded penalty epigraph.
        for (int t = 0; t < T; ++t) {
            const auto& bvt = mm.im[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)];
            std::vector<std::pair<int, double>> row = {{mm.gamma, 1.0}};
            for (const auto& [bus, v] : bvt.shift_dn)
                row.push_back({v, -inst.penalties.demand_shift_per_kwh});
            for (const auto& [bus, v] : bvt.disc)
                row.push_back({v, -inst.penalties.disconnection_per_kwh});
            m.add_row("gamma_" + std::to_string(d) + "_" + std::to_string(t), row,
                      opt::Sense::GE, 0.0);
        }
    }

    if (o.pgrid_caps) {
        for (int d = 0; d < O; ++d)
            for (int t = 0; t < T; ++t) {
                const double cap = (*o.pgrid_caps)[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)];
                if (cap < 0) continue;  // negative = no cap
                auto& v = m.vars[static_cast<std::size_t>(
                    mm.gm[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)].pgrid)];
                v.lo = std::max(v.lo, -cap);
                v.hi = std::min(v.hi, cap);
            }
    }

    if (o.kind == MasterKind::A1 || o.kind == MasterKind::A2) {
        std::vector<std::pair<int, double>> pb = {};
        mm.p_base = m.add_var("p_base", 0, opt::kInf);
        pb.push_back({mm.p_base, 1.0});
        for (std::size_t u = 0; u < inst.units.size(); ++u)
            pb.push_back({mm.z[u], -inst.units[u].capacity_kw});
        m.add_row("p_base_def", pb, opt::Sense::EQ, 0.0);
    }

    if (o.kind == MasterKind::A1) {
        auto def = [&](const char* name, UnitKind kind_a, UnitKind kind_b,
                       auto contribution) {
            const int v = m.add_var(name, 0, opt::kInf);
            std::vector<std::pair<int, double>> row = {{v, 1.0}};
            for (std::size_t u = 0; u < inst.units.size(); ++u)
                if (inst.units[u].kind == kind_a || inst.units[u].kind == kind_b) {
                    const double c = contribution(inst.units[u]);
                    if (c != 0) row.push_back({mm.z[u], -c});
                }
            m.add_row(std::string(name) + "_def", row, opt::Sense::EQ, 0.0);
            return v;
        };
        mm.breve_Ms = def("bMs", UnitKind::Sg, UnitKind::Sg,
                          [](const Unit& u) { return u.inertia_s * u.capacity_kw; });
        mm.breve_Ds = def("bDs", UnitKind::Sg, UnitKind::Sg,
                          [](const Unit& u) { return u.damping * u.capacity_kw; });
        mm.breve_Rs = def("bRs", UnitKind::Sg, UnitKind::Sg,
                          [](const Unit& u) { return u.gain / u.droop * u.capacity_kw; });
        mm.breve_Fs = def("bFs", UnitKind::Sg, UnitKind::Sg, [](const Unit& u) {
            return u.gain * u.turbine_fraction / u.droop * u.capacity_kw;
        });
        mm.breve_Mc = def("bMc", UnitKind::Vsm, UnitKind::Vsm,
                          [](const Unit& u) { return u.inertia_s * u.capacity_kw; });
        mm.breve_Dc = def("bDc", UnitKind::Vsm, UnitKind::Vsm,
                          [](const Unit& u) { return u.damping * u.capacity_kw; });
        mm.breve_Rc = def("bRc", UnitKind::Droop, UnitKind::Droop,
                          [](const Unit& u) { return u.gain / u.droop * u.capacity_kw; });
        mm.breve_M = m.add_var("bM", 0, opt::kInf);
        m.add_row("bM_def", {{mm.breve_M, 1.0}, {mm.breve_Ms, -1.0}, {mm.breve_Mc, -1.0}},
                  opt::Sense::EQ, 0.0);
        mm.breve_D = m.add_var("bD", 0, opt::kInf);
        m.add_row("bD_def",
                  {{mm.breve_D, 1.0}, {mm.breve_Ds, -1.0}, {mm.breve_Dc, -1.0}, {mm.breve_Rc, -1.0}},
                  opt::Sense::EQ, 0.0);
    }

    if (o.cuts) {
        int c = 0;
        for (const FeasibilityCut& cut : *o.cuts) {
            const int pg = mm.gm[static_cast<std::size_t>(cut.day)][static_cast<std::size_t>(cut.hour)].pgrid;
            std::vector<std::pair<int, double>> row = {{pg, cut.lambda}};
            double rhs = cut.lambda * cut.pgrid_at - cut.slack;
            if (cut.kind == FeasibilityCut::Kind::A1) {
                if (o.kind != MasterKind::A1) throw InputError("A1 cut in a non-A1 master");
                row.push_back({mm.breve_M, cut.alpha});
                row.push_back({mm.breve_D, cut.pi});
                row.push_back({mm.breve_Rs, cut.mu});
                row.push_back({mm.breve_Fs, cut.sigma});
                rhs += cut.alpha * cut.breve_at[0] + cut.pi * cut.breve_at[1] +
                       cut.mu * cut.breve_at[2] + cut.sigma * cut.breve_at[3];
            } else {
                if (o.kind != MasterKind::A2) throw InputError("A2 cut in a non-A2 master");
                for (std::size_t u = 0; u < inst.units.size(); ++u)
                    if (cut.z_coeffs[u] != 0) {
                        row.push_back({mm.z[u], cut.z_coeffs[u]});
                        rhs += cut.z_coeffs[u] * cut.z_at[u];
                    }
            }
            m.add_row("cut_" + std::to_string(c++), row, opt::Sense::LE, rhs);
        }
    }
    return mm;
}

inline MasterModel build_master_a1(const PlanningInstance& inst,
                                   const std::vector<FeasibilityCut>& cuts) {
    MasterOptions o;
    o.kind = MasterKind::A1;
    o.cuts = &cuts;
    return build_master(inst, o);
}

inline MasterModel build_master_a2(const PlanningInstance& inst,
                                   const std::vector<FeasibilityCut>& cuts) {
    MasterOptions o;
    o.kind = MasterKind::A2;
    o.cuts = &cuts;
    return build_master(inst, o);
}

struct CostBreakdown {
    double total = 0;
    double investment = 0;
    double operational = 0;       // energy + net grid exchange
    double shift_penalty = 0;     // grid-mode shift, weighted
    double disconnection_penalty = 0;  // grid-mode disconnection, weighted
    double islanding_penalty = 0;      // worst-case islanded hour (gamma)
};

inline CostBreakdown cost_breakdown(const PlanningInstance& inst, const MasterModel& mm,
                                    const opt::Solution& sol) {
    CostBreakdown cb;
    auto val = [&](int v) { return v >= 0 ? sol.x[static_cast<std::size_t>(v)] : 0.0; };
    for (std::size_t u = 0; u < inst.units.size(); ++u)
        if (!inst.units[u].existing)
            cb.investment += inst.units[u].invest_cost * val(mm.z[u]);
    for (std::size_t d = 0; d < inst.days.size(); ++d) {
        const double w = inst.days[d].weight_days;
        for (int t = 0; t < inst.hours(); ++t) {
            const auto& bv = mm.gm[d][static_cast<std::size_t>(t)];
            for (std::size_t u = 0; u < inst.units.size(); ++u)
                if (bv.gen[u] >= 0)
                    cb.operational += w * inst.units[u].marginal_cost * val(bv.gen[u]);
            cb.operational += w * inst.grid.import_tariff[static_cast<std::size_t>(t)] * val(bv.imp);
            cb.operational -= w * inst.grid.export_tariff[static_cast<std::size_t>(t)] * val(bv.exp);
            for (const auto& [bus, v] : bv.shift_up)
                cb.shift_penalty += w * inst.penalties.demand_shift_per_kwh * val(v);
            for (const auto& [bus, v] : bv.shift_dn)
                cb.shift_penalty += w * inst.penalties.demand_shift_per_kwh * val(v);
            for (const auto& [bus, v] : bv.disc)
                cb.disconnection_penalty += w * inst.penalties.disconnection_per_kwh * val(v);
        }
    }
    cb.islanding_penalty = val(mm.gamma);
    cb.total = cb.investment + cb.operational + cb.shift_penalty +
               cb.disconnection_penalty + cb.islanding_penalty;
    return cb;
}

}  // namespace iplan
