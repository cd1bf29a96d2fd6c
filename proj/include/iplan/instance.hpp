#pragma once

// Planning instance: network, unit fleet (existing + candidates),
// representative days and security limits. Loaded from JSON; all powers in
// kW, prices in $/kWh, investment costs in $ per planning period.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "iplan/errors.hpp"
#include "iplan/freq.hpp"
#include "iplan/kmeans.hpp"

namespace iplan {

enum class UnitKind { Sg, Vsm, Droop, Fixed };

struct Unit {
    std::string id;
    std::string bus;
    UnitKind kind = UnitKind::Fixed;
    double capacity_kw = 0;
    bool existing = false;
    double invest_cost = 0;
    double marginal_cost = 0;
    // SG / VSM / droop response parameters (unused fields stay zero).
    double inertia_s = 0;
    double damping = 0;
    double gain = 1;
    double droop = 0.05;
    double turbine_fraction = 0;
    bool is_pv = false;  // output limited by the availability profile
};

struct Line {
    std::string from, to;
    double capacity_kw = 0;
};

struct RepDay {
    double weight_days = 0;
    std::map<std::string, std::vector<double>> demand_kw;  // bus -> hourly
    std::vector<double> pv_availability;                   // 0..1 per hour
};

struct GridInterface {
    std::string bus;
    double rating_kw = 0;
    std::vector<double> import_tariff;  // $/kWh per hour
    std::vector<double> export_tariff;  // credit per hour
};

struct Penalties {
    double demand_shift_per_kwh = 0.2;
    double disconnection_per_kwh = 1.0;
};

struct PlanningInstance {
    std::string name;
    std::vector<std::string> buses;
    std::vector<Line> lines;
    GridInterface grid;
    std::vector<Unit> units;
    std::vector<RepDay> days;
    SecurityLimits limits;
    Penalties penalties;
    double turbine_t = 8.0;
    double f_base_hz = 50.0;
    double shift_fraction = 0.3;  // hourly shift bound as a share of demand

    int hours() const {
        return days.empty() ? 0 : static_cast<int>(days.front().pv_availability.size());
    }
    std::vector<int> candidate_indices() const {
        std::vector<int> idx;
        for (std::size_t u = 0; u < units.size(); ++u)
            if (!units[u].existing) idx.push_back(static_cast<int>(u));
        return idx;
    }
};

namespace detail {

inline std::vector<double> profile_field(const nlohmann::json& j, const std::string& path,
                                         int hours) {
    std::vector<double> out;
    if (j.is_number()) {
        out.assign(static_cast<std::size_t>(hours), j.get<double>());
    } else if (j.is_array()) {
        out = j.get<std::vector<double>>();
        if (static_cast<int>(out.size()) != hours)
            throw InputError(path + ": expected " + std::to_string(hours) + " hourly values");
    } else {
        throw InputError(path + ": expected number or array");
    }
    return out;
}

}  // namespace detail

inline PlanningInstance parse_instance(const nlohmann::json& j) {
    PlanningInstance inst;
    try {
        inst.name = j.value("name", "instance");
        inst.f_base_hz = j.value("f_base_hz", 50.0);
        inst.turbine_t = j.value("turbine_t_s", 8.0);
        inst.shift_fraction = j.value("shift_fraction", 0.3);
        if (inst.f_base_hz <= 0) throw InputError("/f_base_hz: must be positive");
        if (inst.turbine_t <= 0) throw InputError("/turbine_t_s: must be positive");
        if (inst.shift_fraction < 0 || inst.shift_fraction > 1)
            throw InputError("/shift_fraction: must be in [0, 1]");

        if (j.contains("limits")) {
            const auto& l = j.at("limits");
            inst.limits.nadir_bound_hz = l.value("nadir_hz", 0.6);
            inst.limits.rocof_bound_hz_s = l.value("rocof_hz_s", 2.0);
            inst.limits.qss_bound_hz = l.value("qss_hz", 0.2);
        }
        inst.limits.f_base_hz = inst.f_base_hz;
        if (inst.limits.nadir_bound_hz <= 0 || inst.limits.rocof_bound_hz_s <= 0 ||
            inst.limits.qss_bound_hz <= 0)
            throw InputError("/limits: bounds must be positive");

        if (j.contains("penalties")) {
            const auto& p = j.at("penalties");
            inst.penalties.demand_shift_per_kwh = p.value("demand_shift_per_kwh", 0.2);
            inst.penalties.disconnection_per_kwh = p.value("disconnection_per_kwh", 1.0);
        }

        for (const auto& b : j.at("buses")) inst.buses.push_back(b.get<std::string>());
        std::set<std::string> bus_set(inst.buses.begin(), inst.buses.end());
        if (bus_set.size() != inst.buses.size()) throw InputError("/buses: duplicate bus id");

        if (j.contains("lines")) {
            for (std::size_t i = 0; i < j.at("lines").size(); ++i) {
                const auto& jl = j.at("lines")[i];
                Line l;
                l.from = jl.at("from").get<std::string>();
                l.to = jl.at("to").get<std::string>();
                l.capacity_kw = jl.at("capacity_kw").get<double>();
                const std::string path = "/lines/" + std::to_string(i);
                if (!bus_set.count(l.from) || !bus_set.count(l.to))
                    throw InputError(path + ": unknown bus");
                if (l.capacity_kw <= 0) throw InputError(path + ": capacity must be positive");
                inst.lines.push_back(l);
            }
        }

        const auto& jd = j.at("representative_days");
        if (jd.empty()) throw InputError("/representative_days: need at least one day");
        int hours = -1;
        double weight_sum = 0;
        for (std::size_t d = 0; d < jd.size(); ++d) {
            const std::string path = "/representative_days/" + std::to_string(d);
            RepDay day;
            day.weight_days = jd[d].at("weight_days").get<double>();
            if (day.weight_days <= 0) throw InputError(path + ": weight must be positive");
            weight_sum += day.weight_days;
            const auto& pv = jd[d].at("pv_availability");
            day.pv_availability = pv.get<std::vector<double>>();
            if (hours < 0) hours = static_cast<int>(day.pv_availability.size());
            if (static_cast<int>(day.pv_availability.size()) != hours)
                throw InputError(path + "/pv_availability: inconsistent hour count");
            for (double v : day.pv_availability)
                if (v < 0 || v > 1) throw InputError(path + "/pv_availability: values in [0,1]");
            for (const auto& [bus, prof] : jd[d].at("demand_kw").items()) {
                if (!bus_set.count(bus)) throw InputError(path + "/demand_kw: unknown bus " + bus);
                day.demand_kw[bus] =
                    detail::profile_field(prof, path + "/demand_kw/" + bus, hours);
                for (double v : day.demand_kw[bus])
                    if (v < 0) throw InputError(path + "/demand_kw/" + bus + ": negative demand");
            }
            inst.days.push_back(std::move(day));
        }
        if (hours <= 0) throw InputError("/representative_days: empty hourly profiles");
        if (std::abs(weight_sum - 365.0) > 1e-6)
            throw InputError("/representative_days: weights must sum to 365");

        const auto& jg = j.at("grid");
        inst.grid.bus = jg.at("bus").get<std::string>();
        if (!bus_set.count(inst.grid.bus)) throw InputError("/grid/bus: unknown bus");
        inst.grid.rating_kw = jg.at("rating_kw").get<double>();
        if (inst.grid.rating_kw <= 0) throw InputError("/grid/rating_kw: must be positive");
        inst.grid.import_tariff =
            detail::profile_field(jg.at("import_tariff_per_kwh"), "/grid/import_tariff_per_kwh", hours);
        if (jg.contains("export_tariff_per_kwh"))
            inst.grid.export_tariff = detail::profile_field(
                jg.at("export_tariff_per_kwh"), "/grid/export_tariff_per_kwh", hours);
        else
            inst.grid.export_tariff = inst.grid.import_tariff;

        std::set<std::string> unit_ids;
        for (std::size_t u = 0; u < j.at("units").size(); ++u) {
            const auto& ju = j.at("units")[u];
            const std::string path = "/units/" + std::to_string(u);
            Unit unit;
            unit.id = ju.at("id").get<std::string>();
            if (!unit_ids.insert(unit.id).second)
                throw InputError(path + ": duplicate unit id " + unit.id);
            unit.bus = ju.at("bus").get<std::string>();
            if (!bus_set.count(unit.bus)) throw InputError(path + ": unknown bus");
            const std::string kind = ju.at("kind").get<std::string>();
            if (kind == "sg") unit.kind = UnitKind::Sg;
            else if (kind == "vsm") unit.kind = UnitKind::Vsm;
            else if (kind == "droop") unit.kind = UnitKind::Droop;
            else if (kind == "fixed") unit.kind = UnitKind::Fixed;
            else throw InputError(path + "/kind: expected sg|vsm|droop|fixed");
            unit.capacity_kw = ju.at("capacity_kw").get<double>();
            if (unit.capacity_kw <= 0) throw InputError(path + ": capacity must be positive");
            unit.existing = ju.value("existing", false);
            unit.invest_cost = ju.value("invest_cost", 0.0);
            if (!unit.existing && unit.invest_cost <= 0)
                throw InputError(path + ": candidate unit needs a positive invest_cost");
            unit.marginal_cost = ju.value("marginal_cost_per_kwh", 0.0);
            unit.is_pv = ju.value("pv", unit.kind != UnitKind::Sg);
            unit.inertia_s = ju.value("inertia_s", 0.0);
            unit.damping = ju.value("damping_pu", 0.0);
            unit.gain = ju.value("gain_pu", 1.0);
            unit.droop = ju.value("droop_pu", 0.05);
            unit.turbine_fraction = ju.value("turbine_fraction", 0.0);
            if (unit.kind == UnitKind::Sg &&
                (unit.inertia_s <= 0 || unit.droop <= 0))
                throw InputError(path + ": sg needs positive inertia_s and droop_pu");
            if (unit.kind == UnitKind::Droop && unit.droop <= 0)
                throw InputError(path + ": droop unit needs positive droop_pu");
            inst.units.push_back(std::move(unit));
        }
        bool any_existing = false;
        for (const auto& u : inst.units) any_existing |= u.existing;
        if (!any_existing) throw InputError("/units: need at least one existing unit");
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("instance JSON: ") + e.what());
    }
    return inst;
}

// Commitment vector z is parallel to inst.units (existing units are treated
// as committed regardless of the entry passed in).
inline FleetComposition fleet_for(const PlanningInstance& inst, const std::vector<double>& z) {
    FleetComposition fleet;
    for (std::size_t u = 0; u < inst.units.size(); ++u) {
        const Unit& un = inst.units[u];
        const bool on = un.existing || (u < z.size() && z[u] > 0.5);
        switch (un.kind) {
            case UnitKind::Sg:
                fleet.sync_units.push_back({{un.inertia_s, un.damping, un.gain, un.droop,
                                             un.turbine_fraction, un.capacity_kw},
                                            on});
                break;
            case UnitKind::Vsm:
                fleet.vsm_cigs.push_back({{un.inertia_s, un.damping, un.capacity_kw}, on});
                break;
            case UnitKind::Droop:
                fleet.droop_cigs.push_back({{un.gain, un.droop, un.capacity_kw}, on});
                break;
            case UnitKind::Fixed:
                fleet.fixed_cigs.push_back({un.capacity_kw, on});
                break;
        }
    }
    return fleet;
}

// One raw calendar day of bus demand plus PV availability.
struct RawDay {
    std::map<std::string, std::vector<double>> demand_kw;
    std::vector<double> pv_availability;
};

// Clusters raw days into k representative days; weights are member counts
// scaled so they sum to 365 regardless of the input day count.
inline std::vector<RepDay> cluster_days(const std::vector<RawDay>& raw, int k,
                                        std::uint64_t seed) {
    if (raw.empty()) throw InputError("cluster_days: no input days");
    std::vector<std::string> buses;
    for (const auto& [bus, prof] : raw.front().demand_kw) buses.push_back(bus);
    const std::size_t hours = raw.front().pv_availability.size();

    std::vector<std::vector<double>> feats;
    feats.reserve(raw.size());
    for (const auto& d : raw) {
        std::vector<double> f;
        for (const auto& bus : buses) {
            const auto it = d.demand_kw.find(bus);
            if (it == d.demand_kw.end() || it->second.size() != hours)
                throw InputError("cluster_days: inconsistent day profiles");
            f.insert(f.end(), it->second.begin(), it->second.end());
        }
        if (d.pv_availability.size() != hours)
            throw InputError("cluster_days: inconsistent day profiles");
        f.insert(f.end(), d.pv_availability.begin(), d.pv_availability.end());
        feats.push_back(std::move(f));
    }

    const KMeansResult km = kmeans(feats, k, seed);
    std::vector<RepDay> reps(static_cast<std::size_t>(k));
    const double scale = 365.0 / static_cast<double>(raw.size());
    for (int c = 0; c < k; ++c) {
        RepDay& rd = reps[static_cast<std::size_t>(c)];
        rd.weight_days = scale * km.counts[static_cast<std::size_t>(c)];
        const auto& cent = km.centroids[static_cast<std::size_t>(c)];
        std::size_t off = 0;
        for (const auto& bus : buses) {
            rd.demand_kw[bus].assign(cent.begin() + static_cast<long>(off),
                                     cent.begin() + static_cast<long>(off + hours));
            off += hours;
        }
        rd.pv_availability.assign(cent.begin() + static_cast<long>(off),
                                  cent.begin() + static_cast<long>(off + hours));
        for (double& v : rd.pv_availability) v = std::min(1.0, std::max(0.0, v));
    }
    return reps;
}

}  // namespace iplan
