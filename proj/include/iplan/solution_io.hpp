#pragma once

// Serialization of plan results: solution.json, costs.json, metrics.csv and
// iterations.jsonl. Key order and number formatting are deterministic so
// repeated runs produce byte-identical artifacts (iteration logs carry wall
// times and are excluded from that guarantee).

#include <cstdio>
#include <string>

#include <json.hpp>

#include "iplan/decomposition.hpp"
#include "iplan/instance.hpp"

namespace iplan {

inline std::string solution_json(const PlanningInstance& inst, const PlanResult& r) {
    nlohmann::ordered_json j;
    j["instance"] = inst.name;
    j["algorithm"] = r.algorithm;
    j["converged"] = r.converged;
    if (!r.message.empty()) j["message"] = r.message;
    j["iterations"] = r.iterations.size();
    j["total_cost"] = r.total_cost;
    j["gamma"] = r.gamma;
    nlohmann::ordered_json inv;
    for (std::size_t u = 0; u < inst.units.size(); ++u)
        if (!inst.units[u].existing)
            inv[inst.units[u].id] = (u < r.z.size() && r.z[u] > 0.5);
    j["investments"] = inv;
    if (r.converged) {
        j["fleet"] = {{"p_base_kw", r.fleet.p_base_kw},
                      {"M", r.fleet.M},
                      {"D", r.fleet.D},
                      {"R_s", r.fleet.R_s},
                      {"F_s", r.fleet.F_s}};
        j["p_grid_kw"] = r.pgrid;
        j["audit_pass"] = r.audit_pass;
    }
    return j.dump(2) + "\n";
}

inline std::string costs_json(const PlanResult& r) {
    nlohmann::ordered_json j;
    j["total"] = r.costs.total;
    j["investment"] = r.costs.investment;
    j["operational"] = r.costs.operational;
    j["shift_penalty"] = r.costs.shift_penalty;
    j["disconnection_penalty"] = r.costs.disconnection_penalty;
    j["islanding_penalty"] = r.costs.islanding_penalty;
    return j.dump(2) + "\n";
}

inline std::string metrics_csv(const PlanResult& r) {
    std::string out = "day,hour,p_grid_kw,nadir_hz,rocof_hz_s,qss_hz,pass\n";
    char buf[160];
    for (std::size_t d = 0; d < r.audit.size(); ++d) {
        for (std::size_t t = 0; t < r.audit[d].size(); ++t) {
            const HourAudit& a = r.audit[d][t];
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g,%.10g,%.10g,%d\n", d, t,
                          a.pgrid_kw, a.metrics.nadir_hz, a.metrics.rocof_hz_s,
                          a.metrics.qss_hz, a.pass ? 1 : 0);
            out += buf;
        }
    }
    return out;
}

inline std::string iterations_jsonl(const PlanResult& r) {
    std::string out;
    for (const IterationRecord& it : r.iterations) {
        nlohmann::ordered_json j;
        j["iter"] = it.iter;
        j["master_objective"] = it.master_objective;
        j["violations"] = it.violations;
        j["cuts_added"] = it.cuts_added;
        j["max_slack_kw"] = it.max_slack_kw;
        j["wall_ms"] = it.wall_ms;
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace iplan
