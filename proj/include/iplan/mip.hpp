#pragma once

// Best-first branch and bound over the binary variables of a Model. LP
// relaxations come from lp.hpp; nodes are explored in (bound, id) order so
// results are deterministic.

#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "iplan/lp.hpp"

namespace iplan::opt {

inline Solution solve_mip(const Model& model, const SolveOptions& opt = {}) {
    Model relaxed = model;
    std::vector<int> binaries;
    for (std::size_t j = 0; j < relaxed.vars.size(); ++j) {
        if (relaxed.vars[j].kind == VarKind::Binary) {
            binaries.push_back(static_cast<int>(j));
            relaxed.vars[j].kind = VarKind::Continuous;
            relaxed.vars[j].lo = std::max(relaxed.vars[j].lo, 0.0);
            relaxed.vars[j].hi = std::min(relaxed.vars[j].hi, 1.0);
        }
    }
    if (binaries.empty()) return solve_lp(relaxed, opt);

    struct Node {
        double bound;
        long id;
        std::vector<std::pair<int, double>> fixes;
        bool operator>(const Node& o) const {
            return bound != o.bound ? bound > o.bound : id > o.id;
        }
    };

    auto solve_node = [&](const std::vector<std::pair<int, double>>& fixes) {
        Model m = relaxed;
        for (const auto& [v, val] : fixes) {
            m.vars[static_cast<std::size_t>(v)].lo = val;
            m.vars[static_cast<std::size_t>(v)].hi = val;
        }
        return solve_lp(m, opt);
    };

    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    Solution incumbent;
    incumbent.status = SolveStatus::Infeasible;
    double best = kInf;
    long next_id = 0, nodes = 0;
    bool hit_limits = false;

    open.push({-kInf, next_id++, {}});
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (node.bound > best - 1e-9) continue;
        if (++nodes > opt.max_nodes) { hit_limits = true; break; }

        Solution rel = solve_node(node.fixes);
        if (rel.status == SolveStatus::IterationLimit) { hit_limits = true; break; }
        if (rel.status == SolveStatus::Unbounded) { incumbent.status = SolveStatus::Unbounded; break; }
        if (rel.status != SolveStatus::Optimal) continue;
        if (rel.objective > best - 1e-9) continue;

        // Most fractional binary; ties go to the smallest index.
        int branch = -1;
        double worst = opt.int_tol;
        for (int b : binaries) {
            const double v = rel.x[static_cast<std::size_t>(b)];
            const double frac = std::abs(v - std::round(v));
            if (frac > worst + 1e-15) { worst = frac; branch = b; }
        }
        if (branch < 0) {
            if (rel.objective < best) {
                best = rel.objective;
                incumbent = rel;
                for (int b : binaries) {
                    double& v = incumbent.x[static_cast<std::size_t>(b)];
                    v = std::round(v);
                }
            }
            continue;
        }
        for (double val : {0.0, 1.0}) {
            auto fixes = node.fixes;
            fixes.emplace_back(branch, val);
            open.push({rel.objective, next_id++, std::move(fixes)});
        }
    }

    incumbent.nodes = nodes;
    if (incumbent.status == SolveStatus::Optimal && hit_limits)
        incumbent.status = SolveStatus::NodeLimit;
    else if (incumbent.status != SolveStatus::Optimal && hit_limits)
        incumbent.status = SolveStatus::NodeLimit;
    return incumbent;
}

}  // namespace iplan::opt
