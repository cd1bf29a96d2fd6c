#pragma once

// Dense-tableau primal simplex for min c'x, A x {<=,=,>=} b, l <= x <= u,
// with general variable bounds handled directly (nonbasic at lower or upper
// bound). Two phases with artificial variables; the artificial columns stay
// in the tableau as an explicit basis inverse so that row duals fall out as
// y = c_B B^{-1}. Dantzig pricing with a switch to Bland's rule after a
// degenerate stall guarantees termination.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iplan/errors.hpp"

namespace iplan::opt {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Sense { LE, EQ, GE };

struct Model {
    struct Var {
        std::string name;
        double lo = 0, hi = kInf;
        VarKind kind = VarKind::Continuous;
    };
    struct Row {
        std::string name;
        std::vector<std::pair<int, double>> terms;
        Sense sense = Sense::LE;
        double rhs = 0;
    };

    std::vector<Var> vars;
    std::vector<Row> rows;
    std::vector<double> obj;
    double obj_offset = 0;

    int add_var(std::string name, double lo, double hi,
                VarKind kind = VarKind::Continuous, double cost = 0) {
        if (lo > hi) throw InputError("variable " + name + ": lo > hi");
        vars.push_back({std::move(name), lo, hi, kind});
        obj.push_back(cost);
        return static_cast<int>(vars.size()) - 1;
    }

    void add_cost(int v, double c) { obj[static_cast<std::size_t>(v)] += c; }

    int add_row(std::string name, std::vector<std::pair<int, double>> terms,
                Sense sense, double rhs) {
        rows.push_back({std::move(name), std::move(terms), sense, rhs});
        return static_cast<int>(rows.size()) - 1;
    }

    // Splits a free variable x into x = p - m with p, m >= 0 and adds
    // weight * (p + m) to the objective, an exact epigraph of weight * |x|
    // under minimization. Returns (p, m).
    std::pair<int, int> add_free_abs(int x, double weight = 1.0) {
        const std::string base = vars[static_cast<std::size_t>(x)].name;
        const int p = add_var(base + "+", 0, kInf, VarKind::Continuous, weight);
        const int m = add_var(base + "-", 0, kInf, VarKind::Continuous, weight);
        add_row(base + "_split", {{x, 1.0}, {p, -1.0}, {m, 1.0}}, Sense::EQ, 0.0);
        return {p, m};
    }

    bool has_binaries() const {
        for (const auto& v : vars)
            if (v.kind == VarKind::Binary) return true;
        return false;
    }

    std::string to_lp_text() const {
        std::ostringstream os;
        os << "min";
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (obj[j] != 0) os << " " << (obj[j] >= 0 ? "+" : "") << obj[j] << " " << vars[j].name;
        os << "\n";
        for (const auto& r : rows) {
            os << r.name << ":";
            for (const auto& [v, c] : r.terms)
                os << " " << (c >= 0 ? "+" : "") << c << " " << vars[static_cast<std::size_t>(v)].name;
            os << (r.sense == Sense::LE ? " <= " : r.sense == Sense::GE ? " >= " : " = ")
               << r.rhs << "\n";
        }
        for (const auto& v : vars)
            os << v.lo << " <= " << v.name << " <= " << v.hi
               << (v.kind == VarKind::Binary ? " binary" : "") << "\n";
        return os.str();
    }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NodeLimit };

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0;
    std::vector<double> x;
    std::vector<double> duals;          // per row; d(objective)/d(rhs)
    std::vector<double> reduced_costs;  // per structural variable
    long nodes = 0;                     // branch-and-bound nodes explored
};

struct SolveOptions {
    double tol = 1e-9;
    long max_pivots = 1000000;
    long max_nodes = 100000;
    double int_tol = 1e-6;
};

namespace detail {

class Simplex {
public:
    Simplex(const Model& model, const SolveOptions& opt) : mdl_(model), opt_(opt) {
        m_ = static_cast<int>(model.rows.size());
        ns_ = static_cast<int>(model.vars.size());
        n_ = ns_ + 2 * m_;
        T_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
        lo_.assign(static_cast<std::size_t>(n_), 0.0);
        hi_.assign(static_cast<std::size_t>(n_), kInf);
        cost_.assign(static_cast<std::size_t>(n_), 0.0);
        state_.assign(static_cast<std::size_t>(n_), kAtLower);
        art_sign_.assign(static_cast<std::size_t>(m_), 1.0);

        for (int j = 0; j < ns_; ++j) {
            lo_[j] = model.vars[static_cast<std::size_t>(j)].lo;
            hi_[j] = model.vars[static_cast<std::size_t>(j)].hi;
            state_[j] = pick_start_state(lo_[j], hi_[j]);
        }
        for (int r = 0; r < m_; ++r) {
            const auto& row = model.rows[static_cast<std::size_t>(r)];
            for (const auto& [v, c] : row.terms) at(r, v) += c;
            const int s = ns_ + r;
            switch (row.sense) {
                case Sense::LE: lo_[s] = 0; hi_[s] = kInf; break;
                case Sense::GE: lo_[s] = -kInf; hi_[s] = 0; break;
                case Sense::EQ: lo_[s] = 0; hi_[s] = 0; break;
            }
            at(r, s) = 1.0;
            state_[s] = pick_start_state(lo_[s], hi_[s]);
        }

        // Artificial basis sized to the current residuals.
        basis_.resize(static_cast<std::size_t>(m_));
        xb_.resize(static_cast<std::size_t>(m_));
        for (int r = 0; r < m_; ++r) {
            double res = model.rows[static_cast<std::size_t>(r)].rhs;
            for (int j = 0; j < ns_ + m_; ++j)
                if (at(r, j) != 0.0) res -= at(r, j) * nb_value(j);
            const int a = ns_ + m_ + r;
            art_sign_[r] = (res >= 0) ? 1.0 : -1.0;
            // Normalize the row so the artificial column is +e_r: the pivot
            // updates assume the basic columns form an identity.
            if (art_sign_[r] < 0)
                for (int j = 0; j < ns_ + m_; ++j) at(r, j) = -at(r, j);
            at(r, a) = 1.0;
            lo_[a] = 0;
            hi_[a] = kInf;
            basis_[static_cast<std::size_t>(r)] = a;
            xb_[static_cast<std::size_t>(r)] = std::abs(res);
            state_[a] = kBasic;
        }
    }

    Solution solve() {
        Solution sol;
        // Phase 1: minimize the sum of artificials.
        for (int r = 0; r < m_; ++r) cost_[static_cast<std::size_t>(ns_ + m_ + r)] = 1.0;
        SolveStatus st = iterate();
        if (st == SolveStatus::IterationLimit) {
            sol.status = st;
            return sol;
        }
        if (current_objective() > 1e-7) {
            sol.status = SolveStatus::Infeasible;
            return sol;
        }
        // Phase 2: real costs; artificials pinned at zero.
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int j = 0; j < ns_; ++j) cost_[static_cast<std::size_t>(j)] = mdl_.obj[static_cast<std::size_t>(j)];
        for (int r = 0; r < m_; ++r) hi_[static_cast<std::size_t>(ns_ + m_ + r)] = 0.0;
        st = iterate();
        sol.status = st;
        if (st != SolveStatus::Optimal) return sol;

        sol.x.assign(static_cast<std::size_t>(ns_), 0.0);
        std::vector<double> full(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) full[static_cast<std::size_t>(j)] = nb_value(j);
        for (int r = 0; r < m_; ++r)
            full[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] =
                xb_[static_cast<std::size_t>(r)];
        for (int j = 0; j < ns_; ++j) sol.x[static_cast<std::size_t>(j)] = full[static_cast<std::size_t>(j)];

        sol.objective = mdl_.obj_offset;
        for (int j = 0; j < ns_; ++j)
            sol.objective += mdl_.obj[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];

        // y = c_B B^{-1}; the artificial column of row r is B^{-1} e_r scaled
        // by the artificial's sign.
        sol.duals.assign(static_cast<std::size_t>(m_), 0.0);
        for (int r = 0; r < m_; ++r) {
            double y = 0;
            for (int i = 0; i < m_; ++i)
                y += cost_[basis_[static_cast<std::size_t>(i)]] * at(i, ns_ + m_ + r);
            sol.duals[static_cast<std::size_t>(r)] = art_sign_[static_cast<std::size_t>(r)] * y;
        }
        sol.reduced_costs.assign(static_cast<std::size_t>(ns_), 0.0);
        for (int j = 0; j < ns_; ++j) {
            double d = cost_[static_cast<std::size_t>(j)];
            for (const auto& [rr, cc] : columns_of(j)) d -= sol.duals[static_cast<std::size_t>(rr)] * cc;
            sol.reduced_costs[static_cast<std::size_t>(j)] = d;
        }
        return sol;
    }

private:
    static constexpr std::int8_t kAtLower = 0, kAtUpper = 1, kFreeNB = 2, kBasic = 3;

    double& at(int r, int c) { return T_[static_cast<std::size_t>(r) * n_ + c]; }
    double at(int r, int c) const { return T_[static_cast<std::size_t>(r) * n_ + c]; }

    static std::int8_t pick_start_state(double lo, double hi) {
        if (lo > -kInf) return kAtLower;
        if (hi < kInf) return kAtUpper;
        return kFreeNB;
    }

    double nb_value(int j) const {
        switch (state_[static_cast<std::size_t>(j)]) {
            case kAtLower: return lo_[static_cast<std::size_t>(j)];
            case kAtUpper: return hi_[static_cast<std::size_t>(j)];
            default: return 0.0;
        }
    }

    std::vector<std::pair<int, double>> columns_of(int j) const {
        std::vector<std::pair<int, double>> col;
        for (std::size_t r = 0; r < mdl_.rows.size(); ++r)
            for (const auto& [v, c] : mdl_.rows[r].terms)
                if (v == j) col.emplace_back(static_cast<int>(r), c);
        return col;
    }

    double current_objective() const {
        double z = 0;
        for (int j = 0; j < n_; ++j)
            if (state_[static_cast<std::size_t>(j)] != kBasic)
                z += cost_[static_cast<std::size_t>(j)] * nb_value(j);
        for (int r = 0; r < m_; ++r)
            z += cost_[basis_[static_cast<std::size_t>(r)]] * xb_[static_cast<std::size_t>(r)];
        return z;
    }

    SolveStatus iterate() {
        const double tol = opt_.tol;
        int stall = 0;
        bool bland = false;
        double last_z = current_objective();
        for (long pivots = 0; pivots < opt_.max_pivots; ++pivots) {
            // Pricing.
            std::vector<double> cb(static_cast<std::size_t>(m_));
            for (int r = 0; r < m_; ++r) cb[static_cast<std::size_t>(r)] = cost_[basis_[static_cast<std::size_t>(r)]];
            int enter = -1, dir = 0;
            double best = 0;
            for (int j = 0; j < n_; ++j) {
                const std::int8_t st = state_[static_cast<std::size_t>(j)];
                if (st == kBasic) continue;
                if (lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)]) continue;
                double d = cost_[static_cast<std::size_t>(j)];
                for (int r = 0; r < m_; ++r) {
                    const double a = at(r, j);
                    if (a != 0.0) d -= cb[static_cast<std::size_t>(r)] * a;
                }
                int cand = 0;
                if ((st == kAtLower || st == kFreeNB) && d < -tol) cand = +1;
                else if ((st == kAtUpper || st == kFreeNB) && d > tol) cand = -1;
                if (cand == 0) continue;
                if (bland) { enter = j; dir = cand; break; }
                if (std::abs(d) > best + 1e-15) { best = std::abs(d); enter = j; dir = cand; }
            }
            if (enter < 0) return SolveStatus::Optimal;

            // Ratio test.
            double tmax = kInf;
            if (lo_[static_cast<std::size_t>(enter)] > -kInf && hi_[static_cast<std::size_t>(enter)] < kInf)
                tmax = hi_[static_cast<std::size_t>(enter)] - lo_[static_cast<std::size_t>(enter)];
            double tstar = tmax;
            int leave = -1;  // -1: bound flip
            for (int r = 0; r < m_; ++r) {
                const double a = at(r, enter);
                if (std::abs(a) < 1e-11) continue;
                const int bv = basis_[static_cast<std::size_t>(r)];
                const double delta = a * dir;  // x_B[r] moves by -delta * t
                double room, step;
                if (delta > 0) {
                    if (lo_[static_cast<std::size_t>(bv)] <= -kInf) continue;
                    room = xb_[static_cast<std::size_t>(r)] - lo_[static_cast<std::size_t>(bv)];
                    step = room / delta;
                } else {
                    if (hi_[static_cast<std::size_t>(bv)] >= kInf) continue;
                    room = hi_[static_cast<std::size_t>(bv)] - xb_[static_cast<std::size_t>(r)];
                    step = room / (-delta);
                }
                if (step < 0) step = 0;
                if (step < tstar - 1e-12 ||
                    (leave >= 0 && step < tstar + 1e-12 &&
                     bv < basis_[static_cast<std::size_t>(leave)])) {
                    tstar = step;
                    leave = r;
                }
            }
            if (tstar >= kInf) return SolveStatus::Unbounded;

            // Apply the move.
            for (int r = 0; r < m_; ++r) {
                const double a = at(r, enter);
                if (a != 0.0) xb_[static_cast<std::size_t>(r)] -= dir * a * tstar;
            }
            if (leave < 0) {
                state_[static_cast<std::size_t>(enter)] =
                    (state_[static_cast<std::size_t>(enter)] == kAtLower) ? kAtUpper : kAtLower;
            } else {
                const int out = basis_[static_cast<std::size_t>(leave)];
                const double enter_val = nb_value(enter) + dir * tstar;
                const double piv = at(leave, enter);
                const double inv = 1.0 / piv;
                for (int c = 0; c < n_; ++c) at(leave, c) *= inv;
                for (int r = 0; r < m_; ++r) {
                    if (r == leave) continue;
                    const double f = at(r, enter);
                    if (f == 0.0) continue;
                    for (int c = 0; c < n_; ++c) {
                        at(r, c) -= f * at(leave, c);
                        if (std::abs(at(r, c)) < 1e-12) at(r, c) = 0.0;
                    }
                }
                const double out_dir = at(leave, enter);  // now 1 by construction
                (void)out_dir;
                state_[static_cast<std::size_t>(out)] = (dir * piv > 0) ? kAtLower : kAtUpper;
                if (lo_[static_cast<std::size_t>(out)] <= -kInf &&
                    state_[static_cast<std::size_t>(out)] == kAtLower)
                    state_[static_cast<std::size_t>(out)] = kAtUpper;  // hit its finite side
                basis_[static_cast<std::size_t>(leave)] = enter;
                xb_[static_cast<std::size_t>(leave)] = enter_val;
                state_[static_cast<std::size_t>(enter)] = kBasic;
            }

            const double z = current_objective();
            if (z < last_z - 1e-12) { stall = 0; bland = false; } else { ++stall; }
            last_z = z;
            if (stall > 200) bland = true;  // anti-cycling fallback
        }
        return SolveStatus::IterationLimit;
    }

    const Model& mdl_;
    SolveOptions opt_;
    int m_ = 0, ns_ = 0, n_ = 0;
    std::vector<double> T_, lo_, hi_, cost_;
    std::vector<std::int8_t> state_;
    std::vector<int> basis_;
    std::vector<double> xb_;
    std::vector<double> art_sign_;
};

}  // namespace detail

inline Solution solve_lp(const Model& model, const SolveOptions& opt = {}) {
    return detail::Simplex(model, opt).solve();
}

}  // namespace iplan::opt
