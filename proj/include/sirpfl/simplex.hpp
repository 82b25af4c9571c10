#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "sirpfl/lp_model.hpp"

namespace sirpfl {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
    LpStatus status = LpStatus::Optimal;
    std::vector<Rational> x;
    Rational objective;
};

struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

/// Dense rational tableau, two-phase primal simplex, Bland's pivot rule in
/// both phases (lowest eligible column in, lowest basic variable out), which
/// guarantees termination under degeneracy and makes runs deterministic.
/// Pivots skip zero entries, so the cost tracks fill-in rather than the full
/// tableau at desk scale.
class SimplexTableau {
public:
    explicit SimplexTableau(const LpModel& model) : nstruct_(static_cast<int>(model.vars.size())) {
        const int m = static_cast<int>(model.cons.size());
        // Column layout: structural | one slack or surplus per inequality | artificials.
        naux_ = 0;
        for (const auto& c : model.cons)
            if (c.rel == LpConstraint::Ge) ++naux_;
        rows_.assign(m, {});
        basis_.assign(m, -1);
        std::vector<int> art_rows;
        int aux = 0;
        for (int i = 0; i < m; ++i) {
            const auto& c = model.cons[i];
            Row& row = rows_[i];
            row.a.assign(nstruct_ + naux_, Rational(0));
            for (const auto& term : c.terms)
                if (term.coeff != 0) row.a[term.var] += term.coeff;
            row.rhs = c.rhs;
            bool flip = row.rhs < 0;  // normalize to rhs >= 0
            if (flip) negate(row);
            if (c.rel == LpConstraint::Ge) {
                int scol = nstruct_ + aux++;
                if (flip) {
                    // became <=: slack enters the basis directly
                    row.a[scol] = 1;
                    basis_[i] = scol;
                } else if (row.rhs == 0) {
                    // 0 >= form: negate into <= so the slack is basic
                    negate(row);
                    row.a[scol] = 1;
                    basis_[i] = scol;
                } else {
                    row.a[scol] = -1;
                    art_rows.push_back(i);
                }
            } else {
                art_rows.push_back(i);
            }
        }
        nart_ = static_cast<int>(art_rows.size());
        total_ = nstruct_ + naux_ + nart_;
        for (auto& row : rows_) row.a.resize(total_, Rational(0));
        dead_.assign(total_, false);
        row_alive_.assign(m, true);
        for (int k = 0; k < nart_; ++k) {
            int i = art_rows[k];
            rows_[i].a[nstruct_ + naux_ + k] = 1;
            basis_[i] = nstruct_ + naux_ + k;
        }
    }

    LpStatus run(const LpModel& model, std::vector<Rational>& out_x) {
        if (nart_ > 0) {
            // Phase 1: minimize the artificial sum.
            cost_.assign(total_ + 1, Rational(0));
            for (int j = nstruct_ + naux_; j < total_; ++j) cost_[j] = 1;
            for (int i = 0; i < static_cast<int>(rows_.size()); ++i)
                if (basis_[i] >= nstruct_ + naux_) subtract_row(cost_, rows_[i], Rational(1));
            iterate(/*phase1=*/true);
            if (cost_[total_] < 0) return LpStatus::Infeasible;  // leftover artificial mass
            expel_artificials();
        }
        cost_.assign(total_ + 1, Rational(0));
        for (int j = 0; j < nstruct_; ++j) cost_[j] = model.vars[j].obj;
        for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
            if (!row_alive_[i]) continue;
            int b = basis_[i];
            if (b < nstruct_ && cost_[b] != 0) subtract_row(cost_, rows_[i], cost_[b]);
        }
        if (!iterate(/*phase1=*/false)) return LpStatus::Unbounded;

        out_x.assign(nstruct_, Rational(0));
        for (int i = 0; i < static_cast<int>(rows_.size()); ++i)
            if (row_alive_[i] && basis_[i] < nstruct_) out_x[basis_[i]] = rows_[i].rhs;
        return LpStatus::Optimal;
    }

private:
    struct Row {
        std::vector<Rational> a;
        Rational rhs;
    };

    int nstruct_, naux_ = 0, nart_ = 0, total_ = 0;
    std::vector<Row> rows_;
    std::vector<int> basis_;
    std::vector<bool> dead_;       // artificial columns retired after leaving
    std::vector<bool> row_alive_;  // redundant rows dropped after phase 1
    std::vector<Rational> cost_;   // reduced costs; last cell holds -objective

    static void negate(Row& row) {
        for (auto& a : row.a)
            if (a != 0) a = -a;
        row.rhs = -row.rhs;
    }

    // factor by value: the loop may overwrite the cell a caller passes in
    void subtract_row(std::vector<Rational>& target, const Row& row, Rational factor) {
        for (int j = 0; j < total_; ++j)
            if (row.a[j] != 0) target[j] -= factor * row.a[j];
        target[total_] -= factor * row.rhs;
    }

    // Returns false on unboundedness.
    bool iterate(bool phase1) {
        const int m = static_cast<int>(rows_.size());
        for (;;) {
            int enter = -1;
            for (int j = 0; j < total_; ++j)
                if (!dead_[j] && cost_[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;

            int leave = -1;
            Rational best;
            for (int i = 0; i < m; ++i) {
                if (!row_alive_[i]) continue;
                const Rational& a = rows_[i].a[enter];
                if (a <= 0) continue;
                Rational ratio = rows_[i].rhs / a;
                if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave < 0) {
                if (phase1) throw SolveError("phase 1 unbounded: internal error");
                return false;
            }
            pivot(leave, enter);
        }
    }

    void pivot(int r, int c) {
        Row& prow = rows_[r];
        if (int old = basis_[r]; old >= nstruct_ + naux_) dead_[old] = true;
        const Rational piv = prow.a[c];
        if (piv != 1) {
            for (auto& a : prow.a)
                if (a != 0) a /= piv;
            if (prow.rhs != 0) prow.rhs /= piv;
        }
        std::vector<int> nz;
        nz.reserve(32);
        for (int j = 0; j < total_; ++j)
            if (prow.a[j] != 0 && j != c) nz.push_back(j);
        for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
            if (i == r || !row_alive_[i]) continue;
            Rational& f = rows_[i].a[c];
            if (f == 0) continue;
            for (int j : nz) rows_[i].a[j] -= f * prow.a[j];
            if (prow.rhs != 0) rows_[i].rhs -= f * prow.rhs;
            f = 0;
        }
        Rational& fc = cost_[c];
        if (fc != 0) {
            for (int j : nz) cost_[j] -= fc * prow.a[j];
            if (prow.rhs != 0) cost_[total_] -= fc * prow.rhs;
            fc = 0;
        }
        basis_[r] = c;
    }

    /// Pivot basic artificials out on any live column, or drop redundant rows.
    void expel_artificials() {
        for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
            if (!row_alive_[i] || basis_[i] < nstruct_ + naux_) continue;
            int col = -1;
            for (int j = 0; j < nstruct_ + naux_; ++j)
                if (!dead_[j] && rows_[i].a[j] != 0) {
                    col = j;
                    break;
                }
            if (col >= 0) {
                pivot(i, col);  // rhs is 0 here, so feasibility is preserved
            } else {
                dead_[basis_[i]] = true;
                row_alive_[i] = false;
            }
        }
        for (int j = nstruct_ + naux_; j < total_; ++j) dead_[j] = true;
    }
};

}  // namespace detail

/// Exact two-phase simplex over the rationals.
inline SimplexResult simplex_solve(const LpModel& model) {
    detail::SimplexTableau tableau(model);
    SimplexResult result;
    result.status = tableau.run(model, result.x);
    if (result.status == LpStatus::Optimal) {
        result.objective = 0;
        for (std::size_t j = 0; j < model.vars.size(); ++j)
            if (model.vars[j].obj != 0 && result.x[j] != 0)
                result.objective += model.vars[j].obj * result.x[j];
    }
    return result;
}

/// Substitutes a candidate point into every constraint; exact.
inline bool lp_feasible(const LpModel& model, const std::vector<Rational>& x) {
    for (const auto& v : x)
        if (v < 0) return false;
    for (const auto& c : model.cons) {
        Rational lhs(0);
        for (const auto& term : c.terms)
            if (term.coeff != 0 && x[term.var] != 0) lhs += term.coeff * x[term.var];
        if (c.rel == LpConstraint::Ge ? lhs < c.rhs : lhs != c.rhs) return false;
    }
    return true;
}

/// Solves a model built from a valid instance. Infeasibility or unboundedness
/// would mean a modelling bug, so both raise. The optimum is re-verified by
/// substitution and decomposed into the three cost families before returning.
inline LpSolution solve_lp(const LpModel& model) {
    SimplexResult res = simplex_solve(model);
    if (res.status == LpStatus::Infeasible) throw SolveError("LP infeasible");
    if (res.status == LpStatus::Unbounded) throw SolveError("LP unbounded");
    if (!lp_feasible(model, res.x)) throw SolveError("simplex returned an infeasible point");

    LpSolution sol;
    sol.vars = model.vars;
    sol.index = model.index;
    sol.values = std::move(res.x);
    sol.objective = res.objective;
    sol.facility_cost = sol.routing_cost = sol.holding_cost = 0;
    for (std::size_t j = 0; j < sol.vars.size(); ++j) {
        if (sol.vars[j].obj == 0 || sol.values[j] == 0) continue;
        Rational term = sol.vars[j].obj * sol.values[j];
        switch (sol.vars[j].family) {
            case CostFamily::Facility: sol.facility_cost += term; break;
            case CostFamily::Routing: sol.routing_cost += term; break;
            case CostFamily::Holding: sol.holding_cost += term; break;
            case CostFamily::None: break;
        }
    }
    if (sol.facility_cost + sol.routing_cost + sol.holding_cost != sol.objective)
        throw SolveError("cost decomposition does not sum to the objective");
    return sol;
}

}  // namespace sirpfl
