#pragma once

// Independent LP oracle for small models: row-reduce the standard form, then
// enumerate every basis of the reduced system and take the best feasible one.
// Shares nothing with the simplex implementation it cross-checks.

#include <optional>
#include <vector>

#include "sirpfl/lp_model.hpp"

namespace sirpfl::testing {

inline std::optional<Rational> brute_force_lp_min(const LpModel& model) {
    const int n = static_cast<int>(model.vars.size());
    const int m = static_cast<int>(model.cons.size());
    int nge = 0;
    for (const auto& c : model.cons)
        if (c.rel == LpConstraint::Ge) ++nge;
    const int cols = n + nge;
    if (m == 0) return Rational(0);  // every variable at 0 minimizes c >= 0 models

    // standard form A x = b with surplus columns for >= rows
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(cols + 1, Rational(0)));
    std::vector<Rational> cost(cols, Rational(0));
    for (int j = 0; j < n; ++j) cost[j] = model.vars[j].obj;
    int aux = 0;
    for (int i = 0; i < m; ++i) {
        for (const auto& term : model.cons[i].terms) A[i][term.var] += term.coeff;
        A[i][cols] = model.cons[i].rhs;
        if (model.cons[i].rel == LpConstraint::Ge) A[i][n + aux++] = -1;
    }

    // row reduction: drop dependent-but-consistent rows, bail on 0 = c
    int rank = 0;
    for (int col = 0; col < cols && rank < m; ++col) {
        int piv = -1;
        for (int r = rank; r < m; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[rank], A[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == rank || A[r][col] == 0) continue;
            Rational f = A[r][col] / A[rank][col];
            for (int k = col; k <= cols; ++k) A[r][k] -= f * A[rank][k];
        }
        ++rank;
    }
    for (int r = rank; r < m; ++r)
        if (A[r][cols] != 0) return std::nullopt;  // inconsistent system
    A.resize(rank);

    std::optional<Rational> best;
    std::vector<int> pick(rank);
    auto solve_basis = [&](const std::vector<int>& cols_pick) {
        std::vector<std::vector<Rational>> M(rank, std::vector<Rational>(rank + 1));
        for (int i = 0; i < rank; ++i) {
            for (int k = 0; k < rank; ++k) M[i][k] = A[i][cols_pick[k]];
            M[i][rank] = A[i][cols];
        }
        for (int col = 0; col < rank; ++col) {
            int piv = -1;
            for (int r = col; r < rank; ++r)
                if (M[r][col] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return;  // singular basis
            std::swap(M[col], M[piv]);
            for (int r = 0; r < rank; ++r) {
                if (r == col || M[r][col] == 0) continue;
                Rational f = M[r][col] / M[col][col];
                for (int k = col; k <= rank; ++k) M[r][k] -= f * M[col][k];
            }
        }
        Rational obj(0);
        for (int k = 0; k < rank; ++k) {
            Rational xk = M[k][rank] / M[k][k];
            if (xk < 0) return;  // infeasible basis
            obj += cost[cols_pick[k]] * xk;
        }
        if (!best || obj < *best) best = obj;
    };
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == rank) {
            solve_basis(pick);
            return;
        }
        for (int j = start; j <= cols - (rank - depth); ++j) {
            pick[depth] = j;
            self(self, j + 1, depth + 1);
        }
    };
    if (rank == 0) {
        // only trivial rows: x = 0 is feasible and optimal for c >= 0; report 0
        return Rational(0);
    }
    rec(rec, 0, 0);
    return best;
}

}  // namespace sirpfl::testing
