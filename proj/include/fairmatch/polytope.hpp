#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/lp.hpp"

namespace fairmatch {

/// Row-major variable index of the allocation cell (i, j).
inline int cell_index(const Instance& inst, int i, int j) {
    return i * inst.n_items() + j;
}

/// LP skeleton over the allocation polytope: n*m cell variables (plus
/// extra_vars trailing ones), zero objective, rows pinned to demands and
/// columns to 1. Callers fill in the objective and extra constraints.
inline LinearProgram allocation_program(const Instance& inst, int extra_vars = 0) {
    const int n = inst.n_agents(), m = inst.n_items();
    LinearProgram lp;
    lp.objective.assign(n * m + extra_vars, Rational(0));
    for (int i = 0; i < n; ++i) {
        RatVec row(lp.objective.size(), Rational(0));
        for (int j = 0; j < m; ++j) row[cell_index(inst, i, j)] = 1;
        lp.add_row(std::move(row), Relation::Equal, inst.demands[i]);
    }
    for (int j = 0; j < m; ++j) {
        RatVec col(lp.objective.size(), Rational(0));
        for (int i = 0; i < n; ++i) col[cell_index(inst, i, j)] = 1;
        lp.add_row(std::move(col), Relation::Equal, Rational(1));
    }
    return lp;
}

/// Reads the allocation cells back out of an LP solution vector.
inline Allocation allocation_from_solution(const Instance& inst, const RatVec& x) {
    Allocation out;
    out.x.assign(inst.n_agents(), RatVec(inst.n_items()));
    for (int i = 0; i < inst.n_agents(); ++i)
        for (int j = 0; j < inst.n_items(); ++j)
            out.x[i][j] = x[cell_index(inst, i, j)];
    return out;
}

}  // namespace fairmatch
