#pragma once

#include <vector>

#include "fairmatch/errors.hpp"
#include "fairmatch/rational.hpp"

namespace fairmatch {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEq, Equal, GreaterEq };

/// Exact-rational linear program. Variables default to lower bound 0;
/// per-variable lower bounds may be supplied (no upper bounds).
struct LinearProgram {
    Sense sense = Sense::Maximize;
    RatVec objective;

    struct Row {
        RatVec coeffs;
        Relation rel = Relation::LessEq;
        Rational rhs;
    };
    std::vector<Row> rows;

    RatVec lower_bounds;  // empty means all-zero

    int n_vars() const { return static_cast<int>(objective.size()); }
    void add_row(RatVec coeffs, Relation rel, Rational rhs) {
        rows.push_back(Row{std::move(coeffs), rel, std::move(rhs)});
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    RatVec x;                 // when Optimal; a basic feasible solution
    Rational objective_value; // when Optimal
    // Phase-one residual (sum of artificial variables) when Infeasible;
    // a distance-to-feasibility measure, 0 otherwise.
    Rational infeasibility;
};

/// Exact two-phase dense simplex with Bland's anti-cycling rule.
/// Deterministic: identical programs yield identical bases and solutions.
LpSolution solve_lp(const LinearProgram& lp);

/// Phase one only: any exact feasible point, or Infeasible.
LpSolution check_feasible(const LinearProgram& lp);

}  // namespace fairmatch
