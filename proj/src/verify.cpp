#include "fairmatch/verify.hpp"

#include <string>

#include "fairmatch/polytope.hpp"

namespace fairmatch {

namespace {

void require_shapes(const Instance& inst, const Allocation& x, const RatVec& per_item,
                    const char* what) {
    if (x.n_agents() != inst.n_agents() || x.n_items() != inst.n_items())
        throw DimensionMismatch(std::string(what) + ": allocation shape mismatch");
    if (static_cast<int>(per_item.size()) != inst.n_items())
        throw DimensionMismatch(std::string(what) + ": per-item vector length mismatch");
}

void require_valid(const Instance& inst, const Allocation& x, const char* what) {
    Verdict v = validate_allocation(inst, x);
    if (!v.holds) throw InputError(std::string(what) + ": allocation is not a valid matching");
}

void require_nonnegative(const RatVec& v, const char* what) {
    for (const auto& e : v)
        if (e < 0) throw InputError(std::string(what) + ": negative entry " + fraction_string(e));
}

BundleOpt two_stage_bundle(const Instance& inst, int agent, const RatVec& money,
                           const Rational& demand, bool earnings) {
    if (agent < 0 || agent >= inst.n_agents())
        throw DimensionMismatch("bundle optimization: agent index out of range");
    if (static_cast<int>(money.size()) != inst.n_items())
        throw DimensionMismatch("bundle optimization: price/earnings length mismatch");
    require_nonnegative(money, earnings ? "earnings" : "prices");
    if (demand <= 0) throw NonPositiveDemand("bundle optimization: demand must be positive");

    const int m = inst.n_items();
    RatVec ones(m, Rational(1));

    LinearProgram stage1;
    stage1.sense = Sense::Maximize;
    stage1.objective = inst.utilities[agent];
    stage1.add_row(ones, Relation::Equal, demand);
    stage1.add_row(money, earnings ? Relation::GreaterEq : Relation::LessEq, demand);
    LpSolution s1 = solve_lp(stage1);
    if (s1.status != LpStatus::Optimal) {
        if (earnings)
            throw InfeasibleEarnings("no bundle of size " + fraction_string(demand) +
                                     " earns that much");
        throw InfeasibleBudget("no bundle of size " + fraction_string(demand) +
                               " is affordable");
    }

    LinearProgram stage2;
    stage2.sense = earnings ? Sense::Maximize : Sense::Minimize;
    stage2.objective = money;
    stage2.add_row(ones, Relation::Equal, demand);
    stage2.add_row(money, earnings ? Relation::GreaterEq : Relation::LessEq, demand);
    stage2.add_row(inst.utilities[agent], Relation::GreaterEq, s1.objective_value);
    LpSolution s2 = solve_lp(stage2);
    if (s2.status != LpStatus::Optimal)
        throw Error("bundle optimization: stage two lost feasibility");  // unreachable

    BundleOpt out;
    out.value = s1.objective_value;
    out.cost = s2.objective_value;
    out.best_bundle = s1.x;
    out.extremal_bundle = s2.x;
    return out;
}

// Conditions 1 and 2 shared by both equilibrium notions.
std::optional<ConditionWitness> matching_conditions(const Instance& inst, const Allocation& x) {
    for (int i = 0; i < inst.n_agents(); ++i)
        for (int j = 0; j < inst.n_items(); ++j)
            if (x.x[i][j] < 0) {
                ConditionWitness w;
                w.condition = 1;
                w.agent = i;
                w.item = j;
                w.lhs = x.x[i][j];
                w.rhs = 0;
                w.relation = ">=";
                w.note = "negative allocation entry";
                return w;
            }
    for (int i = 0; i < inst.n_agents(); ++i) {
        Rational row = vec_sum(x.x[i]);
        if (row != inst.demands[i]) {
            ConditionWitness w;
            w.condition = 1;
            w.agent = i;
            w.lhs = row;
            w.rhs = inst.demands[i];
            w.relation = "==";
            w.note = "agent not fully matched";
            return w;
        }
    }
    for (int j = 0; j < inst.n_items(); ++j) {
        Rational col = 0;
        for (int i = 0; i < inst.n_agents(); ++i) col += x.x[i][j];
        if (col != 1) {
            ConditionWitness w;
            w.condition = 2;
            w.item = j;
            w.lhs = col;
            w.rhs = 1;
            w.relation = "==";
            w.note = "item not fully matched";
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace

BundleOpt best_affordable_bundle(const Instance& inst, int agent, const PriceVector& prices,
                                 const Rational& demand) {
    return two_stage_bundle(inst, agent, prices.p, demand, /*earnings=*/false);
}

BundleOpt best_earning_bundle(const Instance& inst, int agent, const EarningsVector& earnings,
                              const Rational& demand) {
    return two_stage_bundle(inst, agent, earnings.q, demand, /*earnings=*/true);
}

Verdict check_envy_free(const Instance& inst, const Allocation& x) {
    require_valid(inst, x, "check_envy_free");
    EnvyReport report = envy_report(inst, x);
    if (report.envy_free) return Verdict{true, std::nullopt};

    auto [i, k] = *report.worst_pair;
    RatMat values = envy_value_table(inst, x);
    EnvyPairWitness w;
    w.envier = i;
    w.envied = k;
    w.own_value = values[i][i];
    w.other_value = values[i][k];
    return Verdict{false, w};
}

Verdict check_pareto_optimal(const Instance& inst, const Allocation& x) {
    require_valid(inst, x, "check_pareto_optimal");
    const int n = inst.n_agents(), m = inst.n_items();

    // Variables: allocation cells, then one gain slack per agent.
    // Maximize total gain subject to u_i.y_i >= u_i.x_i + s_i, s_i >= 0:
    // optimum 0 means nothing weakly dominates x with strict improvement.
    LinearProgram lp = allocation_program(inst, /*extra_vars=*/n);
    lp.sense = Sense::Maximize;
    for (int i = 0; i < n; ++i) lp.objective[n * m + i] = 1;
    for (int i = 0; i < n; ++i) {
        RatVec row(lp.objective.size(), Rational(0));
        for (int j = 0; j < m; ++j) row[cell_index(inst, i, j)] = inst.utilities[i][j];
        row[n * m + i] = -1;
        lp.add_row(std::move(row), Relation::GreaterEq, dot(inst.utilities[i], x.x[i]));
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw Error("check_pareto_optimal: improvement LP did not solve");  // unreachable
    if (sol.objective_value == 0) return Verdict{true, std::nullopt};

    ParetoImprovementWitness w;
    w.better = allocation_from_solution(inst, sol.x);
    w.gains.assign(sol.x.begin() + n * m, sol.x.end());
    return Verdict{false, w};
}

Verdict check_hz_equilibrium(const Instance& inst, const Allocation& x,
                             const PriceVector& prices, const ToleranceConfig& tol) {
    require_shapes(inst, x, prices.p, "check_hz_equilibrium");
    require_nonnegative(prices.p, "prices");
    if (tol.eps < 0) throw InputError("eps must be nonnegative");

    if (auto w = matching_conditions(inst, x)) return Verdict{false, *w};

    for (int i = 0; i < inst.n_agents(); ++i) {
        Rational spend = dot(prices.p, x.x[i]);
        if (spend > inst.demands[i] + tol.eps) {
            ConditionWitness w;
            w.condition = 3;
            w.agent = i;
            w.lhs = spend;
            w.rhs = inst.demands[i] + tol.eps;
            w.relation = "<=";
            w.note = "agent overspends";
            return Verdict{false, w};
        }
    }
    for (int i = 0; i < inst.n_agents(); ++i) {
        BundleOpt best = best_affordable_bundle(inst, i, prices, inst.demands[i]);
        Rational got = dot(inst.utilities[i], x.x[i]);
        Rational floor = best.value - tol.eps * utility_range(inst, i);
        if (got < floor) {
            ConditionWitness w;
            w.condition = 4;
            w.agent = i;
            w.better_bundle = best.best_bundle;
            w.lhs = got;
            w.rhs = floor;
            w.relation = ">=";
            w.note = "bundle is not utility-optimal";
            return Verdict{false, w};
        }
        Rational spend = dot(prices.p, x.x[i]);
        if (spend > best.cost + tol.eps) {
            ConditionWitness w;
            w.condition = 4;
            w.agent = i;
            w.better_bundle = best.extremal_bundle;
            w.lhs = spend;
            w.rhs = best.cost + tol.eps;
            w.relation = "<=";
            w.note = "optimal bundle is not cheapest";
            return Verdict{false, w};
        }
    }
    return Verdict{true, std::nullopt};
}

Verdict check_earnings_equilibrium(const Instance& inst, const Allocation& x,
                                   const EarningsVector& earnings, const ToleranceConfig& tol) {
    require_shapes(inst, x, earnings.q, "check_earnings_equilibrium");
    require_nonnegative(earnings.q, "earnings");
    if (tol.eps < 0) throw InputError("eps must be nonnegative");

    if (auto w = matching_conditions(inst, x)) return Verdict{false, *w};

    for (int i = 0; i < inst.n_agents(); ++i) {
        Rational earned = dot(earnings.q, x.x[i]);
        if (earned < inst.demands[i] - tol.eps) {
            ConditionWitness w;
            w.condition = 3;
            w.agent = i;
            w.lhs = earned;
            w.rhs = inst.demands[i] - tol.eps;
            w.relation = ">=";
            w.note = "agent under-earns";
            return Verdict{false, w};
        }
    }
    for (int i = 0; i < inst.n_agents(); ++i) {
        BundleOpt best = best_earning_bundle(inst, i, earnings, inst.demands[i]);
        Rational got = dot(inst.utilities[i], x.x[i]);
        Rational floor = best.value - tol.eps * utility_range(inst, i);
        if (got < floor) {
            ConditionWitness w;
            w.condition = 4;
            w.agent = i;
            w.better_bundle = best.best_bundle;
            w.lhs = got;
            w.rhs = floor;
            w.relation = ">=";
            w.note = "bundle is not utility-optimal";
            return Verdict{false, w};
        }
        Rational earned = dot(earnings.q, x.x[i]);
        if (earned < best.cost - tol.eps) {
            ConditionWitness w;
            w.condition = 4;
            w.agent = i;
            w.better_bundle = best.extremal_bundle;
            w.lhs = earned;
            w.rhs = best.cost - tol.eps;
            w.relation = ">=";
            w.note = "optimal bundle is not highest-earning";
            return Verdict{false, w};
        }
    }
    return Verdict{true, std::nullopt};
}

}  // namespace fairmatch
