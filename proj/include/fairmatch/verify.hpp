#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/lp.hpp"

namespace fairmatch {

/// Additive slack for the equilibrium checks; 0 means exact. Budget and
/// earnings conditions relax by eps directly; utility optimality relaxes
/// by eps * (max_j u_ij - min_j u_ij) so the knob is meaningful across
/// mixed-sign utilities and rescales consistently with the utilities.
struct ToleranceConfig {
    Rational eps = 0;
};

/// Result of the two-stage bundle optimization for one agent.
struct BundleOpt {
    Rational value;          // best achievable utility
    Rational cost;           // cheapest cost (or highest earning) at that value
    RatVec best_bundle;      // a utility-optimal bundle
    RatVec extremal_bundle;  // a cheapest (resp. highest-earning) optimal bundle
};

/// Stage one: maximize u_i . y over y >= 0, sum y = demand, p.y <= demand.
/// Stage two: minimize p.y at optimal utility. Throws InfeasibleBudget
/// when even the cheapest bundle of the given size exceeds the budget.
BundleOpt best_affordable_bundle(const Instance& inst, int agent,
                                 const PriceVector& prices, const Rational& demand);

/// Mirror image: q.y >= demand, stage two maximizes q.y.
/// Throws InfeasibleEarnings when no bundle of the given size earns enough.
BundleOpt best_earning_bundle(const Instance& inst, int agent,
                              const EarningsVector& earnings, const Rational& demand);

/// Wraps envy_report into a Verdict with the worst pair as witness.
Verdict check_envy_free(const Instance& inst, const Allocation& x);

/// Exact LP test: maximize total slack over allocations dominating x;
/// holds iff the optimum is 0, otherwise the witness is a Pareto-better
/// allocation with its per-agent gains.
Verdict check_pareto_optimal(const Instance& inst, const Allocation& x);

/// The four equilibrium conditions, checked in order with the first
/// violation reported: (1) agents fully matched, (2) items fully matched,
/// (3) nobody overspends, (4) everyone holds a cheapest optimal bundle.
Verdict check_hz_equilibrium(const Instance& inst, const Allocation& x,
                             const PriceVector& prices, const ToleranceConfig& tol = {});

/// Earnings mirror: (3) nobody under-earns, (4) everyone holds a
/// highest-earning optimal bundle.
Verdict check_earnings_equilibrium(const Instance& inst, const Allocation& x,
                                   const EarningsVector& earnings,
                                   const ToleranceConfig& tol = {});

}  // namespace fairmatch
