#pragma once

#include <optional>
#include <vector>

#include "fairmatch/core.hpp"
#include "fairmatch/verify.hpp"

namespace fairmatch {

/// Price grid for the equilibrium search. price_cap <= 0 means "number
/// of items" (total spending can never exceed the total demand, which
/// bounds the useful price scale).
struct GridConfig {
    Rational delta{1, 4};
    Rational price_cap = 0;
    Rational eps = 0;
    int max_items = 4;
    int workers = 1;
};

/// Stopping control for the Nash bargaining solver. tolerance bounds the
/// final conditional-gradient duality gap (and hence the log-welfare
/// suboptimality).
struct NbConfig {
    double tolerance = 1e-8;
    int max_iters = 20000;
};

/// Grid resolution and size cap for the product-objective searches.
struct ProductConfig {
    Rational step{1, 20};
    int max_agents = 3;
};

/// Exact LP: maximize total welfare subject to per-demand envy-freeness.
/// The output is envy-free by construction and Pareto-optimal among the
/// envy-free allocations. Always feasible: the proportional allocation
/// d_i/n is envy-free (verified at runtime, not assumed).
Allocation solve_welfare_max_ef(const Instance& inst);

/// Two agent types only: the welfare-max envy-free LP point, which is
/// additionally Pareto-optimal among all allocations when there are two
/// types; the Pareto check runs before returning. Throws WrongArity.
Allocation solve_two_type_ef_po(const Instance& inst);

struct TypeExpansion {
    Instance expanded;      // one unit-demand agent per unit of type demand
    Allocation allocation;  // each represented agent gets a 1/d_i share
};

/// Expands a contracted typed instance (integer demands = head counts)
/// into unit-demand agents; per-demand envy-freeness of the input implies
/// unit-demand envy-freeness of the expansion (checked).
/// Throws NonIntegerDemand.
TypeExpansion expand_types(const Instance& contracted, const Allocation& alloc);

struct NbResult {
    Allocation x;
    Rational nash_welfare;  // product of utilities over included agents
    std::vector<int> excluded_agents;  // agents whose best utility is 0
    int iterations = 0;
    double final_gap = 0.0;
    bool converged = false;
};

/// Maximizes sum_i log(u_i . x_i) over the allocation polytope by
/// conditional gradient (with away steps) whose linear subproblem is the
/// exact transportation LP. Iterates stay exactly inside the polytope:
/// step sizes are rational and vertices come from the exact solver.
/// Requires nonnegative utilities. Agents that cannot achieve positive
/// utility are excluded from the objective and flagged.
NbResult solve_nash_bargaining_goods(const Instance& inst, const NbConfig& config = {});

struct ProductResult {
    Allocation x;
    Rational product;  // product of disutilities -u_i . x_i at x
    EnvyReport envy;
};

/// Minimizes the product of disutilities over an exhaustive allocation
/// grid, then polishes exactly along elementary transportation cycles.
/// Non-convex; capped at max_agents. Exists to demonstrate how unfair
/// this objective is: expect the envy report to be bad.
ProductResult solve_min_disutility_product(const Instance& inst,
                                           const ProductConfig& config = {});

/// Maximizes the product of disutilities over the Pareto-optimal subset
/// of the grid (each candidate filtered by the exact Pareto LP).
/// Throws NoPoGridPoint if no grid point is Pareto-optimal even after
/// one automatic refinement.
ProductResult solve_pareto_constrained_nb(const Instance& inst,
                                          const ProductConfig& config = {});

struct GridSearchResult {
    Allocation x;
    PriceVector prices;
    Rational eps_used = 0;
};

/// Enumerates price vectors with one item pinned to price zero and the
/// rest on a delta-grid up to price_cap, in lexicographic (zero item,
/// prices) order; for each cell solves the exact allocation feasibility
/// LP and returns the first candidate that passes check_hz_equilibrium
/// at the configured eps. The returned allocation is canonical: agents
/// in index order take the lowest-indexed items the constraints allow.
/// Throws TooLarge or NotFound (with the closest-to-feasible cell).
GridSearchResult find_hz_equilibrium_grid(const Instance& inst, const GridConfig& config = {});

/// Fast closed-form twin of best_affordable_bundle used by the grid
/// search (value and cheapest cost only). Exposed for equivalence tests
/// against the LP route.
std::pair<Rational, Rational> affordable_bundle_value_fast(const Instance& inst, int agent,
                                                           const PriceVector& prices,
                                                           const Rational& demand);

}  // namespace fairmatch
