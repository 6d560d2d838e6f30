#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairmatch/errors.hpp"
#include "fairmatch/rational.hpp"

namespace fairmatch {

/// A one-sided matching market: agents with exact rational utilities over
/// items, plus per-agent demands (units of matched mass). Demands must sum
/// to the number of items; the unit-demand square case has all demands 1.
/// Utilities are sign-free: goods positive, chores negative, mixed allowed.
struct Instance {
    RatMat utilities;  // n_agents x n_items
    RatVec demands;    // length n_agents, all > 0, sum == n_items

    int n_agents() const { return static_cast<int>(utilities.size()); }
    int n_items() const {
        return utilities.empty() ? 0 : static_cast<int>(utilities.front().size());
    }
};

/// Fractional perfect matching: row i sums to demands[i], every column
/// sums to 1, entries nonnegative.
struct Allocation {
    RatMat x;  // n_agents x n_items

    int n_agents() const { return static_cast<int>(x.size()); }
    int n_items() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
};

/// Per-item prices; every agent's budget is 1 per unit of demand.
struct PriceVector {
    RatVec p;
};

/// Per-item payments; every agent must earn at least 1 per unit of demand.
struct EarningsVector {
    RatVec q;
};

/// Utility transform u' = scale * u + offsets[i], scale > 0.
struct ShiftSpec {
    RatVec offsets;  // per-agent additive shift
    Rational scale = 1;
};

struct EnvyReport {
    bool envy_free = true;
    // (envier, envied) maximizing the per-demand gap; lexicographic ties.
    std::optional<std::pair<int, int>> worst_pair;
    // max over ordered pairs of u_i.x_i'/d_i' - u_i.x_i/d_i; 0 when no pairs.
    Rational additive_gap = 0;
    // Disutility ratio for the worst pair, present only when both compared
    // disutilities are strictly positive. Reporting only.
    std::optional<Rational> multiplicative_ratio;
};

// --- Verdict witnesses -------------------------------------------------

/// The worst envy pair, with both per-demand utility values.
struct EnvyPairWitness {
    int envier = -1;
    int envied = -1;
    Rational own_value;    // u_i.x_i / d_i
    Rational other_value;  // u_i.x_i' / d_i'
};

/// An allocation that weakly improves everyone and strictly improves
/// agents with gains[i] > 0.
struct ParetoImprovementWitness {
    Allocation better;
    RatVec gains;
};

/// A violated equilibrium condition (1 matched agents, 2 matched items,
/// 3 budget/earnings, 4 optimal bundle), re-checkable from lhs/rhs.
struct ConditionWitness {
    int condition = 0;
    int agent = -1;
    int item = -1;
    RatVec better_bundle;  // condition 4 only
    Rational lhs;
    Rational rhs;
    std::string relation;  // the violated comparison, e.g. "<="
    std::string note;
};

/// A structural defect of an allocation matrix.
struct AllocationDefectWitness {
    enum class Kind { NegativeEntry, RowSum, ColumnSum };
    Kind kind = Kind::RowSum;
    int agent = -1;
    int item = -1;
    Rational actual;
    Rational expected;
};

using Witness = std::variant<EnvyPairWitness, ParetoImprovementWitness,
                             ConditionWitness, AllocationDefectWitness>;

struct Verdict {
    bool holds = false;
    std::optional<Witness> witness;
};

// --- Operations ---------------------------------------------------------

/// Returns the instance iff dimensions are consistent, all demands are
/// positive and the demands sum to the number of items.
/// Throws DimensionMismatch, NonPositiveDemand or DemandMismatch.
Instance validate_instance(Instance raw);

/// Convenience: square unit-demand instance from a utility matrix.
Instance unit_instance(RatMat utilities);

/// Exact structural check of an allocation against an instance.
Verdict validate_allocation(const Instance& inst, const Allocation& x);

/// Exact dot product u_i . y. Throws DimensionMismatch.
Rational bundle_utility(const Instance& inst, int agent, const RatVec& bundle);

/// Per-demand envy accounting over all ordered agent pairs.
EnvyReport envy_report(const Instance& inst, const Allocation& x);

/// Per-demand value matrix: entry (i, i') is u_i . x_i' / d_i'.
RatMat envy_value_table(const Instance& inst, const Allocation& x);

/// max_j u_ij - min_j u_ij; used to normalize utility slack per agent.
Rational utility_range(const Instance& inst, int agent);

}  // namespace fairmatch
