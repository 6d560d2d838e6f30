#pragma once

#include <vector>

#include "fairmatch/core.hpp"

namespace fairmatch {

/// u'_ij = scale * u_ij + offsets[i]; demands unchanged.
/// Envy, Pareto and both equilibrium verdicts are invariant under this
/// map for any scale > 0. Throws NonPositiveScale.
Instance shift_utilities(const Instance& inst, const ShiftSpec& spec);

/// Per-agent affine map recovering original utilities from a reduced row:
/// u_ij = offset + span * u'_ij. span == 0 marks a constant row.
struct AffineRecord {
    Rational offset;
    Rational span;
};

struct DichotomousReduction {
    Instance reduced;                 // utilities in {0, 1}
    std::vector<AffineRecord> rows;   // one record per agent
};

/// Maps each bivalued utility row {lo_i, hi_i} onto {0, 1} via
/// (u - lo_i) / (hi_i - lo_i); constant rows map to all-zero.
/// Throws NotBivalued if some row has three or more distinct values.
DichotomousReduction reduce_bivalued_to_dichotomous(const Instance& inst);

/// Inverse of the reduction: reconstructs the original utilities.
Instance restore_from_dichotomous(const DichotomousReduction& red);

struct EarningsConversion {
    EarningsVector earnings;
    // True when max price <= 1: every unit bundle is affordable, the
    // formula's denominator vanishes, and the all-ones vector is returned.
    bool degenerate = false;
};

/// q_j = (p_max - p_j) / (p_max - 1). Any unit-sum bundle costing at most
/// 1 under p earns at least 1 under q, and cost order reverses exactly.
EarningsConversion prices_to_earnings(const PriceVector& prices);

struct PriceConversion {
    PriceVector prices;
    bool degenerate = false;  // max earning <= 1; all-ones prices returned
};

/// p_j = (q_max - q_j) / (q_max - 1); mirror of prices_to_earnings.
PriceConversion earnings_to_prices(const EarningsVector& earnings);

/// Rescales prices so the minimum is 0 while preserving equilibrium
/// verdicts: p'_j = (p_j - p_min) / (1 - p_min) when p_min < 1; the
/// all-equal vector maps to all-zero. Throws UnnormalizablePrices when
/// p_min >= 1 and prices differ.
PriceVector normalize_prices_zero_min(const PriceVector& prices);

}  // namespace fairmatch
