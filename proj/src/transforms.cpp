#include "fairmatch/transforms.hpp"

#include <algorithm>
#include <set>

namespace fairmatch {

Instance shift_utilities(const Instance& inst, const ShiftSpec& spec) {
    if (spec.scale <= 0)
        throw NonPositiveScale("shift: scale must be positive, got " +
                               fraction_string(spec.scale));
    if (static_cast<int>(spec.offsets.size()) != inst.n_agents())
        throw DimensionMismatch("shift: offsets length != number of agents");
    Instance out = inst;
    for (int i = 0; i < inst.n_agents(); ++i)
        for (int j = 0; j < inst.n_items(); ++j)
            out.utilities[i][j] = spec.scale * inst.utilities[i][j] + spec.offsets[i];
    return out;
}

DichotomousReduction reduce_bivalued_to_dichotomous(const Instance& inst) {
    DichotomousReduction red;
    red.reduced = inst;
    red.rows.reserve(inst.n_agents());
    for (int i = 0; i < inst.n_agents(); ++i) {
        std::set<Rational> values(inst.utilities[i].begin(), inst.utilities[i].end());
        if (values.size() > 2)
            throw NotBivalued("row " + std::to_string(i) + " has " +
                              std::to_string(values.size()) + " distinct values");
        Rational lo = *values.begin();
        Rational hi = *values.rbegin();
        Rational span = hi - lo;  // 0 for constant rows, which map to all-zero
        for (int j = 0; j < inst.n_items(); ++j)
            red.reduced.utilities[i][j] =
                span == 0 ? Rational(0) : Rational((inst.utilities[i][j] - lo) / span);
        red.rows.push_back({lo, span});
    }
    return red;
}

Instance restore_from_dichotomous(const DichotomousReduction& red) {
    Instance out = red.reduced;
    for (int i = 0; i < out.n_agents(); ++i)
        for (int j = 0; j < out.n_items(); ++j)
            out.utilities[i][j] =
                red.rows[i].offset + red.rows[i].span * red.reduced.utilities[i][j];
    return out;
}

EarningsConversion prices_to_earnings(const PriceVector& prices) {
    EarningsConversion out;
    Rational pmax = vec_max(prices.p);
    if (pmax <= 1) {
        // Every unit bundle costs at most 1, so every unit bundle must
        // earn exactly 1: the all-ones payment vector.
        out.degenerate = true;
        out.earnings.q.assign(prices.p.size(), Rational(1));
        return out;
    }
    out.earnings.q.reserve(prices.p.size());
    for (const auto& pj : prices.p) out.earnings.q.push_back((pmax - pj) / (pmax - 1));
    return out;
}

PriceConversion earnings_to_prices(const EarningsVector& earnings) {
    PriceConversion out;
    Rational qmax = vec_max(earnings.q);
    if (qmax <= 1) {
        out.degenerate = true;
        out.prices.p.assign(earnings.q.size(), Rational(1));
        return out;
    }
    out.prices.p.reserve(earnings.q.size());
    for (const auto& qj : earnings.q) out.prices.p.push_back((qmax - qj) / (qmax - 1));
    return out;
}

PriceVector normalize_prices_zero_min(const PriceVector& prices) {
    Rational pmin = vec_min(prices.p);
    Rational pmax = vec_max(prices.p);
    PriceVector out;
    if (pmin == pmax) {
        out.p.assign(prices.p.size(), Rational(0));
        return out;
    }
    if (pmin >= 1)
        throw UnnormalizablePrices("minimum price " + fraction_string(pmin) +
                                   " >= 1 with unequal prices");
    out.p.reserve(prices.p.size());
    for (const auto& pj : prices.p) out.p.push_back((pj - pmin) / (1 - pmin));
    return out;
}

}  // namespace fairmatch
