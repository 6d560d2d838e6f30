#pragma once

// Shared generators and independent oracles for the test suites. The
// oracles deliberately avoid the library's LP and solver code paths:
// they enumerate, construct, or evaluate directly.

#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "fairmatch/core.hpp"

namespace fairmatch::testing {

using Rng = std::mt19937_64;

inline long rand_int(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational rand_rational(Rng& rng, long lo, long hi, long max_den = 4) {
    long den = rand_int(rng, 1, max_den);
    return Rational(rand_int(rng, lo * den, hi * den), den);
}

inline Instance random_unit_instance(Rng& rng, int n, long lo = -5, long hi = 5) {
    Instance inst;
    inst.utilities.assign(n, RatVec(n));
    for (auto& row : inst.utilities)
        for (auto& u : row) u = Rational(rand_int(rng, lo, hi));
    return validate_instance(std::move(inst));
}

// Two-type style instance: n agents with integer demands summing to the
// item count.
inline Instance random_typed_instance(Rng& rng, int n_types, int n_items, long lo = -5,
                                      long hi = 5) {
    Instance inst;
    inst.utilities.assign(n_types, RatVec(n_items));
    for (auto& row : inst.utilities)
        for (auto& u : row) u = Rational(rand_int(rng, lo, hi));
    inst.demands.assign(n_types, Rational(1));
    for (int extra = n_items - n_types; extra > 0; --extra)
        inst.demands[rand_int(rng, 0, n_types - 1)] += 1;
    return validate_instance(std::move(inst));
}

// Random valid allocation: start from the proportional point and stir
// with random elementary transportation cycles. Stays exactly feasible
// for arbitrary demands.
inline Allocation random_allocation(Rng& rng, const Instance& inst, int stirs = 12) {
    const int n = inst.n_agents(), m = inst.n_items();
    Allocation x;
    x.x.assign(n, RatVec(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) x.x[i][j] = inst.demands[i] / m;
    if (n < 2 || m < 2) return x;
    for (int s = 0; s < stirs; ++s) {
        int i = static_cast<int>(rand_int(rng, 0, n - 1));
        int i2 = static_cast<int>(rand_int(rng, 0, n - 2));
        if (i2 >= i) ++i2;
        int j = static_cast<int>(rand_int(rng, 0, m - 1));
        int j2 = static_cast<int>(rand_int(rng, 0, m - 2));
        if (j2 >= j) ++j2;
        Rational lo = -std::min(x.x[i][j], x.x[i2][j2]);
        Rational hi = std::min(x.x[i][j2], x.x[i2][j]);
        if (lo == hi) continue;
        long steps = rand_int(rng, 0, 8);
        Rational t = lo + (hi - lo) * steps / 8;
        x.x[i][j] += t;
        x.x[i][j2] -= t;
        x.x[i2][j] -= t;
        x.x[i2][j2] += t;
    }
    return x;
}

inline PriceVector random_prices(Rng& rng, int m, long quarters_cap = 12) {
    PriceVector p;
    for (int j = 0; j < m; ++j) p.p.emplace_back(Rational(rand_int(rng, 0, quarters_cap), 4));
    return p;
}

inline ShiftSpec random_shift(Rng& rng, int n) {
    ShiftSpec spec;
    for (int i = 0; i < n; ++i) spec.offsets.push_back(rand_rational(rng, -6, 6));
    static const long scales_num[] = {1, 1, 2, 3, 5};
    static const long scales_den[] = {1, 2, 1, 2, 3};
    long k = rand_int(rng, 0, 4);
    spec.scale = Rational(scales_num[k], scales_den[k]);
    return spec;
}

// Enumerates every allocation whose entries are multiples of 1/K,
// independent of the library's grid machinery: plain cell-by-cell
// recursion over integer tables with the required margins.
inline void for_each_grid_allocation(const Instance& inst, long K,
                                     const std::function<void(const Allocation&)>& fn) {
    const int n = inst.n_agents(), m = inst.n_items();
    std::vector<long> row_left;
    for (const auto& d : inst.demands) {
        Rational scaled = d * K;
        if (denominator(scaled) != 1) throw std::runtime_error("grid step incompatible with demands");
        row_left.push_back(numerator(scaled).convert_to<long>());
    }
    std::vector<long> col_left(m, K);
    std::vector<std::vector<long>> cells(n, std::vector<long>(m, 0));

    std::function<void(int, int)> rec = [&](int i, int j) {
        if (i == n) {
            Allocation x;
            x.x.assign(n, RatVec(m));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < m; ++b) x.x[a][b] = Rational(cells[a][b], K);
            fn(x);
            return;
        }
        int ni = j + 1 == m ? i + 1 : i;
        int nj = j + 1 == m ? 0 : j + 1;
        long tail = 0;
        for (int jj = j + 1; jj < m; ++jj) tail += col_left[jj];
        long below = 0;
        for (int ii = i + 1; ii < n; ++ii) below += row_left[ii];
        long hi = std::min(row_left[i], col_left[j]);
        long lo = std::max({0L, col_left[j] - below, row_left[i] - tail});
        for (long v = lo; v <= hi; ++v) {
            cells[i][j] = v;
            row_left[i] -= v;
            col_left[j] -= v;
            rec(ni, nj);
            row_left[i] += v;
            col_left[j] += v;
            cells[i][j] = 0;
        }
    };
    rec(0, 0);
}

// Grid oracle: does any 1/K-grid allocation Pareto-dominate x?
inline bool grid_finds_pareto_improvement(const Instance& inst, const Allocation& x, long K) {
    RatVec base(inst.n_agents());
    for (int i = 0; i < inst.n_agents(); ++i) base[i] = dot(inst.utilities[i], x.x[i]);
    bool found = false;
    for_each_grid_allocation(inst, K, [&](const Allocation& y) {
        if (found) return;
        bool weak = true, strict = false;
        for (int i = 0; i < inst.n_agents() && weak; ++i) {
            Rational v = dot(inst.utilities[i], y.x[i]);
            if (v < base[i]) weak = false;
            if (v > base[i]) strict = true;
        }
        if (weak && strict) found = true;
    });
    return found;
}

}  // namespace fairmatch::testing
