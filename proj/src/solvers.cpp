#include "fairmatch/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include "fairmatch/polytope.hpp"
#include "fairmatch/transforms.hpp"

namespace fairmatch {

namespace {

using BigInt = boost::multiprecision::mpz_int;

void ensure_instance(const Instance& inst) { validate_instance(inst); }

std::string vec_string(const RatVec& v) {
    std::string s = "(";
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j) s += ", ";
        s += fraction_string(v[j]);
    }
    return s + ")";
}

Allocation proportional_allocation(const Instance& inst) {
    Allocation x;
    x.x.assign(inst.n_agents(), RatVec(inst.n_items()));
    for (int i = 0; i < inst.n_agents(); ++i)
        for (int j = 0; j < inst.n_items(); ++j)
            x.x[i][j] = inst.demands[i] / inst.n_items();
    return x;
}

// Envy-freeness rows in cleared-denominator form:
// d_k * (u_i . x_i) - d_i * (u_i . x_k) >= 0 for all i != k.
void add_envy_rows(LinearProgram& lp, const Instance& inst) {
    const int n = inst.n_agents(), m = inst.n_items();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (i == k) continue;
            RatVec row(lp.objective.size(), Rational(0));
            for (int j = 0; j < m; ++j) {
                row[cell_index(inst, i, j)] = inst.demands[k] * inst.utilities[i][j];
                row[cell_index(inst, k, j)] = -inst.demands[i] * inst.utilities[i][j];
            }
            lp.add_row(std::move(row), Relation::GreaterEq, Rational(0));
        }
}

}  // namespace

Allocation solve_welfare_max_ef(const Instance& inst) {
    ensure_instance(inst);

    // The proportional allocation d_i/n is always envy-free: verify
    // rather than assume, since it is this LP's feasibility certificate.
    Allocation prop = proportional_allocation(inst);
    if (!validate_allocation(inst, prop).holds || !envy_report(inst, prop).envy_free)
        throw Error("welfare_max_ef: proportional allocation failed its envy check");

    LinearProgram lp = allocation_program(inst);
    lp.sense = Sense::Maximize;
    for (int i = 0; i < inst.n_agents(); ++i)
        for (int j = 0; j < inst.n_items(); ++j)
            lp.objective[cell_index(inst, i, j)] = inst.utilities[i][j];
    add_envy_rows(lp, inst);

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw Error("welfare_max_ef: LP did not reach an optimum");
    return allocation_from_solution(inst, sol.x);
}

Allocation solve_two_type_ef_po(const Instance& inst) {
    if (inst.n_agents() != 2)
        throw WrongArity("two-type solver expects exactly 2 agent types, got " +
                         std::to_string(inst.n_agents()));
    Allocation x = solve_welfare_max_ef(inst);
    // With two types, anything Pareto-better than an envy-free point is
    // still envy-free, so the welfare-max envy-free point is globally
    // Pareto-optimal. Assert it before handing the result out.
    if (!check_pareto_optimal(inst, x).holds)
        throw Error("two-type solver: output unexpectedly failed the Pareto check");
    return x;
}

TypeExpansion expand_types(const Instance& contracted, const Allocation& alloc) {
    ensure_instance(contracted);
    if (!validate_allocation(contracted, alloc).holds)
        throw InputError("expand_types: allocation is not valid for the typed instance");

    std::vector<long> counts;
    for (const auto& d : contracted.demands) {
        if (denominator(d) != 1)
            throw NonIntegerDemand("expand_types: demand " + fraction_string(d) +
                                   " is not an integer head count");
        counts.push_back(static_cast<long>(numerator(d)));
    }

    TypeExpansion out;
    for (int i = 0; i < contracted.n_agents(); ++i) {
        RatVec share(contracted.n_items());
        for (int j = 0; j < contracted.n_items(); ++j)
            share[j] = alloc.x[i][j] / contracted.demands[i];
        for (long c = 0; c < counts[i]; ++c) {
            out.expanded.utilities.push_back(contracted.utilities[i]);
            out.expanded.demands.emplace_back(1);
            out.allocation.x.push_back(share);
        }
    }
    out.expanded = validate_instance(std::move(out.expanded));
    if (!validate_allocation(out.expanded, out.allocation).holds)
        throw Error("expand_types: expanded allocation lost validity");
    // Per-demand envy-freeness of the contraction must survive expansion.
    if (envy_report(contracted, alloc).envy_free &&
        !envy_report(out.expanded, out.allocation).envy_free)
        throw Error("expand_types: envy-freeness did not survive expansion");
    return out;
}

// --- Nash bargaining (goods) ---------------------------------------------

namespace {

// Best utility agent i can get in any valid allocation: fill the highest
// valued items one unit at a time until the demand is spent.
Rational max_achievable_utility(const Instance& inst, int agent) {
    RatVec u = inst.utilities[agent];
    std::sort(u.begin(), u.end(), std::greater<>());
    Rational remaining = inst.demands[agent], value = 0;
    for (const auto& uj : u) {
        if (remaining <= 0) break;
        Rational take = remaining < 1 ? remaining : Rational(1);
        value += uj * take;
        remaining -= take;
    }
    return value;
}

struct Atom {
    RatMat x;
    Rational weight;
};

double to_double(const Rational& r) { return r.template convert_to<double>(); }

// gamma rounded to 24 fractional bits keeps iterates exactly inside the
// polytope while bounding coordinate denominator growth per step.
Rational dyadic_round(double gamma) {
    constexpr double scale = 1 << 24;
    double scaled = std::floor(gamma * scale + 0.5);
    if (scaled < 0) scaled = 0;
    return Rational(BigInt(scaled), BigInt(1) << 24);
}

}  // namespace

NbResult solve_nash_bargaining_goods(const Instance& inst, const NbConfig& config) {
    ensure_instance(inst);
    for (const auto& row : inst.utilities)
        for (const auto& u : row)
            if (u < 0) throw InputError("nash bargaining (goods): negative utility present");
    if (!(config.tolerance > 0)) throw InputError("nash bargaining: tolerance must be positive");
    if (config.max_iters < 1) throw InputError("nash bargaining: max_iters must be positive");

    const int n = inst.n_agents(), m = inst.n_items();
    NbResult result;
    std::vector<bool> included(n, true);
    for (int i = 0; i < n; ++i)
        if (max_achievable_utility(inst, i) == 0) {
            included[i] = false;
            result.excluded_agents.push_back(i);
        }

    RatMat x = proportional_allocation(inst).x;
    std::vector<Atom> atoms;
    atoms.push_back({x, Rational(1)});

    bool any_included = false;
    for (int i = 0; i < n; ++i) any_included |= included[i];

    LinearProgram oracle = allocation_program(inst);
    oracle.sense = Sense::Maximize;

    int iter = 0;
    double gap = 0.0;
    bool converged = !any_included;
    for (; any_included && iter < config.max_iters; ++iter) {
        // Gradient of sum_i log(u_i . x_i) at the current point.
        RatVec row_value(n);
        std::vector<double> grad(n * m, 0.0);
        for (int i = 0; i < n; ++i) {
            if (!included[i]) continue;
            row_value[i] = dot(inst.utilities[i], x[i]);
            double denom = to_double(row_value[i]);
            for (int j = 0; j < m; ++j)
                grad[cell_index(inst, i, j)] = to_double(inst.utilities[i][j]) / denom;
        }

        for (int k = 0; k < n * m; ++k) oracle.objective[k] = Rational(grad[k]);
        LpSolution vertex = solve_lp(oracle);
        if (vertex.status != LpStatus::Optimal)
            throw Error("nash bargaining: transportation oracle failed");

        auto grad_dot = [&](const RatMat& mat) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j)
                    acc += grad[cell_index(inst, i, j)] * to_double(mat[i][j]);
            return acc;
        };

        RatMat fw = allocation_from_solution(inst, vertex.x).x;
        double gx = grad_dot(x);
        gap = grad_dot(fw) - gx;
        if (gap <= config.tolerance) {
            converged = true;
            break;
        }

        // Away atom: the active atom the gradient likes least.
        int away = -1;
        double away_score = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            double s = grad_dot(atoms[k].x);
            if (s < away_score) {
                away_score = s;
                away = static_cast<int>(k);
            }
        }

        bool use_away = away >= 0 && atoms[away].weight < 1 &&
                        (gx - away_score) > gap;
        RatMat dir(n, RatVec(m));
        Rational gamma_max;
        if (use_away) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) dir[i][j] = x[i][j] - atoms[away].x[i][j];
            gamma_max = atoms[away].weight / (1 - atoms[away].weight);
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) dir[i][j] = fw[i][j] - x[i][j];
            gamma_max = 1;
        }

        // Largest step keeping every included agent's utility positive.
        RatVec dir_value(n);
        Rational gamma_hi = gamma_max;
        bool interior_cap = false;
        for (int i = 0; i < n; ++i) {
            if (!included[i]) continue;
            dir_value[i] = dot(inst.utilities[i], dir[i]);
            if (dir_value[i] < 0) {
                Rational bound = -row_value[i] / dir_value[i];
                if (bound <= gamma_hi) {
                    gamma_hi = bound;
                    interior_cap = true;
                }
            }
        }

        // phi'(g) = sum_i dv_i / (v_i + g * dv_i) is decreasing; bisect.
        auto slope = [&](double g) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!included[i]) continue;
                acc += to_double(dir_value[i]) /
                       (to_double(row_value[i]) + g * to_double(dir_value[i]));
            }
            return acc;
        };

        Rational gamma;
        double hi = to_double(gamma_hi) * (interior_cap ? 1.0 - 1e-9 : 1.0);
        if (!interior_cap && slope(hi) >= 0) {
            gamma = gamma_hi;  // full or drop step, taken exactly
        } else {
            double lo = 0.0;
            for (int b = 0; b < 64; ++b) {
                double mid = 0.5 * (lo + hi);
                (slope(mid) > 0 ? lo : hi) = mid;
            }
            gamma = dyadic_round(lo);
            if (gamma >= gamma_hi) gamma = dyadic_round(lo * (1.0 - 1e-6));
            if (gamma >= gamma_hi || gamma < 0) gamma = 0;
        }
        if (gamma == 0) {
            converged = gap <= config.tolerance;
            break;
        }

        if (use_away) {
            for (auto& atom : atoms) atom.weight *= (1 + gamma);
            atoms[away].weight -= gamma;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) x[i][j] += gamma * dir[i][j];
            std::erase_if(atoms, [](const Atom& a) { return a.weight == 0; });
        } else {
            for (auto& atom : atoms) atom.weight *= (1 - gamma);
            std::erase_if(atoms, [](const Atom& a) { return a.weight == 0; });
            auto same = std::find_if(atoms.begin(), atoms.end(),
                                     [&](const Atom& a) { return a.x == fw; });
            if (same != atoms.end())
                same->weight += gamma;
            else
                atoms.push_back({fw, gamma});
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) x[i][j] += gamma * dir[i][j];
        }
    }

    result.x.x = std::move(x);
    result.iterations = iter;
    result.final_gap = gap;
    result.converged = converged;
    result.nash_welfare = 1;
    for (int i = 0; i < n; ++i)
        if (included[i]) result.nash_welfare *= dot(inst.utilities[i], result.x.x[i]);
    return result;
}

// --- Product-objective grid searches --------------------------------------

namespace {

// Integer grid over the allocation polytope with resolution 1/K: tables
// T with row sums K*d_i and column sums K. Cells are visited row-major
// with values descending, so among equal objectives the first candidate
// seen is the canonical one (low agents grab low items).
struct TableGrid {
    const Instance& inst;
    long K;
    std::vector<long> row_target;
    long nodes = 0;
    long node_budget = 60'000'000;

    TableGrid(const Instance& inst, const Rational& step) : inst(inst) {
        // Effective K: smallest multiple of the demand denominators that
        // is at least 1/step, so every margin lands on the grid.
        BigInt base = 1;
        for (const auto& d : inst.demands) base = lcm(base, BigInt(denominator(d)));
        Rational inv = 1 / step;
        BigInt need = BigInt(numerator(inv) / denominator(inv));
        if (need * denominator(inv) < numerator(inv)) ++need;  // ceil
        BigInt k = ((need + base - 1) / base) * base;
        if (k <= 0) k = base;
        K = k.convert_to<long>();
        for (const auto& d : inst.demands) {
            Rational scaled = d * K;
            row_target.push_back(numerator(scaled).convert_to<long>());
        }
    }

    template <typename Leaf>
    void enumerate(Leaf&& leaf) {
        const int n = inst.n_agents(), m = inst.n_items();
        std::vector<long> row_left = row_target;
        std::vector<long> col_left(m, K);
        std::vector<std::vector<long>> cells(n, std::vector<long>(m, 0));
        // Total demand of the rows strictly below each row.
        std::vector<long> below(n + 1, 0);
        for (int i = n - 1; i >= 0; --i) below[i] = below[i + 1] + row_target[i];

        auto rec = [&](auto&& self, int i, int j) -> void {
            if (i == n) {
                leaf(cells);
                return;
            }
            if (++nodes > node_budget)
                throw TooLarge("allocation grid exceeds the enumeration budget; "
                               "use a coarser step");
            int ni = j + 1 == m ? i + 1 : i;
            int nj = j + 1 == m ? 0 : j + 1;
            long tail = 0;  // column capacity left for this row after cell j
            for (int jj = j + 1; jj < m; ++jj) tail += col_left[jj];
            long hi = std::min(row_left[i], col_left[j]);
            long lo = std::max({0L, col_left[j] - below[i + 1], row_left[i] - tail});
            for (long v = hi; v >= lo; --v) {
                cells[i][j] = v;
                row_left[i] -= v;
                col_left[j] -= v;
                self(self, ni, nj);
                row_left[i] += v;
                col_left[j] += v;
                cells[i][j] = 0;
            }
        };
        rec(rec, 0, 0);
    }

    Allocation to_allocation(const std::vector<std::vector<long>>& cells) const {
        Allocation x;
        x.x.assign(inst.n_agents(), RatVec(inst.n_items()));
        for (int i = 0; i < inst.n_agents(); ++i)
            for (int j = 0; j < inst.n_items(); ++j) x.x[i][j] = Rational(cells[i][j], K);
        return x;
    }
};

Rational disutility_product(const Instance& inst, const RatMat& x) {
    Rational prod = 1;
    for (int i = 0; i < inst.n_agents(); ++i) prod *= -dot(inst.utilities[i], x[i]);
    return prod;
}

void require_chores(const Instance& inst, const char* what) {
    for (const auto& row : inst.utilities)
        for (const auto& u : row)
            if (u > 0) throw InputError(std::string(what) + ": expects chores (u <= 0)");
}

// Exact polish along elementary transportation cycles. Each cycle moves
// mass between two rows and two columns, so only two product factors
// change and the restricted objective is a rational quadratic: its
// minimum over the feasible segment sits at an endpoint or the vertex,
// all exactly representable.
void refine_min_product_on_cycles(const Instance& inst, RatMat& x, Rational& product) {
    const int n = inst.n_agents(), m = inst.n_items();
    for (int sweep = 0; sweep < 50; ++sweep) {
        bool improved = false;
        for (int i = 0; i < n && product > 0; ++i)
            for (int i2 = i + 1; i2 < n; ++i2)
                for (int j = 0; j < m; ++j)
                    for (int j2 = j + 1; j2 < m; ++j2) {
                        // x[i][j] += t, x[i][j2] -= t, x[i2][j] -= t, x[i2][j2] += t
                        Rational lo = -std::min(x[i][j], x[i2][j2]);
                        Rational hi = std::min(x[i][j2], x[i2][j]);
                        if (lo == hi) continue;
                        Rational rest = 1;
                        for (int k = 0; k < n; ++k)
                            if (k != i && k != i2) rest *= -dot(inst.utilities[k], x[k]);
                        Rational f0 = -dot(inst.utilities[i], x[i]);
                        Rational g0 = -dot(inst.utilities[i2], x[i2]);
                        Rational p = inst.utilities[i][j2] - inst.utilities[i][j];
                        Rational q = inst.utilities[i2][j] - inst.utilities[i2][j2];

                        // candidates: endpoints, plus the vertex of the
                        // parabola when it opens upward
                        RatVec cand{lo, hi};
                        if (p * q > 0) {
                            Rational v = -(f0 * q + g0 * p) / (2 * p * q);
                            if (v > lo && v < hi) cand.push_back(v);
                        }
                        Rational best_t = 0, best_val = product;
                        for (const auto& t : cand) {
                            Rational val = rest * (f0 + p * t) * (g0 + q * t);
                            if (val < best_val) {
                                best_val = val;
                                best_t = t;
                            }
                        }
                        if (best_t != 0) {
                            x[i][j] += best_t;
                            x[i][j2] -= best_t;
                            x[i2][j] -= best_t;
                            x[i2][j2] += best_t;
                            product = best_val;
                            improved = true;
                        }
                    }
        if (!improved) break;
    }
}

}  // namespace

ProductResult solve_min_disutility_product(const Instance& inst, const ProductConfig& config) {
    ensure_instance(inst);
    require_chores(inst, "min disutility product");
    if (inst.n_agents() > config.max_agents)
        throw TooLarge("min disutility product: " + std::to_string(inst.n_agents()) +
                       " agents exceeds the grid-tractable cap of " +
                       std::to_string(config.max_agents));
    if (config.step <= 0) throw InputError("grid step must be positive");

    TableGrid grid(inst, config.step);
    std::optional<Rational> best;
    std::vector<std::vector<long>> best_cells;
    grid.enumerate([&](const std::vector<std::vector<long>>& cells) {
        Rational prod = disutility_product(inst, grid.to_allocation(cells).x);
        if (!best || prod < *best) {
            best = prod;
            best_cells = cells;
        }
    });
    if (!best) throw Error("min disutility product: empty grid");  // unreachable

    ProductResult out;
    out.x = grid.to_allocation(best_cells);
    out.product = *best;
    refine_min_product_on_cycles(inst, out.x.x, out.product);
    out.envy = envy_report(inst, out.x);
    return out;
}

ProductResult solve_pareto_constrained_nb(const Instance& inst, const ProductConfig& config) {
    ensure_instance(inst);
    require_chores(inst, "pareto-constrained bargaining");
    if (inst.n_agents() > config.max_agents)
        throw TooLarge("pareto-constrained bargaining: " + std::to_string(inst.n_agents()) +
                       " agents exceeds the grid-tractable cap of " +
                       std::to_string(config.max_agents));
    if (config.step <= 0) throw InputError("grid step must be positive");

    Rational step = config.step;
    for (int attempt = 0; attempt < 2; ++attempt, step /= 2) {
        TableGrid grid(inst, step);
        struct Candidate {
            Rational product;
            std::vector<std::vector<long>> cells;
        };
        std::vector<Candidate> candidates;
        grid.enumerate([&](const std::vector<std::vector<long>>& cells) {
            candidates.push_back({disutility_product(inst, grid.to_allocation(cells).x), cells});
        });
        // Largest product first; stable sort keeps the canonical
        // enumeration order among ties.
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Candidate& a, const Candidate& b) {
                             return a.product > b.product;
                         });
        for (const auto& cand : candidates) {
            Allocation x = grid.to_allocation(cand.cells);
            if (!check_pareto_optimal(inst, x).holds) continue;
            ProductResult out;
            out.x = std::move(x);
            out.product = cand.product;
            out.envy = envy_report(inst, out.x);
            return out;
        }
    }
    throw NoPoGridPoint("no Pareto-optimal grid point at step " + fraction_string(config.step) +
                        " or its refinement");
}

// --- Equilibrium grid search ----------------------------------------------

namespace {

// Vertex-enumeration twin of best_affordable_bundle: both polytope
// stages have optima on supports of at most two items.
std::pair<Rational, Rational> fast_two_stage(const Instance& inst, int agent, const RatVec& p,
                                             const Rational& d) {
    const int m = inst.n_items();
    const RatVec& u = inst.utilities[agent];

    std::optional<Rational> value;
    auto consider_value = [&](const Rational& util) {
        if (!value || util > *value) value = util;
    };
    for (int j = 0; j < m; ++j)
        if (p[j] <= 1) consider_value(u[j] * d);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (p[j] == p[k]) continue;
            // budget-tight split: y_j + y_k = d, p_j y_j + p_k y_k = d
            Rational yj = d * (1 - p[k]) / (p[j] - p[k]);
            Rational yk = d - yj;
            if (yj < 0 || yk < 0) continue;
            consider_value(u[j] * yj + u[k] * yk);
        }
    if (!value) throw InfeasibleBudget("no affordable bundle (all prices exceed 1)");

    std::optional<Rational> cost;
    auto consider_cost = [&](const Rational& c) {
        if (!cost || c < *cost) cost = c;
    };
    for (int j = 0; j < m; ++j)
        if (u[j] * d == *value) consider_cost(p[j] * d);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (u[j] == u[k]) continue;
            // utility-tight split: y_j + y_k = d, u_j y_j + u_k y_k = V
            Rational yj = (*value - u[k] * d) / (u[j] - u[k]);
            Rational yk = d - yj;
            if (yj < 0 || yk < 0) continue;
            consider_cost(p[j] * yj + p[k] * yk);
        }
    if (!cost) throw Error("fast bundle stage two found no support");  // unreachable
    return {*value, *cost};
}

// Lexicographic refinement: maximize cells in row-major order, fixing
// each in turn, so agents in index order take the lowest-indexed items
// the constraints allow. Deterministic regardless of worker count.
Allocation lex_refine(const Instance& inst, LinearProgram lp) {
    const int n = inst.n_agents(), m = inst.n_items();
    lp.sense = Sense::Maximize;
    for (int k = 0; k < n * m; ++k) {
        std::fill(lp.objective.begin(), lp.objective.end(), Rational(0));
        lp.objective[k] = 1;
        LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::Optimal)
            throw Error("grid search: refinement LP lost feasibility");
        RatVec pin(lp.objective.size(), Rational(0));
        pin[k] = 1;
        lp.add_row(std::move(pin), Relation::Equal, sol.x[k]);
        if (k + 1 == n * m) return allocation_from_solution(inst, sol.x);
    }
    throw Error("grid search: empty allocation");  // unreachable
}

// Odometer over price cells: one pinned zero item j0, the remaining
// items on the level grid in ascending lexicographic order. Vectors
// whose zero set reaches below j0 are skipped; the earlier j0 already
// produced them.
struct CellCursor {
    int m;
    long levels;
    int j0 = 0;
    std::vector<long> digit;  // size m, digit[j0] pinned to 0
    bool done = false;

    CellCursor(int m, long levels) : m(m), levels(levels), digit(m, 0) { reset(); }

    void reset() {
        for (int j = 0; j < m; ++j) digit[j] = j < j0 ? 1 : 0;
        if (j0 > 0 && levels == 1) advance_j0();
    }

    void advance_j0() {
        if (++j0 >= m)
            done = true;
        else
            reset();
    }

    void advance() {
        for (int j = m - 1; j >= -1; --j) {
            if (j < 0) {
                advance_j0();
                return;
            }
            if (j == j0) continue;
            long floor = j < j0 ? 1 : 0;
            if (++digit[j] < levels) return;
            digit[j] = floor;
        }
    }

    RatVec prices(const Rational& delta) const {
        RatVec p(m);
        for (int j = 0; j < m; ++j) p[j] = delta * digit[j];
        return p;
    }
};

struct CellOutcome {
    std::optional<GridSearchResult> found;
    std::optional<Rational> infeasibility;
    RatVec prices;
};

CellOutcome evaluate_cell(const Instance& inst, const RatVec& p, const Rational& eps,
                          const RatVec& ranges) {
    CellOutcome out;
    out.prices = p;
    const int n = inst.n_agents();

    // Money stays exact even in eps mode; only utility optimality is
    // relaxed. The cheapest-cost cap keeps money conditions exact, so a
    // found pair also converts exactly to an earnings equilibrium
    // (utilities, and hence the relaxed condition, are untouched by the
    // price-to-earnings map, while money slack would inflate).
    LinearProgram lp = allocation_program(inst);
    for (int i = 0; i < n; ++i) {
        auto [value, cheapest] = fast_two_stage(inst, i, p, inst.demands[i]);
        RatVec urow(lp.objective.size(), Rational(0));
        for (int j = 0; j < inst.n_items(); ++j)
            urow[cell_index(inst, i, j)] = inst.utilities[i][j];
        lp.add_row(std::move(urow), Relation::GreaterEq, value - eps * ranges[i]);
        RatVec prow(lp.objective.size(), Rational(0));
        for (int j = 0; j < inst.n_items(); ++j) prow[cell_index(inst, i, j)] = p[j];
        lp.add_row(std::move(prow), Relation::LessEq, cheapest);
    }

    LpSolution feas = check_feasible(lp);
    if (feas.status != LpStatus::Optimal) {
        out.infeasibility = feas.infeasibility;
        return out;
    }

    Allocation x = lex_refine(inst, lp);
    PriceVector prices{p};
    if (check_hz_equilibrium(inst, x, prices, ToleranceConfig{eps}).holds) {
        out.found = GridSearchResult{std::move(x), std::move(prices), eps};
    } else {
        out.infeasibility = Rational(0);  // allocation exists, conditions missed
    }
    return out;
}

}  // namespace

std::pair<Rational, Rational> affordable_bundle_value_fast(const Instance& inst, int agent,
                                                           const PriceVector& prices,
                                                           const Rational& demand) {
    return fast_two_stage(inst, agent, prices.p, demand);
}

GridSearchResult find_hz_equilibrium_grid(const Instance& inst, const GridConfig& config) {
    ensure_instance(inst);
    const int n = inst.n_agents(), m = inst.n_items();
    if (m > config.max_items)
        throw TooLarge("grid search: " + std::to_string(m) + " items exceeds the cap of " +
                       std::to_string(config.max_items) +
                       " (price grids blow up exponentially)");
    if (config.delta <= 0) throw InputError("grid search: delta must be positive");
    Rational cap = config.price_cap > 0 ? config.price_cap : Rational(m);
    if (config.delta > cap) throw InputError("grid search: delta must not exceed the price cap");
    if (config.eps < 0) throw InputError("grid search: eps must be nonnegative");

    Rational ratio = cap / config.delta;
    long levels = BigInt(numerator(ratio) / denominator(ratio)).convert_to<long>() + 1;

    RatVec ranges(n);
    for (int i = 0; i < n; ++i) ranges[i] = utility_range(inst, i);
    const Rational total_demand = vec_sum(inst.demands);

    const int workers = std::max(1, config.workers);
    CellCursor cursor(m, levels);

    std::optional<Rational> best_residual;
    RatVec best_prices;
    long failed_checks = 0;
    RatVec first_failed_prices;

    auto note = [&](const CellOutcome& o) {
        if (!o.infeasibility) return;
        if (*o.infeasibility == 0) {
            if (failed_checks++ == 0) first_failed_prices = o.prices;
            return;
        }
        if (!best_residual || *o.infeasibility < *best_residual) {
            best_residual = o.infeasibility;
            best_prices = o.prices;
        }
    };

    while (!cursor.done) {
        // Collect the next window of admissible cells in lexicographic
        // order; evaluate them (possibly in parallel) and take the first
        // success, so the answer never depends on the worker count.
        std::vector<RatVec> window;
        while (!cursor.done && static_cast<int>(window.size()) < workers * 8) {
            RatVec p = cursor.prices(config.delta);
            cursor.advance();
            if (vec_sum(p) > total_demand) continue;  // nobody could pay for this
            window.push_back(std::move(p));
        }
        if (window.empty()) continue;

        std::vector<CellOutcome> outcomes(window.size());
        if (workers == 1 || window.size() == 1) {
            for (std::size_t k = 0; k < window.size(); ++k) {
                outcomes[k] = evaluate_cell(inst, window[k], config.eps, ranges);
                if (outcomes[k].found) {
                    for (std::size_t t = 0; t <= k; ++t) note(outcomes[t]);
                    return std::move(*outcomes[k].found);
                }
            }
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    for (std::size_t k = w; k < window.size(); k += workers)
                        outcomes[k] = evaluate_cell(inst, window[k], config.eps, ranges);
                });
            for (auto& t : pool) t.join();
            for (auto& o : outcomes) {
                if (o.found) return std::move(*o.found);
                note(o);
            }
            continue;
        }
        for (auto& o : outcomes) note(o);
    }

    std::ostringstream msg;
    msg << "no equilibrium on the price grid (delta " << fraction_string(config.delta)
        << ", cap " << fraction_string(cap) << ", eps " << fraction_string(config.eps) << ")";
    if (best_residual)
        msg << "; closest cell " << vec_string(best_prices) << " at matching residual "
            << fraction_string(*best_residual);
    if (failed_checks > 0)
        msg << "; " << failed_checks << " cells allocated but missed a condition, first at "
            << vec_string(first_failed_prices);
    msg << "; consider raising the price cap or eps";
    throw NotFound(msg.str());
}

}  // namespace fairmatch
