#include "fairmatch/lp.hpp"

#include <utility>

namespace fairmatch {

namespace {

// Dense two-phase simplex over exact rationals. Bland's rule (lowest
// eligible column index enters, lowest basic index leaves on ratio ties)
// guarantees termination; instances here are tiny, so a dense tableau is
// the simplest correct choice.
class SimplexSolver {
public:
    SimplexSolver(const LinearProgram& lp, bool phase_one_only)
        : lp_(lp), phase_one_only_(phase_one_only) {
        validate();
        build();
    }

    LpSolution run() {
        if (art_begin_ < art_end_) {
            run_phase(phase1_costs_, /*allow_artificials=*/false);
            if (phase1_costs_.back() != 0) {
                LpSolution sol;
                sol.status = LpStatus::Infeasible;
                // Residual sum of artificials: distance to feasibility.
                sol.infeasibility = -phase1_costs_.back();
                return sol;
            }
            drive_out_artificials();
        }
        if (!phase_one_only_) {
            bool bounded = run_phase(phase2_costs_, /*allow_artificials=*/false);
            if (!bounded) {
                LpSolution sol;
                sol.status = LpStatus::Unbounded;
                return sol;
            }
        }
        return extract();
    }

private:
    void validate() const {
        const int n = lp_.n_vars();
        if (n == 0) throw DimensionMismatch("lp: no variables");
        for (const auto& row : lp_.rows)
            if (static_cast<int>(row.coeffs.size()) != n)
                throw DimensionMismatch("lp: constraint row length != variable count");
        if (!lp_.lower_bounds.empty() && static_cast<int>(lp_.lower_bounds.size()) != n)
            throw DimensionMismatch("lp: lower_bounds length != variable count");
    }

    // Columns: [structural | slack/surplus | artificial | rhs].
    void build() {
        const int n = lp_.n_vars();
        const int m = static_cast<int>(lp_.rows.size());

        lb_.assign(n, Rational(0));
        if (!lp_.lower_bounds.empty()) lb_ = lp_.lower_bounds;

        // Substitute x = lb + x'; record each row's shifted rhs and
        // whether the whole row gets negated to make the rhs nonnegative.
        struct RowPlan {
            Rational rhs;
            bool negate = false;
            Relation rel;
        };
        std::vector<RowPlan> plan(m);
        int n_slack = 0, n_art = 0;
        for (int r = 0; r < m; ++r) {
            const auto& row = lp_.rows[r];
            Rational rhs = row.rhs - dot(row.coeffs, lb_);
            Relation rel = row.rel;
            bool neg = false;
            if (rhs < 0 || (rhs == 0 && rel == Relation::GreaterEq)) {
                neg = true;
                rhs = -rhs;
                if (rel == Relation::LessEq)
                    rel = Relation::GreaterEq;
                else if (rel == Relation::GreaterEq)
                    rel = Relation::LessEq;
            }
            plan[r] = {rhs, neg, rel};
            if (rel != Relation::Equal) ++n_slack;
            if (rel != Relation::LessEq) ++n_art;
        }

        slack_begin_ = n;
        art_begin_ = n + n_slack;
        art_end_ = art_begin_ + n_art;
        const int ncols = art_end_ + 1;  // + rhs
        rhs_col_ = art_end_;

        tab_.assign(m, RatVec(ncols, Rational(0)));
        basis_.assign(m, -1);
        int slack = slack_begin_, art = art_begin_;
        for (int r = 0; r < m; ++r) {
            const auto& row = lp_.rows[r];
            for (int j = 0; j < n; ++j)
                tab_[r][j] = plan[r].negate ? Rational(-row.coeffs[j]) : row.coeffs[j];
            tab_[r][rhs_col_] = plan[r].rhs;
            switch (plan[r].rel) {
                case Relation::LessEq:
                    tab_[r][slack] = 1;
                    basis_[r] = slack++;
                    break;
                case Relation::GreaterEq:
                    tab_[r][slack++] = -1;
                    tab_[r][art] = 1;
                    basis_[r] = art++;
                    break;
                case Relation::Equal:
                    tab_[r][art] = 1;
                    basis_[r] = art++;
                    break;
            }
        }

        // Phase-one reduced costs: minimize the sum of artificials. With
        // artificials basic, d_j = -sum over artificial rows of a_rj and
        // the rhs cell holds -(current artificial sum).
        phase1_costs_.assign(ncols, Rational(0));
        for (int r = 0; r < m; ++r) {
            if (basis_[r] < art_begin_) continue;
            for (int j = 0; j < ncols; ++j) phase1_costs_[j] -= tab_[r][j];
            phase1_costs_[basis_[r]] += 1;  // own column stays reduced to 0
        }

        // Phase-two costs in minimization form; initial basis has zero
        // objective coefficients, so the raw costs are already reduced.
        phase2_costs_.assign(ncols, Rational(0));
        for (int j = 0; j < n; ++j)
            phase2_costs_[j] =
                lp_.sense == Sense::Maximize ? Rational(-lp_.objective[j]) : lp_.objective[j];
    }

    void pivot(int r, int c) {
        Rational inv = 1 / tab_[r][c];
        for (auto& v : tab_[r]) v *= inv;
        for (int k = 0; k < static_cast<int>(tab_.size()); ++k) {
            if (k == r || tab_[k][c] == 0) continue;
            eliminate(tab_[k], tab_[r], c);
        }
        eliminate(phase1_costs_, tab_[r], c);
        eliminate(phase2_costs_, tab_[r], c);
        basis_[r] = c;
    }

    static void eliminate(RatVec& target, const RatVec& pivot_row, int c) {
        if (target[c] == 0) return;
        Rational f = target[c];
        for (std::size_t j = 0; j < target.size(); ++j) {
            if (pivot_row[j] == 0) continue;
            target[j] -= f * pivot_row[j];
        }
        target[c] = 0;
    }

    // Returns false iff the objective is unbounded below.
    bool run_phase(RatVec& costs, bool allow_artificials) {
        const int limit = allow_artificials ? art_end_ : art_begin_;
        for (;;) {
            int enter = -1;
            for (int j = 0; j < limit; ++j)
                if (costs[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;

            int leave = -1;
            Rational best_ratio;
            for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
                if (tab_[r][enter] <= 0) continue;
                Rational ratio = tab_[r][rhs_col_] / tab_[r][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    // After a zero-residual phase one, artificials still basic sit at
    // value 0; pivot them onto any real column, or leave redundant rows
    // inert (their non-artificial entries are all zero).
    void drive_out_artificials() {
        for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
            if (basis_[r] < art_begin_) continue;
            for (int c = 0; c < art_begin_; ++c) {
                if (tab_[r][c] == 0) continue;
                pivot(r, c);
                break;
            }
        }
    }

    LpSolution extract() const {
        const int n = lp_.n_vars();
        LpSolution sol;
        sol.status = LpStatus::Optimal;
        sol.x = lb_;
        for (int r = 0; r < static_cast<int>(tab_.size()); ++r)
            if (basis_[r] < n) sol.x[basis_[r]] += tab_[r][rhs_col_];
        sol.objective_value = dot(lp_.objective, sol.x);
        return sol;
    }

    const LinearProgram& lp_;
    bool phase_one_only_;
    std::vector<RatVec> tab_;
    std::vector<int> basis_;
    RatVec phase1_costs_, phase2_costs_, lb_;
    int slack_begin_ = 0, art_begin_ = 0, art_end_ = 0, rhs_col_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    return SimplexSolver(lp, /*phase_one_only=*/false).run();
}

LpSolution check_feasible(const LinearProgram& lp) {
    return SimplexSolver(lp, /*phase_one_only=*/true).run();
}

}  // namespace fairmatch
