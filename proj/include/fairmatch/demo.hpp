#pragma once

#include <optional>
#include <vector>

#include "fairmatch/core.hpp"
#include "fairmatch/solvers.hpp"

namespace fairmatch {

/// Two agents, two chores, both agree the second chore is worse.
/// Agent 0 has disutilities (1, c), agent 1 has (0, 1); c > 1.
/// Minimizing the disutility product dumps the bad chore entirely on
/// agent 0, who then envies agent 1 by the full factor c.
Instance figure1_instance(const Rational& c);

/// The c = 2 market. Every fractional perfect matching is
/// Pareto-optimal here, yet Pareto-constrained product maximization
/// picks the allocation with maximal envy while t = 1/2 is envy-free.
Instance figure2_instance();

struct CurvePoint {
    Rational t;         // mass of the bad chore given to agent 0
    Rational objective; // disutility product at t
    Rational envy_gap;  // additive per-demand envy gap at t
};

struct DemoResult {
    Instance instance;
    ProductResult solution;
    Rational t_star;                      // optimizer location
    std::vector<CurvePoint> curve;
    std::optional<Allocation> ef_alternative;  // welfare-max EF point (demo 2)
    std::optional<Rational> ef_t;
};

/// Runs the min-disutility-product solver on figure1_instance(c) and
/// samples the objective curve at the given resolution. The optimizer
/// must land on t = 1 exactly (the product vanishes there); anything
/// else is an internal error.
DemoResult run_fig1(const Rational& c, const Rational& delta = Rational(1, 100));

/// Runs Pareto-constrained product maximization on the figure-2 market
/// (optimizer t = 0 exactly, product 1) and the welfare-max envy-free
/// solver (t = 1/2) for contrast.
DemoResult run_fig2(const Rational& delta = Rational(1, 100));

/// The allocation [[1-t, t], [t, 1-t]].
Allocation two_agent_allocation(const Rational& t);

}  // namespace fairmatch
