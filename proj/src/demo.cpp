#include "fairmatch/demo.hpp"

#include "fairmatch/errors.hpp"

namespace fairmatch {

Instance figure1_instance(const Rational& c) {
    if (c <= 1) throw InputError("figure 1 wants a disutility factor c > 1, got " +
                                 fraction_string(c));
    Instance inst;
    inst.utilities = {{Rational(-1), -c}, {Rational(0), Rational(-1)}};
    return validate_instance(std::move(inst));
}

Instance figure2_instance() { return figure1_instance(2); }

Allocation two_agent_allocation(const Rational& t) {
    Allocation x;
    x.x = {{1 - t, t}, {t, 1 - t}};
    return x;
}

namespace {

std::vector<CurvePoint> sample_curve(const Instance& inst, const Rational& delta) {
    std::vector<CurvePoint> curve;
    for (Rational t = 0; t <= 1; t += delta) {
        Allocation x = two_agent_allocation(t);
        Rational objective =
            (-dot(inst.utilities[0], x.x[0])) * (-dot(inst.utilities[1], x.x[1]));
        curve.push_back({t, objective, envy_report(inst, x).additive_gap});
    }
    return curve;
}

}  // namespace

DemoResult run_fig1(const Rational& c, const Rational& delta) {
    if (delta <= 0 || delta > 1) throw InputError("demo: delta must lie in (0, 1]");
    DemoResult out;
    out.instance = figure1_instance(c);

    ProductConfig config;
    config.step = delta;
    out.solution = solve_min_disutility_product(out.instance, config);
    out.t_star = out.solution.x.x[0][1];
    // The dumped-chore outcome: the whole bad chore lands on agent 0,
    // the product vanishes, and agent 0 envies by the full factor c.
    if (out.t_star != 1)
        throw Error("fig1: minimizer landed at t = " + fraction_string(out.t_star) +
                    ", expected exactly 1");
    out.curve = sample_curve(out.instance, delta);
    return out;
}

DemoResult run_fig2(const Rational& delta) {
    if (delta <= 0 || delta > 1) throw InputError("demo: delta must lie in (0, 1]");
    DemoResult out;
    out.instance = figure2_instance();

    ProductConfig config;
    config.step = delta;
    out.solution = solve_pareto_constrained_nb(out.instance, config);
    out.t_star = out.solution.x.x[0][1];
    if (out.t_star != 0)
        throw Error("fig2: maximizer landed at t = " + fraction_string(out.t_star) +
                    ", expected exactly 0");

    // The envy-free alternative this market does admit.
    out.ef_alternative = solve_welfare_max_ef(out.instance);
    out.ef_t = out.ef_alternative->x[0][1];
    out.curve = sample_curve(out.instance, delta);
    return out;
}

}  // namespace fairmatch
