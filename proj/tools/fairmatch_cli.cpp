// fairmatch: exact verifiers, transforms and solvers for one-sided
// matching markets with goods, chores and mixed utilities.
//
// Exit codes: 0 success / verdict holds, 1 verdict fails, 2 usage or
// parse error, 3 solver gave up (NotFound / TooLarge / WrongArity).

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairmatch/demo.hpp"
#include "fairmatch/io.hpp"
#include "fairmatch/solvers.hpp"
#include "fairmatch/transforms.hpp"
#include "fairmatch/verify.hpp"

namespace {

using nlohmann::ordered_json;
using namespace fairmatch;

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

std::string join_args(int argc, char** argv) {
    std::string cmd;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

ordered_json rational_json(const Rational& r) { return fraction_string(r); }

ordered_json vector_json(const RatVec& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : v) arr.push_back(fraction_string(e));
    return arr;
}

ordered_json matrix_json(const RatMat& m) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : m) arr.push_back(vector_json(row));
    return arr;
}

ordered_json witness_json(const Witness& w) {
    ordered_json out;
    if (const auto* envy = std::get_if<EnvyPairWitness>(&w)) {
        out["type"] = "envy_pair";
        out["envier"] = envy->envier;
        out["envied"] = envy->envied;
        out["own_value_per_demand"] = rational_json(envy->own_value);
        out["other_value_per_demand"] = rational_json(envy->other_value);
    } else if (const auto* pareto = std::get_if<ParetoImprovementWitness>(&w)) {
        out["type"] = "pareto_improvement";
        out["better_allocation"] = matrix_json(pareto->better.x);
        out["gains"] = vector_json(pareto->gains);
    } else if (const auto* cond = std::get_if<ConditionWitness>(&w)) {
        out["type"] = "violated_condition";
        out["condition"] = cond->condition;
        if (cond->agent >= 0) out["agent"] = cond->agent;
        if (cond->item >= 0) out["item"] = cond->item;
        if (!cond->better_bundle.empty()) out["better_bundle"] = vector_json(cond->better_bundle);
        out["lhs"] = rational_json(cond->lhs);
        out["relation"] = cond->relation;
        out["rhs"] = rational_json(cond->rhs);
        out["note"] = cond->note;
    } else if (const auto* defect = std::get_if<AllocationDefectWitness>(&w)) {
        out["type"] = "allocation_defect";
        switch (defect->kind) {
            case AllocationDefectWitness::Kind::NegativeEntry:
                out["kind"] = "negative_entry";
                break;
            case AllocationDefectWitness::Kind::RowSum:
                out["kind"] = "row_sum";
                break;
            case AllocationDefectWitness::Kind::ColumnSum:
                out["kind"] = "column_sum";
                break;
        }
        if (defect->agent >= 0) out["agent"] = defect->agent;
        if (defect->item >= 0) out["item"] = defect->item;
        out["actual"] = rational_json(defect->actual);
        out["expected"] = rational_json(defect->expected);
    }
    return out;
}

ordered_json verdict_json(const std::string& kind, const Verdict& v) {
    ordered_json out;
    out["kind"] = kind;
    out["holds"] = v.holds;
    out["witness"] = v.witness ? witness_json(*v.witness) : ordered_json(nullptr);
    return out;
}

ordered_json envy_json(const Instance& inst, const Allocation& x) {
    EnvyReport report = envy_report(inst, x);
    ordered_json out;
    out["envy_free"] = report.envy_free;
    out["additive_gap"] = rational_json(report.additive_gap);
    if (report.worst_pair)
        out["worst_pair"] =
            ordered_json::array({report.worst_pair->first, report.worst_pair->second});
    else
        out["worst_pair"] = nullptr;
    out["multiplicative_ratio"] = report.multiplicative_ratio
                                      ? rational_json(*report.multiplicative_ratio)
                                      : ordered_json(nullptr);
    out["per_demand_values"] = matrix_json(envy_value_table(inst, x));
    return out;
}

ordered_json agent_utilities_json(const Instance& inst, const Allocation& x) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < inst.n_agents(); ++i)
        arr.push_back(fraction_string(dot(inst.utilities[i], x.x[i])));
    return arr;
}

struct ReportWriter {
    fs::path out_dir;
    ordered_json report;

    ReportWriter(const std::string& command, const fs::path& dir) : out_dir(dir) {
        report["tool"] = "fairmatch";
        report["version"] = kVersion;
        report["command"] = command;
    }

    void attach_instance(const Instance& inst) {
        report["instance_digest"] = io::instance_digest(inst);
    }

    void write() const { io::write_atomic(out_dir / "report.json", report.dump(2) + "\n"); }
};

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream csv;
    csv << "t,objective,envy_gap\n";
    for (const auto& pt : curve)
        csv << fraction_string(pt.t) << "," << fraction_string(pt.objective) << ","
            << fraction_string(pt.envy_gap) << "\n";
    return csv.str();
}

Rational parse_flag_rational(const std::string& text, const std::string& flag) {
    try {
        return parse_rational(text);
    } catch (const ParseError&) {
        throw InputError(flag + ": expected a rational like 3 or 1/100, got '" + text + "'");
    }
}

// ---- subcommand drivers --------------------------------------------------

int run_validate(const std::string& instance_path, ReportWriter& rw) {
    auto parsed = io::load_instance(instance_path);
    rw.attach_instance(parsed.instance);
    rw.report["result"] = {{"kind", "validate"}, {"holds", true}};
    rw.write();
    std::cout << "instance ok: " << parsed.instance.n_agents() << " agents, "
              << parsed.instance.n_items() << " items\n";
    return 0;
}

int run_check(const std::string& kind, const std::string& instance_path,
              const std::string& allocation_path, const std::string& money_path,
              const Rational& eps, ReportWriter& rw) {
    auto parsed = io::load_instance(instance_path);
    const Instance& inst = parsed.instance;
    Allocation x = io::load_allocation(allocation_path);
    rw.attach_instance(inst);

    Verdict verdict;
    if (kind == "ef") {
        verdict = check_envy_free(inst, x);
    } else if (kind == "po") {
        verdict = check_pareto_optimal(inst, x);
    } else if (kind == "hz") {
        if (money_path.empty()) throw InputError("check hz needs a prices file");
        verdict =
            check_hz_equilibrium(inst, x, io::load_prices(money_path), ToleranceConfig{eps});
    } else if (kind == "earnings") {
        if (money_path.empty()) throw InputError("check earnings needs an earnings file");
        verdict = check_earnings_equilibrium(inst, x, io::load_earnings(money_path),
                                             ToleranceConfig{eps});
    } else {
        throw InputError("check: unknown kind '" + kind + "'");
    }

    rw.report["result"] = verdict_json(kind, verdict);
    rw.report["eps"] = rational_json(eps);
    rw.report["agent_utilities"] = agent_utilities_json(inst, x);
    rw.report["envy"] = envy_json(inst, x);
    rw.write();
    std::cout << kind << ": " << (verdict.holds ? "holds" : "fails") << "\n";
    return verdict.holds ? 0 : 1;
}

int run_solve(const std::string& kind, const std::string& instance_path, const Rational& delta,
              const Rational& cap, const Rational& eps, double nb_tolerance, int max_iters,
              int workers, ReportWriter& rw) {
    auto parsed = io::load_instance(instance_path);
    const Instance& inst = parsed.instance;
    rw.attach_instance(inst);

    Allocation x;
    std::optional<PriceVector> prices;
    if (kind == "welfare-ef") {
        x = solve_welfare_max_ef(inst);
    } else if (kind == "two-type") {
        x = solve_two_type_ef_po(inst);
    } else if (kind == "nb") {
        NbConfig config;
        config.tolerance = nb_tolerance;
        config.max_iters = max_iters;
        NbResult nb = solve_nash_bargaining_goods(inst, config);
        x = nb.x;
        rw.report["nash"] = {{"welfare", fraction_string(nb.nash_welfare)},
                             {"excluded_agents", nb.excluded_agents},
                             {"iterations", nb.iterations},
                             {"final_gap", nb.final_gap},
                             {"converged", nb.converged}};
    } else if (kind == "min-product" || kind == "pcnb") {
        ProductConfig config;
        if (delta > 0) config.step = delta;
        ProductResult res = kind == "min-product" ? solve_min_disutility_product(inst, config)
                                                  : solve_pareto_constrained_nb(inst, config);
        x = res.x;
        rw.report["product"] = rational_json(res.product);
    } else if (kind == "grid-hz") {
        GridConfig config;
        if (delta > 0) config.delta = delta;
        config.price_cap = cap;
        config.eps = eps;
        config.workers = workers;
        GridSearchResult res = find_hz_equilibrium_grid(inst, config);
        x = res.x;
        prices = res.prices;
    } else {
        throw InputError("solve: unknown kind '" + kind + "'");
    }

    io::write_atomic(rw.out_dir / "allocation.json", io::serialize_allocation(x));
    if (prices) io::write_atomic(rw.out_dir / "prices.json", io::serialize_prices(*prices));

    // Every solve reports the verifier verdicts on its own output.
    ordered_json verdicts = ordered_json::array();
    verdicts.push_back(verdict_json("ef", check_envy_free(inst, x)));
    verdicts.push_back(verdict_json("po", check_pareto_optimal(inst, x)));
    if (prices)
        verdicts.push_back(
            verdict_json("hz", check_hz_equilibrium(inst, x, *prices, ToleranceConfig{eps})));
    rw.report["result"] = {{"kind", kind}, {"allocation", matrix_json(x.x)}};
    if (prices) rw.report["result"]["prices"] = vector_json(prices->p);
    rw.report["verdicts"] = verdicts;
    rw.report["agent_utilities"] = agent_utilities_json(inst, x);
    rw.report["envy"] = envy_json(inst, x);
    rw.write();
    std::cout << "solved " << kind << "; outputs in " << rw.out_dir.string() << "\n";
    return 0;
}

int run_transform(const std::string& kind, const std::string& input_path,
                  const std::string& c_list, const std::string& a_text, ReportWriter& rw) {
    if (kind == "shift" || kind == "scale" || kind == "dichotomize") {
        auto parsed = io::load_instance(input_path);
        rw.attach_instance(parsed.instance);
        if (kind == "dichotomize") {
            DichotomousReduction red = reduce_bivalued_to_dichotomous(parsed.instance);
            io::write_atomic(rw.out_dir / "instance.json",
                             io::serialize_instance(red.reduced, parsed.labels));
            ordered_json records = ordered_json::array();
            for (const auto& rec : red.rows)
                records.push_back({{"offset", fraction_string(rec.offset)},
                                   {"span", fraction_string(rec.span)}});
            ordered_json doc;
            doc["affine_records"] = records;
            io::write_atomic(rw.out_dir / "affine_records.json", doc.dump(2) + "\n");
        } else {
            ShiftSpec spec;
            spec.offsets.assign(parsed.instance.n_agents(), Rational(0));
            if (!c_list.empty()) {
                spec.offsets.clear();
                std::stringstream ss(c_list);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.offsets.push_back(parse_rational(tok));
            }
            if (!a_text.empty()) spec.scale = parse_flag_rational(a_text, "--a");
            io::write_atomic(
                rw.out_dir / "instance.json",
                io::serialize_instance(shift_utilities(parsed.instance, spec), parsed.labels));
        }
    } else if (kind == "to-earnings") {
        PriceVector p = io::load_prices(input_path);
        EarningsConversion conv = prices_to_earnings(p);
        io::write_atomic(rw.out_dir / "earnings.json", io::serialize_earnings(conv.earnings));
        rw.report["degenerate"] = conv.degenerate;
    } else if (kind == "to-prices") {
        EarningsVector q = io::load_earnings(input_path);
        PriceConversion conv = earnings_to_prices(q);
        io::write_atomic(rw.out_dir / "prices.json", io::serialize_prices(conv.prices));
        rw.report["degenerate"] = conv.degenerate;
    } else if (kind == "normalize") {
        PriceVector p = io::load_prices(input_path);
        io::write_atomic(rw.out_dir / "prices.json",
                         io::serialize_prices(normalize_prices_zero_min(p)));
    } else {
        throw InputError("transform: unknown kind '" + kind + "'");
    }
    rw.report["result"] = {{"kind", kind}, {"holds", true}};
    rw.write();
    std::cout << "transform " << kind << " written to " << rw.out_dir.string() << "\n";
    return 0;
}

int run_demo(const std::string& which, const Rational& param, const Rational& delta,
             ReportWriter& rw) {
    DemoResult demo;
    if (which == "fig1") {
        demo = run_fig1(param, delta);
    } else if (which == "fig2") {
        demo = run_fig2(delta);
    } else {
        throw InputError("demo: unknown demo '" + which + "'");
    }
    rw.attach_instance(demo.instance);

    rw.report["result"] = {{"kind", which},
                           {"t_star", fraction_string(demo.t_star)},
                           {"objective", fraction_string(demo.solution.product)},
                           {"allocation", matrix_json(demo.solution.x.x)}};
    rw.report["envy"] = envy_json(demo.instance, demo.solution.x);
    if (demo.ef_alternative) {
        rw.report["ef_alternative"] = {
            {"t", fraction_string(*demo.ef_t)},
            {"allocation", matrix_json(demo.ef_alternative->x)},
            {"pareto_optimal", check_pareto_optimal(demo.instance, *demo.ef_alternative).holds}};
    }
    ordered_json curve = ordered_json::array();
    for (const auto& pt : demo.curve)
        curve.push_back({{"t", fraction_string(pt.t)},
                         {"objective", fraction_string(pt.objective)},
                         {"envy_gap", fraction_string(pt.envy_gap)}});
    rw.report["curve"] = curve;
    io::write_atomic(rw.out_dir / "curve.csv", curve_csv(demo.curve));
    rw.write();
    std::cout << "demo " << which << ": optimizer t = " << fraction_string(demo.t_star)
              << "; outputs in " << rw.out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact fair-division toolkit for one-sided matching markets"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory for reports and files");

    std::string eps_text = "0", delta_text, cap_text = "0";
    std::string param_text = "10", a_text, c_list;
    double nb_tolerance = 1e-8;
    int max_iters = 20000, workers = 1;

    auto* validate = app.add_subcommand("validate", "parse and validate an instance file");
    std::string v_instance;
    validate->add_option("instance", v_instance, "instance file")->required();

    auto* check = app.add_subcommand("check", "run a verifier: ef, po, hz, earnings");
    std::string c_kind, c_instance, c_allocation, c_money;
    check->add_option("kind", c_kind, "ef | po | hz | earnings")->required();
    check->add_option("instance", c_instance, "instance file")->required();
    check->add_option("allocation", c_allocation, "allocation file")->required();
    check->add_option("money", c_money, "prices (hz) or earnings file");
    check->add_option("--eps", eps_text, "additive tolerance, rational (default 0)");

    auto* solve =
        app.add_subcommand("solve", "welfare-ef | two-type | nb | min-product | pcnb | grid-hz");
    std::string s_kind, s_instance;
    solve->add_option("kind", s_kind)->required();
    solve->add_option("instance", s_instance, "instance file")->required();
    solve->add_option("--delta", delta_text, "grid step, rational");
    solve->add_option("--cap", cap_text, "price cap for grid-hz (default: item count)");
    solve->add_option("--eps", eps_text, "equilibrium tolerance for grid-hz");
    solve->add_option("--tolerance", nb_tolerance, "duality-gap target for nb");
    solve->add_option("--max-iters", max_iters, "iteration cap for nb");
    solve->add_option("--workers", workers, "parallel grid workers");

    auto* transform = app.add_subcommand(
        "transform", "shift | scale | dichotomize | to-earnings | to-prices | normalize");
    std::string t_kind, t_input;
    transform->add_option("kind", t_kind)->required();
    transform->add_option("input", t_input, "instance or prices/earnings file")->required();
    transform->add_option("--c", c_list, "per-agent shifts, comma-separated rationals");
    transform->add_option("--a", a_text, "positive rational scale");

    auto* demo = app.add_subcommand("demo", "fig1 | fig2: built-in counterexample markets");
    std::string d_which;
    demo->add_option("which", d_which)->required();
    demo->add_option("--param", param_text, "disutility factor c for fig1 (rational > 1)");
    demo->add_option("--delta", delta_text, "curve and grid resolution (default 1/100)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ReportWriter rw(join_args(argc, argv), out_dir);
        Rational eps = parse_flag_rational(eps_text, "--eps");
        Rational delta =
            delta_text.empty() ? Rational(0) : parse_flag_rational(delta_text, "--delta");
        Rational cap = parse_flag_rational(cap_text, "--cap");

        if (*validate) return run_validate(v_instance, rw);
        if (*check) return run_check(c_kind, c_instance, c_allocation, c_money, eps, rw);
        if (*solve)
            return run_solve(s_kind, s_instance, delta, cap, eps, nb_tolerance, max_iters,
                             workers, rw);
        if (*transform) return run_transform(t_kind, t_input, c_list, a_text, rw);
        if (*demo) {
            Rational param = parse_flag_rational(param_text, "--param");
            Rational d = delta == 0 ? Rational(1, 100) : delta;
            return run_demo(d_which, param, d, rw);
        }
        return 2;
    } catch (const SolveError& e) {
        std::cerr << "solver: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal: " << e.what() << "\n";
        return 2;
    }
}
