#include "fairmatch/core.hpp"

namespace fairmatch {

namespace {

void require_rectangular(const RatMat& m, const char* what) {
    for (const auto& row : m)
        if (row.size() != m.front().size())
            throw DimensionMismatch(std::string(what) + ": ragged matrix");
}

}  // namespace

Instance validate_instance(Instance raw) {
    if (raw.utilities.empty() || raw.utilities.front().empty())
        throw DimensionMismatch("instance: needs at least one agent and one item");
    require_rectangular(raw.utilities, "instance");
    if (raw.demands.empty())
        raw.demands.assign(raw.utilities.size(), Rational(1));
    if (raw.demands.size() != raw.utilities.size())
        throw DimensionMismatch("instance: demands length != number of agents");
    for (std::size_t i = 0; i < raw.demands.size(); ++i)
        if (raw.demands[i] <= 0)
            throw NonPositiveDemand("instance: demand of agent " + std::to_string(i) +
                                    " is " + fraction_string(raw.demands[i]));
    Rational total = vec_sum(raw.demands);
    if (total != raw.n_items())
        throw DemandMismatch("instance: demands sum to " + fraction_string(total) +
                             ", expected " + std::to_string(raw.n_items()));
    return raw;
}

Instance unit_instance(RatMat utilities) {
    Instance inst;
    inst.utilities = std::move(utilities);
    return validate_instance(std::move(inst));
}

Verdict validate_allocation(const Instance& inst, const Allocation& x) {
    if (x.n_agents() != inst.n_agents() || x.n_items() != inst.n_items())
        throw DimensionMismatch("allocation: shape does not match instance");
    require_rectangular(x.x, "allocation");

    for (int i = 0; i < x.n_agents(); ++i)
        for (int j = 0; j < x.n_items(); ++j)
            if (x.x[i][j] < 0) {
                AllocationDefectWitness w;
                w.kind = AllocationDefectWitness::Kind::NegativeEntry;
                w.agent = i;
                w.item = j;
                w.actual = x.x[i][j];
                w.expected = 0;
                return Verdict{false, w};
            }
    for (int i = 0; i < x.n_agents(); ++i) {
        Rational row = vec_sum(x.x[i]);
        if (row != inst.demands[i]) {
            AllocationDefectWitness w;
            w.kind = AllocationDefectWitness::Kind::RowSum;
            w.agent = i;
            w.actual = row;
            w.expected = inst.demands[i];
            return Verdict{false, w};
        }
    }
    for (int j = 0; j < x.n_items(); ++j) {
        Rational col = 0;
        for (int i = 0; i < x.n_agents(); ++i) col += x.x[i][j];
        if (col != 1) {
            AllocationDefectWitness w;
            w.kind = AllocationDefectWitness::Kind::ColumnSum;
            w.item = j;
            w.actual = col;
            w.expected = 1;
            return Verdict{false, w};
        }
    }
    return Verdict{true, std::nullopt};
}

Rational bundle_utility(const Instance& inst, int agent, const RatVec& bundle) {
    if (agent < 0 || agent >= inst.n_agents())
        throw DimensionMismatch("bundle_utility: agent index out of range");
    return dot(inst.utilities[agent], bundle);
}

RatMat envy_value_table(const Instance& inst, const Allocation& x) {
    const int n = inst.n_agents();
    RatMat table(n, RatVec(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            table[i][k] = dot(inst.utilities[i], x.x[k]) / inst.demands[k];
    return table;
}

EnvyReport envy_report(const Instance& inst, const Allocation& x) {
    if (x.n_agents() != inst.n_agents() || x.n_items() != inst.n_items())
        throw DimensionMismatch("envy_report: shape does not match instance");

    EnvyReport report;
    const int n = inst.n_agents();
    const RatMat values = envy_value_table(inst, x);

    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            if (i == k) continue;
            Rational gap = values[i][k] - values[i][i];
            if (!report.worst_pair || gap > report.additive_gap) {
                report.additive_gap = gap;
                report.worst_pair = {i, k};
            }
        }
    }
    report.envy_free = report.additive_gap <= 0;
    if (report.worst_pair) {
        auto [i, k] = *report.worst_pair;
        Rational own_dis = -values[i][i];
        Rational other_dis = -values[i][k];
        if (own_dis > 0 && other_dis > 0)
            report.multiplicative_ratio = own_dis / other_dis;
    }
    return report;
}

Rational utility_range(const Instance& inst, int agent) {
    const RatVec& u = inst.utilities.at(agent);
    return vec_max(u) - vec_min(u);
}

}  // namespace fairmatch
