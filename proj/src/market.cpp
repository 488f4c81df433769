#include "gridsched/market.hpp"

#include <cmath>

#include "gridsched/lp_solver.hpp"

namespace gridsched {

namespace {

int as_binary(double x) { return x >= 0.5 ? 1 : 0; }

}  // namespace

MilpModel fixed_commitment_model(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                                 const ScheduleSolution& s, const FormulationOptions& options) {
    MilpModel model = assemble_model(sc, ctgs, variant, options);
    const VariableIndex& ix = *model.index;
    if (s.u.size() != sc.generators.size() || s.v.size() != sc.generators.size()) {
        throw ShapeError("schedule does not match the case generators");
    }
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        for (int t = 1; t <= sc.horizon(); ++t) {
            const double u = as_binary(s.u[g].at(static_cast<std::size_t>(t - 1)));
            const double v = as_binary(s.v[g].at(static_cast<std::size_t>(t - 1)));
            model.lower[ix.u(g, t)] = model.upper[ix.u(g, t)] = u;
            model.lower[ix.v(g, t)] = model.upper[ix.v(g, t)] = v;
        }
    }
    model.integer.assign(model.num_vars(), false);
    return model;
}

std::vector<std::vector<std::size_t>> balance_rows(const MilpModel& model) {
    if (!model.index) throw MarketError("model has no variable index");
    const VariableIndex& ix = *model.index;
    const auto T = static_cast<std::size_t>(ix.horizon());
    std::vector<std::vector<std::size_t>> pos(ix.num_buses(), std::vector<std::size_t>(T, 0));
    std::size_t found = 0;
    // Base-case balance rows come out bus-major, hour-minor, in one block.
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
        const RowTag& tag = model.rows[i].tag;
        if (tag.equation != Equation::balance || tag.contingency != no_contingency) continue;
        const std::size_t n = found / T;
        const std::size_t h = found % T;
        if (n >= pos.size() || tag.hour != static_cast<int>(h + 1)) {
            throw MarketError("unexpected balance row layout");
        }
        pos[n][h] = i;
        ++found;
    }
    if (found != ix.num_buses() * T) throw MarketError("model lacks base-case balance rows");
    return pos;
}

HourlySeries compute_lmp(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                         const ScheduleSolution& s, const FormulationOptions& options) {
    const MilpModel model = fixed_commitment_model(sc, ctgs, variant, s, options);
    const LpSolution sol = solve_lp(model);
    if (sol.status != LpStatus::optimal) {
        throw MarketError("fixed-commitment LP is " + std::string(lp_status_name(sol.status)));
    }
    const auto rows = balance_rows(model);
    HourlySeries lmp(rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        for (std::size_t i : rows[n]) {
            const double y = sol.row_duals[i];
            lmp[n].push_back(y == 0.0 ? 0.0 : y);
        }
    }
    return lmp;
}

std::string_view commitment_class_name(CommitmentClass c) {
    switch (c) {
    case CommitmentClass::always_on:
        return "always_on";
    case CommitmentClass::always_off:
        return "always_off";
    case CommitmentClass::marginal:
        return "marginal";
    }
    return "?";
}

CommitmentSummary summarize_commitment(const SystemCase& sc, const ScheduleSolution& s) {
    CommitmentSummary out;
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        GeneratorCommitment gc;
        gc.id = sc.generators[g].id;
        for (std::size_t h = 0; h < s.u[g].size(); ++h) {
            gc.committed_hours += as_binary(s.u[g][h]);
            const int start = as_binary(s.v[g][h]);
            (h == 0 ? gc.startups_first_hour : gc.startups_later) += start;
        }
        const int hours = static_cast<int>(s.u[g].size());
        if (gc.committed_hours == hours && hours > 0) {
            gc.status = CommitmentClass::always_on;
            ++out.always_on;
        } else if (gc.committed_hours == 0) {
            gc.status = CommitmentClass::always_off;
            ++out.always_off;
        } else {
            gc.status = CommitmentClass::marginal;
            ++out.marginal;
        }
        out.startups_first_hour += gc.startups_first_hour;
        out.startups_later += gc.startups_later;
        out.total_commitment += gc.committed_hours;
        out.generators.push_back(gc);
    }
    return out;
}

MarketReport market_summary(const SystemCase& sc, const HourlySeries& lmp, const ScheduleSolution& s) {
    const int T = sc.horizon();
    if (lmp.size() != sc.buses.size()) throw ShapeError("lmp rows must match the bus count");
    for (const auto& row : lmp) {
        if (row.size() != static_cast<std::size_t>(T)) throw ShapeError("lmp columns must match the horizon");
    }
    MarketReport report;
    report.lmp = lmp;
    double sum = 0.0;
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        for (int t = 1; t <= T; ++t) {
            const double price = lmp[n][static_cast<std::size_t>(t - 1)];
            sum += price;
            report.load_payment += price * sc.demand(n, t);
        }
    }
    const double cells = static_cast<double>(sc.buses.size()) * T;
    report.average_lmp = cells > 0 ? sum / cells : 0.0;
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        const std::size_t n = sc.bus_position(sc.generators[g].bus);
        for (int t = 1; t <= T; ++t) {
            const auto h = static_cast<std::size_t>(t - 1);
            report.generator_revenue += lmp[n][h] * s.P[g][h];
        }
    }
    report.commitment = summarize_commitment(sc, s);
    return report;
}

}  // namespace gridsched
