#include "gridsched/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "gridsched/solver_io.hpp"

namespace gridsched {

namespace {

SweepRow to_row(double parameter, const SolveOutcome& outcome) {
    SweepRow row;
    row.parameter = parameter;
    row.variant = outcome.variant;
    row.status = outcome.status;
    if (outcome.feasible()) {
        row.objective = outcome.objective();
        row.gap = outcome.gap;
        row.cdr = outcome.cdr;
    }
    return row;
}

// Runs `count` independent jobs, in parallel when requested. Each job
// writes only its own slot, so the result order is fixed.
template <typename Job>
void run_points(std::size_t count, Execution execution, Job&& job) {
    if (execution == Execution::parallel) {
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            job(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) job(i);
    }
}

std::string optional_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace

CdrTotals cdr_totals(const ContingencySet& ctgs, const ScheduleSolution& s) {
    CdrTotals totals;
    for (std::size_t c = 0; c < ctgs.size() && c < s.contingency.size(); ++c) {
        double sum = 0.0;
        for (const auto& row : s.contingency[c].cdr) {
            for (double x : row) sum += x;
        }
        (ctgs[c].kind == ContingencyKind::line ? totals.line_mw : totals.generator_mw) += sum;
    }
    return totals;
}

SolveOutcome solve_variant(const SystemCase& sc, ModelVariant variant, const SolveConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    SolveOutcome outcome;
    outcome.variant = variant;
    const ContingencySet ctgs = contingencies_for(sc, variant);
    const MilpModel model = assemble_model(sc, ctgs, variant, config.formulation, config.execution);

    MilpOptions options;
    options.gap_target = config.gap_target;
    options.time_limit = config.time_limit;
    const MilpSolution sol = solve_milp(model, options);
    outcome.status = sol.status;
    outcome.nodes = sol.node_count;
    if (has_solution(sol.status)) {
        ScheduleSolution schedule = to_schedule(model, sol.x, variant, sol.objective);
        schedule.achieved_gap = sol.achieved_gap;
        outcome.gap = sol.achieved_gap;
        if (uses_cdr(variant)) outcome.cdr = cdr_totals(ctgs, schedule);
        outcome.schedule = std::move(schedule);
    }
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return outcome;
}

std::vector<SolveOutcome> run_variant_comparison(const SystemCase& sc, const SolveConfig& config) {
    std::vector<SolveOutcome> rows(all_variants.size());
    run_points(rows.size(), config.execution,
               [&](std::size_t i) { rows[i] = solve_variant(sc, all_variants[i], config); });
    return rows;
}

SystemCase with_uniform_penalty(const SystemCase& sc, double penalty) {
    if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
        throw ExperimentError("penalty must be a finite non-negative number");
    }
    SystemCase out = sc;
    std::fill(out.cdr.penalty.begin(), out.cdr.penalty.end(), penalty);
    return out;
}

std::vector<SweepRow> penalty_sweep(const SystemCase& sc, std::span<const double> penalties, ModelVariant variant,
                                    const SolveConfig& config) {
    if (!uses_cdr(variant)) {
        throw ExperimentError("penalty sweep needs a CDR variant, got " + std::string(variant_name(variant)));
    }
    std::vector<double> points(penalties.begin(), penalties.end());
    std::stable_sort(points.begin(), points.end());
    std::vector<SweepRow> rows(points.size());
    for (double p : points) with_uniform_penalty(sc, p);  // validate before spawning work
    run_points(points.size(), config.execution, [&](std::size_t i) {
        rows[i] = to_row(points[i], solve_variant(with_uniform_penalty(sc, points[i]), variant, config));
    });
    return rows;
}

std::vector<SweepRow> load_scenario_sweep(const SystemCase& sc, std::span<const double> factors,
                                          std::span<const ModelVariant> variants, const SolveConfig& config) {
    std::vector<double> points(factors.begin(), factors.end());
    std::stable_sort(points.begin(), points.end());
    std::vector<SystemCase> scaled;
    for (double f : points) scaled.push_back(scale_loads(sc, f));
    std::vector<SweepRow> rows(points.size() * variants.size());
    run_points(rows.size(), config.execution, [&](std::size_t i) {
        const std::size_t p = i / variants.size();
        const ModelVariant variant = variants[i % variants.size()];
        rows[i] = to_row(points[p], solve_variant(scaled[p], variant, config));
    });
    return rows;
}

std::string comparison_csv(const std::vector<SolveOutcome>& rows) {
    std::string out = "variant,cost,gap,time_s,cdr_line_mw,cdr_gen_mw\n";
    for (const auto& r : rows) {
        out += std::string(variant_name(r.variant)) + ",";
        out += (r.feasible() ? format_number(r.objective()) : std::string("infeasible")) + ",";
        out += optional_number(r.gap) + ",";
        char time_buf[32];
        std::snprintf(time_buf, sizeof time_buf, "%.3f", r.seconds);
        out += std::string(time_buf) + ",";
        if (uses_cdr(r.variant) && r.feasible()) {
            out += format_number(r.cdr.line_mw) + "," + format_number(r.cdr.generator_mw) + "\n";
        } else {
            out += "NA,NA\n";
        }
    }
    return out;
}

std::string penalty_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "penalty,cost,cdr_line_mw,cdr_gen_mw,gap\n";
    for (const auto& r : rows) {
        out += format_number(r.parameter) + "," + optional_number(r.objective) + ",";
        if (r.feasible()) {
            out += format_number(r.cdr.line_mw) + "," + format_number(r.cdr.generator_mw) + ",";
        } else {
            out += ",,";
        }
        out += optional_number(r.gap) + "\n";
    }
    return out;
}

std::string load_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "factor,variant,feasible,cost,cdr_line_mw,cdr_gen_mw\n";
    for (const auto& r : rows) {
        out += format_number(r.parameter) + "," + std::string(variant_name(r.variant)) + ",";
        out += r.feasible() ? "true," : "false,";
        out += optional_number(r.objective) + ",";
        if (r.feasible() && uses_cdr(r.variant)) {
            out += format_number(r.cdr.line_mw) + "," + format_number(r.cdr.generator_mw) + "\n";
        } else if (r.feasible()) {
            out += "NA,NA\n";
        } else {
            out += ",\n";
        }
    }
    return out;
}

}  // namespace gridsched
