#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsched/case_model.hpp"
#include "gridsched/formulation.hpp"
#include "gridsched/milp_solver.hpp"
#include "gridsched/parallel.hpp"
#include "gridsched/verifier.hpp"

namespace gridsched {

class ExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolveConfig {
    double gap_target = 0.01;
    std::optional<double> time_limit;
    FormulationOptions formulation;
    /// Parallelism across sweep points and inside model assembly.
    Execution execution = Execution::parallel;
};

/// Curtailment summed over buses, hours and the contingencies of one kind.
struct CdrTotals {
    double line_mw = 0.0;
    double generator_mw = 0.0;

    double total() const { return line_mw + generator_mw; }
};

CdrTotals cdr_totals(const ContingencySet& contingencies, const ScheduleSolution& schedule);

struct SolveOutcome {
    ModelVariant variant = ModelVariant::t_scuc;
    MilpStatus status = MilpStatus::unknown;
    std::optional<ScheduleSolution> schedule;  // present iff a solution was found
    std::optional<double> gap;
    double seconds = 0.0;
    std::size_t nodes = 0;
    CdrTotals cdr;

    bool feasible() const { return schedule.has_value(); }
    double objective() const { return schedule ? schedule->objective : 0.0; }
};

/// Assembles and solves one variant over its default contingency set.
SolveOutcome solve_variant(const SystemCase& system, ModelVariant variant, const SolveConfig& config = {});

/// All four variants in canonical order.
std::vector<SolveOutcome> run_variant_comparison(const SystemCase& system, const SolveConfig& config = {});

struct SweepRow {
    double parameter = 0.0;  // penalty or load factor
    ModelVariant variant = ModelVariant::t_scuc;
    MilpStatus status = MilpStatus::unknown;
    std::optional<double> objective;  // absent for rows without a solution
    std::optional<double> gap;
    CdrTotals cdr;

    bool feasible() const { return objective.has_value(); }
};

/// Copy of the case with the same curtailment penalty at every bus.
SystemCase with_uniform_penalty(const SystemCase& system, double penalty);

/// One row per penalty, ordered by penalty. Requires a CDR variant.
std::vector<SweepRow> penalty_sweep(const SystemCase& system, std::span<const double> penalties, ModelVariant variant,
                                    const SolveConfig& config = {});

/// One row per (factor, variant), ordered by factor then variant order
/// as given.
std::vector<SweepRow> load_scenario_sweep(const SystemCase& system, std::span<const double> factors,
                                          std::span<const ModelVariant> variants, const SolveConfig& config = {});

std::string comparison_csv(const std::vector<SolveOutcome>& rows);
std::string penalty_sweep_csv(const std::vector<SweepRow>& rows);
std::string load_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace gridsched
