#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsched/case_model.hpp"
#include "gridsched/formulation.hpp"
#include "gridsched/grid_analysis.hpp"
#include "gridsched/parallel.hpp"

namespace gridsched {

class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using HourlySeries = std::vector<std::vector<double>>;  // [element position][hour - 1]

/// Post-contingency state for one outage.
struct PostContingency {
    HourlySeries P;      // per generator
    HourlySeries flow;   // per line
    HourlySeries angle;  // per bus
    HourlySeries cdr;    // per bus; zero rows for non-participating buses, empty for non-CDR variants

    bool operator==(const PostContingency&) const = default;
};

struct ScheduleSolution {
    ModelVariant variant = ModelVariant::t_scuc;
    HourlySeries u, v, P, r;  // per generator
    HourlySeries flow;        // per line
    HourlySeries angle;       // per bus
    std::vector<PostContingency> contingency;
    double objective = 0.0;
    std::optional<double> achieved_gap;

    bool operator==(const ScheduleSolution&) const = default;
};

/// Zero-filled schedule with the shapes implied by the case and variant.
ScheduleSolution empty_schedule(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant);

/// Unpacks a solver column vector through the model's variable index.
ScheduleSolution to_schedule(const MilpModel& model, std::span<const double> x, ModelVariant variant,
                             double objective);

/// Packs a schedule back into model column order.
std::vector<double> to_columns(const MilpModel& model, const ScheduleSolution& schedule);

struct Violation {
    Equation equation = Equation::custom;  // custom marks the objective check
    std::string subscripts;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // negative: violated by |slack|
};

struct ViolationReport {
    std::vector<Violation> violations;
    double max_violation = 0.0;
    double recomputed_objective = 0.0;
    bool objective_matches = true;
    bool pass = true;

    bool flags(Equation eq) const;
};

struct CheckOptions {
    double tolerance = 1e-4;
    double integrality_tolerance = 1e-6;
    double objective_rel_tolerance = 1e-6;
    FormulationOptions formulation;
    Execution execution = Execution::parallel;
};

/// Re-evaluates every constraint of the variant directly from case data
/// and the schedule. Violations are sorted by equation, then emission
/// order.
ViolationReport check_solution(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant,
                               const ScheduleSolution& schedule, const CheckOptions& options = {});

/// Operating cost plus probability-weighted curtailment penalty.
double schedule_cost(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant,
                     const ScheduleSolution& schedule);

class OracleLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    bool feasible = false;
    double objective = 0.0;
    ScheduleSolution schedule;
    std::size_t patterns = 0;
};

/// Exhaustive commitment search. Every (u, v) assignment admitted by the
/// purely binary rows (startup definition, minimum up and down) is
/// completed by an LP; the cheapest completion is returned. Requires
/// |G| x T <= max_binaries.
OracleResult brute_force_optimum(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant,
                                 std::size_t max_binaries = 12, const FormulationOptions& formulation = {});

}  // namespace gridsched
