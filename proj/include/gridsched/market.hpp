#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "gridsched/case_model.hpp"
#include "gridsched/formulation.hpp"
#include "gridsched/grid_analysis.hpp"
#include "gridsched/verifier.hpp"

namespace gridsched {

class MarketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The variant model with every u and v pinned to the schedule's values
/// and integrality dropped.
MilpModel fixed_commitment_model(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant,
                                 const ScheduleSolution& schedule, const FormulationOptions& options = {});

/// Row position of the base-case balance row per [bus position][hour - 1].
std::vector<std::vector<std::size_t>> balance_rows(const MilpModel& model);

/// $/MWh per [bus position][hour - 1]: duals of the base-case balance rows
/// of the fixed-commitment LP. Throws MarketError if that LP is not
/// solvable.
HourlySeries compute_lmp(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant,
                         const ScheduleSolution& schedule, const FormulationOptions& options = {});

enum class CommitmentClass { always_on, always_off, marginal };

std::string_view commitment_class_name(CommitmentClass c);

struct GeneratorCommitment {
    int id = 0;
    CommitmentClass status = CommitmentClass::always_off;
    int startups_first_hour = 0;
    int startups_later = 0;
    int committed_hours = 0;
};

struct CommitmentSummary {
    std::vector<GeneratorCommitment> generators;
    std::size_t always_on = 0;
    std::size_t always_off = 0;
    std::size_t marginal = 0;
    int startups_first_hour = 0;
    int startups_later = 0;
    int total_commitment = 0;  // committed generator-hours
};

struct MarketReport {
    HourlySeries lmp;
    double load_payment = 0.0;
    double generator_revenue = 0.0;
    double average_lmp = 0.0;  // unweighted over (bus, hour)
    CommitmentSummary commitment;
};

CommitmentSummary summarize_commitment(const SystemCase& system, const ScheduleSolution& schedule);

MarketReport market_summary(const SystemCase& system, const HourlySeries& lmp, const ScheduleSolution& schedule);

}  // namespace gridsched
