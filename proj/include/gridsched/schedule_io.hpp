#pragma once

#include <string>
#include <string_view>

#include "gridsched/case_model.hpp"
#include "gridsched/grid_analysis.hpp"
#include "gridsched/verifier.hpp"

namespace gridsched {

/// solution.json text. Element id lists are written alongside the arrays
/// so a file can be checked against the case it was produced for.
std::string write_schedule_json(const SystemCase& system, const ContingencySet& contingencies,
                                const ScheduleSolution& schedule);

/// Parses solution.json; throws ShapeError when ids or dimensions disagree
/// with the case and contingency set.
ScheduleSolution read_schedule_json(std::string_view text, const SystemCase& system,
                                    const ContingencySet& contingencies);

}  // namespace gridsched
