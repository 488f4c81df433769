#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "gridsched/formulation.hpp"
#include "gridsched/lp_solver.hpp"

namespace gridsched {

/// `unknown`: limits reached without any incumbent, which is not a proof
/// of infeasibility.
enum class MilpStatus { optimal, gap_limit, feasible, infeasible, unbounded, unknown, numerical_failure };

std::string_view milp_status_name(MilpStatus status);
bool has_solution(MilpStatus status);

struct MilpOptions {
    double gap_target = 0.0;
    /// Seconds; unset means no limit (and fully deterministic output).
    std::optional<double> time_limit;
    std::size_t node_limit = 1'000'000;
    double integrality_tol = 1e-6;
    LpOptions lp;
};

struct MilpSolution {
    MilpStatus status = MilpStatus::unknown;
    std::vector<double> x;
    double objective = 0.0;
    double best_bound = 0.0;
    /// Unset when no bound is known (e.g. imported external solutions).
    std::optional<double> achieved_gap;
    std::size_t node_count = 0;
};

/// Relative gap between an incumbent and a lower bound.
double relative_gap(double incumbent, double bound);

/// Best-first branch-and-bound over the integer columns of `model`.
/// Branches on the most fractional column (lowest index on ties); open
/// nodes are ordered by LP bound, then creation order.
MilpSolution solve_milp(const MilpModel& model, const MilpOptions& options = {});

}  // namespace gridsched
