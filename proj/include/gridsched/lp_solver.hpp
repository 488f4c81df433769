#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gridsched/formulation.hpp"

namespace gridsched {

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure, iteration_limit };

std::string_view lp_status_name(LpStatus status);

/// Nonbasic position of a column. Columns 0..n-1 are structural, n..n+m-1
/// are the row slacks.
enum class ColumnState : unsigned char { basic, at_lower, at_upper, at_zero };

/// Simplex basis, reusable as a warm start for a model with the same shape.
struct Basis {
    std::vector<ColumnState> state;
    std::vector<std::size_t> basic;  // basic column per row position

    bool empty() const { return basic.empty(); }
};

struct LpOptions {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-7;
    double pivot_tol = 1e-9;
    std::size_t refactor_interval = 100;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    std::size_t stall_threshold = 50;
    /// 0 selects a limit proportional to the problem size.
    std::size_t iteration_limit = 0;
};

struct LpSolution {
    LpStatus status = LpStatus::numerical_failure;
    std::vector<double> x;
    /// d objective / d rhs for every row.
    std::vector<double> row_duals;
    std::vector<double> reduced_costs;
    double objective = 0.0;
    std::size_t iterations = 0;
    Basis basis;
};

/// Bounded-variable revised simplex over a fixed constraint matrix.
/// Bounds can be replaced between solves, which is how branch-and-bound
/// and fixed-commitment pricing reuse one instance.
class SimplexSolver {
public:
    explicit SimplexSolver(const MilpModel& model, LpOptions options = {});

    /// Solves with the model's own bounds.
    LpSolution solve(const Basis* warm_start = nullptr) const;
    /// Solves with overriding column bounds (sizes must equal num_vars).
    LpSolution solve(std::span<const double> lower, std::span<const double> upper,
                     const Basis* warm_start = nullptr) const;
    /// Solves with replaced row right-hand sides and the model's bounds.
    LpSolution solve_with_rhs(std::span<const double> rhs, const Basis* warm_start = nullptr) const;

    std::size_t num_rows() const { return m_; }
    std::size_t num_vars() const { return n_; }

private:
    LpSolution run(std::span<const double> lower, std::span<const double> upper, std::span<const double> rhs,
                   const Basis* warm_start) const;

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<std::size_t> col_start_;
    std::vector<std::size_t> col_row_;
    std::vector<double> col_val_;
    std::vector<double> cost_;
    std::vector<double> rhs_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<RowSense> sense_;
    LpOptions options_;
};

/// Solves the continuous relaxation of `model` (integrality ignored).
LpSolution solve_lp(const MilpModel& model, const LpOptions& options = {});

}  // namespace gridsched
