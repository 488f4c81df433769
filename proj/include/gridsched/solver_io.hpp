#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gridsched/formulation.hpp"
#include "gridsched/milp_solver.hpp"

namespace gridsched {

class MpsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column and row names of an exported model and their inverse lookup.
class NameMap {
public:
    NameMap() = default;
    explicit NameMap(const MilpModel& model);

    const std::string& column_name(std::size_t j) const { return columns_[j]; }
    const std::string& row_name(std::size_t i) const { return rows_[i]; }
    std::optional<std::size_t> column(std::string_view name) const;
    std::optional<std::size_t> row(std::string_view name) const;
    std::size_t num_columns() const { return columns_.size(); }
    std::size_t num_rows() const { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
    std::unordered_map<std::string, std::size_t> column_lookup_;
    std::unordered_map<std::string, std::size_t> row_lookup_;
};

/// True for names of 1..255 characters drawn from [A-Za-z0-9_()].
bool valid_mps_name(std::string_view name);

/// Shortest decimal text that parses back to exactly `value`; -0 prints
/// as 0.
std::string format_number(double value);

struct MpsExport {
    std::string text;
    NameMap names;
};

/// Free-format MPS. Output depends only on the model, byte for byte.
MpsExport export_mps(const MilpModel& model);

struct ImportedSolution {
    MilpSolution solution;
    /// Model columns absent from the file (filled with 0).
    std::size_t missing = 0;
};

/// Reads "<name> <value>" lines; '#' starts a comment. The objective is
/// recomputed from the model and the status is always `feasible`.
ImportedSolution import_solution(std::string_view text, const NameMap& names, const MilpModel& model);

/// The same line format, one entry per column in model order.
std::string write_solution_file(const MilpModel& model, const NameMap& names, std::span<const double> x);

}  // namespace gridsched
