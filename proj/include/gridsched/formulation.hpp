#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridsched/case_model.hpp"
#include "gridsched/grid_analysis.hpp"
#include "gridsched/parallel.hpp"

namespace gridsched {

class FormulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelVariant { t_scuc, tg_scuc, t_scuc_cdr, tg_scuc_cdr };

inline constexpr std::array<ModelVariant, 4> all_variants = {
    ModelVariant::t_scuc, ModelVariant::tg_scuc, ModelVariant::t_scuc_cdr, ModelVariant::tg_scuc_cdr};

std::string_view variant_name(ModelVariant variant);
/// Case-insensitive; '-' and '_' are interchangeable ("tg_scuc_cdr").
ModelVariant parse_variant(std::string_view text);
bool uses_cdr(ModelVariant variant);
bool uses_generator_outages(ModelVariant variant);
/// The non-CDR counterpart of a CDR variant (identity otherwise).
ModelVariant without_cdr(ModelVariant variant);

/// K_c for T variants, K_c plus G_c for TG variants.
ContingencySet contingencies_for(const SystemCase& system, ModelVariant variant);

enum class Family { P, u, v, r, flow, angle, P_ctg, flow_ctg, angle_ctg, cdr };

inline constexpr std::size_t no_contingency = static_cast<std::size_t>(-1);

/// Element positions index SystemCase vectors (generators, lines, buses);
/// hours are 1-based.
struct VariableKey {
    Family family = Family::P;
    std::size_t element = 0;
    std::size_t contingency = no_contingency;
    int hour = 1;

    bool operator==(const VariableKey&) const = default;
};

/// Dense variable numbering. Families are laid out in the order of
/// `Family`; inside a family subscripts run lexicographically as
/// (element, hour) or (element, contingency, hour). CDR columns exist
/// only for participating buses and only in CDR variants.
class VariableIndex {
public:
    VariableIndex() = default;
    VariableIndex(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant);

    std::size_t P(std::size_t g, int t) const { return at(Family::P, g, t); }
    std::size_t u(std::size_t g, int t) const { return at(Family::u, g, t); }
    std::size_t v(std::size_t g, int t) const { return at(Family::v, g, t); }
    std::size_t r(std::size_t g, int t) const { return at(Family::r, g, t); }
    std::size_t flow(std::size_t k, int t) const { return at(Family::flow, k, t); }
    std::size_t angle(std::size_t n, int t) const { return at(Family::angle, n, t); }
    std::size_t P_ctg(std::size_t g, std::size_t c, int t) const { return at_ctg(Family::P_ctg, gens_, g, c, t); }
    std::size_t flow_ctg(std::size_t k, std::size_t c, int t) const {
        return at_ctg(Family::flow_ctg, lines_, k, c, t);
    }
    std::size_t angle_ctg(std::size_t n, std::size_t c, int t) const {
        return at_ctg(Family::angle_ctg, buses_, n, c, t);
    }
    /// CDR column of a participating bus; nullopt for other buses or
    /// non-CDR variants.
    std::optional<std::size_t> cdr(std::size_t n, std::size_t c, int t) const;

    VariableKey key(std::size_t index) const;
    std::size_t size() const { return total_; }
    std::size_t family_offset(Family f) const { return offset_[static_cast<std::size_t>(f)]; }
    std::size_t family_size(Family f) const;

    /// MPS column name, e.g. "P_g3_t1", "F_k7_t2_cL5", "CDR_n4_cG1_t3".
    std::string name(std::size_t index) const;

    std::size_t num_generators() const { return gens_; }
    std::size_t num_lines() const { return lines_; }
    std::size_t num_buses() const { return buses_; }
    std::size_t num_contingencies() const { return contingency_labels_.size(); }
    std::size_t num_cdr_buses() const { return cdr_bus_positions_.size(); }
    int horizon() const { return horizon_; }
    bool has_cdr() const { return has_cdr_; }
    /// "L5" or "G2" for contingency position c.
    const std::string& contingency_label(std::size_t c) const { return contingency_labels_[c]; }

    bool operator==(const VariableIndex&) const = default;

private:
    std::size_t at(Family f, std::size_t element, int t) const;
    std::size_t at_ctg(Family f, std::size_t width, std::size_t element, std::size_t c, int t) const;

    std::size_t gens_ = 0, lines_ = 0, buses_ = 0;
    int horizon_ = 0;
    bool has_cdr_ = false;
    std::vector<int> gen_ids_, line_ids_, bus_ids_;
    std::vector<std::string> contingency_labels_;
    std::vector<std::size_t> cdr_slot_;          // per bus position, npos if not participating
    std::vector<std::size_t> cdr_bus_positions_; // slot -> bus position
    std::array<std::size_t, 11> offset_{};
    std::size_t total_ = 0;
};

/// Constraint families. The enumerator values are the tag numbers that
/// appear in row names ("Eq12_n3_t5").
enum class Equation : int {
    custom = 0,
    min_output = 2,
    max_output_with_reserve = 3,
    reserve_limit = 4,
    reserve_coverage = 5,
    ramp_up = 6,
    ramp_down = 7,
    min_up = 8,
    min_down = 9,
    startup = 10,
    integrality = 11,
    balance = 12,
    flow_limit = 13,
    flow_definition = 14,
    reference_angle = 15,
    ctg_ramp_down = 16,
    ctg_ramp_up = 17,
    ctg_min_output = 18,
    ctg_max_output = 19,
    ctg_flow_definition = 20,
    ctg_flow_limit = 21,
    ctg_balance = 22,
    ctg_balance_cdr = 23,
    cdr_cap = 24,
};

inline int equation_number(Equation e) { return static_cast<int>(e); }

enum class RowSense { less_equal, equal, greater_equal };

struct Term {
    std::size_t var = 0;
    double coef = 0.0;

    bool operator==(const Term&) const = default;
};

/// Where a row came from. `element_kind` is 'g', 'k', 'n' or 0 and
/// `element_id` the corresponding generator/line/bus id.
struct RowTag {
    Equation equation = Equation::custom;
    char element_kind = 0;
    int element_id = 0;
    std::size_t contingency = no_contingency;
    int hour = 0;
    std::string name;

    bool operator==(const RowTag&) const = default;
};

struct Row {
    std::vector<Term> terms;
    RowSense sense = RowSense::less_equal;
    double rhs = 0.0;
    RowTag tag;

    bool operator==(const Row&) const = default;
};

/// Minimisation MILP with sparse rows. `index` is present for models
/// produced by assemble_model and absent for hand-built ones.
struct MilpModel {
    std::string name;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> objective;
    std::vector<bool> integer;
    std::vector<Row> rows;
    std::optional<VariableIndex> index;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }
    /// Column name: from the index when present, "x<j>" otherwise.
    std::string var_name(std::size_t j) const;
    /// Appends a variable and returns its column.
    std::size_t add_var(double lo, double hi, double cost, bool is_integer = false);
    /// Appends a row after merging duplicate columns and dropping zeros.
    void add_row(std::vector<Term> terms, RowSense sense, double rhs, RowTag tag = {});

    bool operator==(const MilpModel&) const = default;
};

struct FormulationOptions {
    /// Apply the minimum-up window only for t >= UT (as printed) instead
    /// of the truncated window for every hour.
    bool literal_min_up = false;
    /// Include the system reserve coverage rows (sum of reserves covers
    /// each unit's output plus reserve).
    bool reserve_coverage = true;

    bool operator==(const FormulationOptions&) const = default;
};

/// Builds a row with merged terms (exposed for tests).
Row make_row(std::vector<Term> terms, RowSense sense, double rhs, RowTag tag);

/// Row name for a tag, e.g. "Eq16_g2_cL7_t3".
std::string row_name(const RowTag& tag, const VariableIndex& index);

VariableIndex index_variables(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant);

std::vector<double> build_objective(const SystemCase& system, const ContingencySet& contingencies,
                                    const VariableIndex& index, ModelVariant variant);

std::vector<Row> build_base_constraints(const SystemCase& system, const VariableIndex& index,
                                        const FormulationOptions& options = {});

/// Post-contingency blocks, one per contingency, concatenated in
/// contingency order. The parallel path builds blocks concurrently.
std::vector<Row> build_contingency_constraints(const SystemCase& system, const ContingencySet& contingencies,
                                               const VariableIndex& index, ModelVariant variant,
                                               Execution execution = Execution::parallel);

MilpModel assemble_model(const SystemCase& system, const ContingencySet& contingencies, ModelVariant variant,
                         const FormulationOptions& options = {}, Execution execution = Execution::parallel);

}  // namespace gridsched
