#include "gridsched/solver_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace gridsched {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

char sense_code(RowSense sense) {
    switch (sense) {
    case RowSense::less_equal:
        return 'L';
    case RowSense::greater_equal:
        return 'G';
    case RowSense::equal:
        return 'E';
    }
    return 'E';
}

void line(std::string& out, std::initializer_list<std::string_view> fields) {
    out += "   ";
    for (std::string_view f : fields) {
        out += ' ';
        out += f;
    }
    out += '\n';
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

bool valid_mps_name(std::string_view name) {
    if (name.empty() || name.size() > 255) return false;
    for (char ch : name) {
        const bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') ||
                        ch == '_' || ch == '(' || ch == ')';
        if (!ok) return false;
    }
    return true;
}

NameMap::NameMap(const MilpModel& model) {
    columns_.reserve(model.num_vars());
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
        columns_.push_back(model.var_name(j));
    }
    rows_.reserve(model.num_rows());
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
        const auto& name = model.rows[i].tag.name;
        rows_.push_back(name.empty() ? "R" + std::to_string(i) : name);
    }
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (!valid_mps_name(columns_[j])) throw MpsError("invalid column name '" + columns_[j] + "'");
        if (!column_lookup_.emplace(columns_[j], j).second) {
            throw MpsError("duplicate column name '" + columns_[j] + "'");
        }
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!valid_mps_name(rows_[i])) throw MpsError("invalid row name '" + rows_[i] + "'");
        if (rows_[i] == "OBJ" || !row_lookup_.emplace(rows_[i], i).second) {
            throw MpsError("duplicate row name '" + rows_[i] + "'");
        }
    }
}

std::optional<std::size_t> NameMap::column(std::string_view name) const {
    auto it = column_lookup_.find(std::string(name));
    if (it == column_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> NameMap::row(std::string_view name) const {
    auto it = row_lookup_.find(std::string(name));
    if (it == row_lookup_.end()) return std::nullopt;
    return it->second;
}

std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

MpsExport export_mps(const MilpModel& model) {
    MpsExport result{{}, NameMap(model)};
    const NameMap& names = result.names;
    const std::size_t n = model.num_vars();
    std::string& out = result.text;

    out += "NAME " + (model.name.empty() ? std::string("model") : model.name) + "\n";
    out += "ROWS\n";
    out += " N OBJ\n";
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
        out += ' ';
        out += sense_code(model.rows[i].sense);
        out += ' ';
        out += names.row_name(i);
        out += '\n';
    }

    // Column-major view of the rows, in row order within each column.
    std::vector<std::vector<std::pair<std::size_t, double>>> entries(n);
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
        for (const Term& term : model.rows[i].terms) {
            entries[term.var].emplace_back(i, term.coef);
        }
    }

    out += "COLUMNS\n";
    bool in_marker = false;
    std::size_t marker = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (model.integer[j] != in_marker) {
            const std::string tag = "M" + std::to_string(marker++);
            line(out, {tag, "'MARKER'", in_marker ? "'INTEND'" : "'INTORG'"});
            in_marker = model.integer[j];
        }
        const std::string& col = names.column_name(j);
        const bool has_cost = model.objective[j] != 0.0;
        if (has_cost || entries[j].empty()) {
            line(out, {col, "OBJ", format_number(model.objective[j])});
        }
        for (const auto& [row, coef] : entries[j]) {
            line(out, {col, names.row_name(row), format_number(coef)});
        }
    }
    if (in_marker) {
        line(out, {"M" + std::to_string(marker), "'MARKER'", "'INTEND'"});
    }

    out += "RHS\n";
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
        if (model.rows[i].rhs != 0.0) {
            line(out, {"RHS", names.row_name(i), format_number(model.rows[i].rhs)});
        }
    }

    out += "BOUNDS\n";
    for (std::size_t j = 0; j < n; ++j) {
        const std::string& col = names.column_name(j);
        const double lo = model.lower[j];
        const double hi = model.upper[j];
        if (model.integer[j] && lo == 0.0 && hi == 1.0) {
            line(out, {"BV", "BND", col});
        } else if (lo == hi) {
            line(out, {"FX", "BND", col, format_number(lo)});
        } else if (lo == -inf && hi == inf) {
            line(out, {"FR", "BND", col});
        } else {
            if (lo == -inf) {
                line(out, {"MI", "BND", col});
            } else if (lo != 0.0 || hi < 0.0) {
                line(out, {"LO", "BND", col, format_number(lo)});
            }
            if (hi != inf) {
                line(out, {"UP", "BND", col, format_number(hi)});
            } else if (model.integer[j]) {
                line(out, {"PL", "BND", col});
            }
        }
    }
    out += "ENDATA\n";
    return result;
}

ImportedSolution import_solution(std::string_view text, const NameMap& names, const MilpModel& model) {
    if (names.num_columns() != model.num_vars()) {
        throw MpsError("name map does not belong to this model");
    }
    ImportedSolution result;
    auto& sol = result.solution;
    sol.x.assign(model.num_vars(), 0.0);
    std::vector<bool> seen(model.num_vars(), false);

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view raw = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;

        const auto split = raw.find_first_of(" \t");
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (split == std::string_view::npos) throw MpsError(where + "expected '<name> <value>'");
        const std::string_view name = raw.substr(0, split);
        const std::string_view value_text = trim(raw.substr(split));
        if (value_text.find_first_of(" \t") != std::string_view::npos) {
            throw MpsError(where + "expected '<name> <value>'");
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
        if (ec != std::errc() || ptr != value_text.data() + value_text.size() || !std::isfinite(value)) {
            throw MpsError(where + "bad value '" + std::string(value_text) + "'");
        }
        const auto j = names.column(name);
        if (!j) throw MpsError(where + "unknown variable '" + std::string(name) + "'");
        if (seen[*j]) throw MpsError(where + "variable '" + std::string(name) + "' assigned twice");
        seen[*j] = true;
        sol.x[*j] = value;
    }

    for (bool s : seen) {
        if (!s) ++result.missing;
    }
    sol.status = MilpStatus::feasible;
    sol.objective = 0.0;
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
        sol.objective += model.objective[j] * sol.x[j];
    }
    sol.best_bound = -inf;
    return result;
}

std::string write_solution_file(const MilpModel& model, const NameMap& names, std::span<const double> x) {
    if (x.size() != model.num_vars()) throw MpsError("solution vector does not match the model");
    std::string out;
    for (std::size_t j = 0; j < x.size(); ++j) {
        out += names.column_name(j);
        out += ' ';
        out += format_number(x[j]);
        out += '\n';
    }
    return out;
}

}  // namespace gridsched
