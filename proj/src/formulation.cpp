#include "gridsched/formulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace gridsched {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct BusLines {
    std::vector<std::size_t> inflow;   // lines whose receiving end is the bus
    std::vector<std::size_t> outflow;  // lines whose sending end is the bus
    std::vector<std::size_t> gens;
};

std::vector<BusLines> incidence(const SystemCase& sc) {
    std::vector<BusLines> out(sc.buses.size());
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        out[sc.bus_position(sc.lines[k].to_bus)].inflow.push_back(k);
        out[sc.bus_position(sc.lines[k].from_bus)].outflow.push_back(k);
    }
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        out[sc.bus_position(sc.generators[g].bus)].gens.push_back(g);
    }
    return out;
}

RowTag tag(const VariableIndex& index, Equation eq, char kind, int id, int hour,
           std::size_t contingency = no_contingency) {
    RowTag t{eq, kind, id, contingency, hour, {}};
    t.name = row_name(t, index);
    return t;
}

}  // namespace

std::string_view variant_name(ModelVariant variant) {
    switch (variant) {
    case ModelVariant::t_scuc:
        return "T-SCUC";
    case ModelVariant::tg_scuc:
        return "TG-SCUC";
    case ModelVariant::t_scuc_cdr:
        return "T-SCUC-CDR";
    case ModelVariant::tg_scuc_cdr:
        return "TG-SCUC-CDR";
    }
    return "?";
}

ModelVariant parse_variant(std::string_view text) {
    std::string norm;
    for (char ch : text) {
        norm.push_back(ch == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    for (ModelVariant v : all_variants) {
        if (norm == variant_name(v)) {
            return v;
        }
    }
    throw FormulationError("unknown model variant '" + std::string(text) + "'");
}

bool uses_cdr(ModelVariant v) {
    return v == ModelVariant::t_scuc_cdr || v == ModelVariant::tg_scuc_cdr;
}

bool uses_generator_outages(ModelVariant v) {
    return v == ModelVariant::tg_scuc || v == ModelVariant::tg_scuc_cdr;
}

ModelVariant without_cdr(ModelVariant v) {
    switch (v) {
    case ModelVariant::t_scuc_cdr:
        return ModelVariant::t_scuc;
    case ModelVariant::tg_scuc_cdr:
        return ModelVariant::tg_scuc;
    default:
        return v;
    }
}

ContingencySet contingencies_for(const SystemCase& sc, ModelVariant variant) {
    return build_contingency_set(sc, true, uses_generator_outages(variant));
}

VariableIndex::VariableIndex(const SystemCase& sc, const ContingencySet& contingencies, ModelVariant variant)
    : gens_(sc.generators.size()),
      lines_(sc.lines.size()),
      buses_(sc.buses.size()),
      horizon_(sc.horizon()),
      has_cdr_(uses_cdr(variant)) {
    for (const auto& g : sc.generators) gen_ids_.push_back(g.id);
    for (const auto& l : sc.lines) line_ids_.push_back(l.id);
    for (const auto& b : sc.buses) bus_ids_.push_back(b.id);
    for (const auto& c : contingencies) {
        if (c.kind == ContingencyKind::generator && !uses_generator_outages(variant)) {
            throw FormulationError(std::string(variant_name(variant)) +
                                   " models line outages only, but the set contains generator " +
                                   std::to_string(c.element_id));
        }
        if (c.kind == ContingencyKind::line) {
            sc.line_position(c.element_id);
            contingency_labels_.push_back("L" + std::to_string(c.element_id));
        } else {
            sc.generator_position(c.element_id);
            contingency_labels_.push_back("G" + std::to_string(c.element_id));
        }
    }
    cdr_slot_.assign(buses_, npos);
    if (has_cdr_) {
        for (std::size_t n = 0; n < buses_; ++n) {
            if (sc.participates(n)) {
                cdr_slot_[n] = cdr_bus_positions_.size();
                cdr_bus_positions_.push_back(n);
            }
        }
    }

    const std::size_t T = static_cast<std::size_t>(horizon_);
    const std::size_t C = contingency_labels_.size();
    const std::array<std::size_t, 10> sizes = {
        gens_ * T, gens_ * T, gens_ * T, gens_ * T, lines_ * T, buses_ * T,
        gens_ * C * T, lines_ * C * T, buses_ * C * T, cdr_bus_positions_.size() * C * T};
    std::size_t running = 0;
    for (std::size_t f = 0; f < sizes.size(); ++f) {
        offset_[f] = running;
        running += sizes[f];
    }
    offset_[10] = running;
    total_ = running;
}

std::size_t VariableIndex::family_size(Family f) const {
    auto i = static_cast<std::size_t>(f);
    return offset_[i + 1] - offset_[i];
}

std::size_t VariableIndex::at(Family f, std::size_t element, int t) const {
    return family_offset(f) + element * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(t - 1);
}

std::size_t VariableIndex::at_ctg(Family f, std::size_t, std::size_t element, std::size_t c, int t) const {
    const std::size_t C = contingency_labels_.size();
    return family_offset(f) + (element * C + c) * static_cast<std::size_t>(horizon_) +
           static_cast<std::size_t>(t - 1);
}

std::optional<std::size_t> VariableIndex::cdr(std::size_t n, std::size_t c, int t) const {
    if (!has_cdr_ || cdr_slot_[n] == npos) {
        return std::nullopt;
    }
    return at_ctg(Family::cdr, 0, cdr_slot_[n], c, t);
}

VariableKey VariableIndex::key(std::size_t index) const {
    if (index >= total_) {
        throw FormulationError("variable index " + std::to_string(index) + " out of range");
    }
    std::size_t f = 0;
    while (index >= offset_[f + 1]) {
        ++f;
    }
    const auto family = static_cast<Family>(f);
    const std::size_t local = index - offset_[f];
    const auto T = static_cast<std::size_t>(horizon_);
    VariableKey key;
    key.family = family;
    key.hour = static_cast<int>(local % T) + 1;
    if (f < static_cast<std::size_t>(Family::P_ctg)) {
        key.element = local / T;
    } else {
        const std::size_t C = contingency_labels_.size();
        const std::size_t outer = local / T;
        key.contingency = outer % C;
        key.element = outer / C;
        if (family == Family::cdr) {
            key.element = cdr_bus_positions_[key.element];
        }
    }
    return key;
}

std::string VariableIndex::name(std::size_t index) const {
    const VariableKey k = key(index);
    const std::string hour = "_t" + std::to_string(k.hour);
    auto gen = [&] { return "_g" + std::to_string(gen_ids_[k.element]); };
    auto line = [&] { return "_k" + std::to_string(line_ids_[k.element]); };
    auto bus = [&] { return "_n" + std::to_string(bus_ids_[k.element]); };
    auto ctg = [&] { return "_c" + contingency_labels_[k.contingency]; };
    switch (k.family) {
    case Family::P:
        return "P" + gen() + hour;
    case Family::u:
        return "u" + gen() + hour;
    case Family::v:
        return "v" + gen() + hour;
    case Family::r:
        return "r" + gen() + hour;
    case Family::flow:
        return "F" + line() + hour;
    case Family::angle:
        return "th" + bus() + hour;
    case Family::P_ctg:
        return "P" + gen() + hour + ctg();
    case Family::flow_ctg:
        return "F" + line() + hour + ctg();
    case Family::angle_ctg:
        return "th" + bus() + hour + ctg();
    case Family::cdr:
        return "CDR" + bus() + ctg() + hour;
    }
    return {};
}

std::string MilpModel::var_name(std::size_t j) const {
    if (index) {
        return index->name(j);
    }
    return "x" + std::to_string(j);
}

std::size_t MilpModel::add_var(double lo, double hi, double cost, bool is_integer) {
    lower.push_back(lo);
    upper.push_back(hi);
    objective.push_back(cost);
    integer.push_back(is_integer);
    return objective.size() - 1;
}

void MilpModel::add_row(std::vector<Term> terms, RowSense sense, double rhs, RowTag tag) {
    if (tag.name.empty()) {
        tag.name = "R" + std::to_string(rows.size());
    }
    rows.push_back(make_row(std::move(terms), sense, rhs, std::move(tag)));
}

Row make_row(std::vector<Term> terms, RowSense sense, double rhs, RowTag tag) {
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
        if (!merged.empty() && merged.back().var == t.var) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    return Row{std::move(merged), sense, rhs, std::move(tag)};
}

std::string row_name(const RowTag& tag, const VariableIndex& index) {
    std::string out = "Eq" + std::to_string(equation_number(tag.equation));
    if (tag.element_kind != 0) {
        out += '_';
        out += tag.element_kind;
        out += std::to_string(tag.element_id);
    }
    if (tag.contingency != no_contingency) {
        out += "_c" + index.contingency_label(tag.contingency);
    }
    out += "_t" + std::to_string(tag.hour);
    return out;
}

VariableIndex index_variables(const SystemCase& sc, const ContingencySet& contingencies, ModelVariant variant) {
    return VariableIndex(sc, contingencies, variant);
}

std::vector<double> build_objective(const SystemCase& sc, const ContingencySet& contingencies,
                                    const VariableIndex& index, ModelVariant variant) {
    if (index.num_contingencies() != contingencies.size() || index.has_cdr() != uses_cdr(variant)) {
        throw FormulationError("variable index was built for a different variant or contingency set");
    }
    std::vector<double> c(index.size(), 0.0);
    const int T = sc.horizon();
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            c[index.P(g, t)] = gen.energy_cost;
            c[index.u(g, t)] = gen.no_load_cost;
            c[index.v(g, t)] = gen.startup_cost;
        }
    }
    if (uses_cdr(variant)) {
        for (std::size_t ci = 0; ci < contingencies.size(); ++ci) {
            const double pi = contingencies[ci].probability;
            for (std::size_t n = 0; n < sc.buses.size(); ++n) {
                for (int t = 1; t <= T; ++t) {
                    if (auto j = index.cdr(n, ci, t)) {
                        c[*j] = pi * sc.cdr.penalty[n];
                    }
                }
            }
        }
    }
    return c;
}

std::vector<Row> build_base_constraints(const SystemCase& sc, const VariableIndex& ix,
                                        const FormulationOptions& options) {
    std::vector<Row> rows;
    const int T = sc.horizon();
    const std::size_t G = sc.generators.size();
    using RS = RowSense;

    auto emit = [&](std::vector<Term> terms, RS sense, double rhs, RowTag t) {
        rows.push_back(make_row(std::move(terms), sense, rhs, std::move(t)));
    };
    auto gen_tag = [&](Equation eq, std::size_t g, int t) {
        return tag(ix, eq, 'g', sc.generators[g].id, t);
    };

    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.P(g, t), 1.0}, {ix.u(g, t), -gen.p_min}}, RS::greater_equal, 0.0,
                 gen_tag(Equation::min_output, g, t));
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.P(g, t), 1.0}, {ix.r(g, t), 1.0}, {ix.u(g, t), -gen.p_max}}, RS::less_equal, 0.0,
                 gen_tag(Equation::max_output_with_reserve, g, t));
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.r(g, t), 1.0}, {ix.u(g, t), -gen.ramp_10min}}, RS::less_equal, 0.0,
                 gen_tag(Equation::reserve_limit, g, t));
        }
    }
    if (options.reserve_coverage) {
        for (std::size_t g = 0; g < G; ++g) {
            for (int t = 1; t <= T; ++t) {
                std::vector<Term> terms;
                for (std::size_t q = 0; q < G; ++q) {
                    terms.push_back({ix.r(q, t), 1.0});
                }
                terms.push_back({ix.P(g, t), -1.0});
                terms.push_back({ix.r(g, t), -1.0});
                emit(std::move(terms), RS::greater_equal, 0.0, gen_tag(Equation::reserve_coverage, g, t));
            }
        }
    }
    // Hour 0 is the fixed initial state: u = initial_on, P = 0.
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sc.generators[g];
        const double u0 = gen.initial_on ? 1.0 : 0.0;
        for (int t = 1; t <= T; ++t) {
            std::vector<Term> terms{{ix.P(g, t), 1.0}, {ix.v(g, t), -gen.ramp_startup}};
            double rhs = 0.0;
            if (t > 1) {
                terms.push_back({ix.P(g, t - 1), -1.0});
                terms.push_back({ix.u(g, t - 1), -gen.ramp_hourly});
            } else {
                rhs = gen.ramp_hourly * u0;
            }
            emit(std::move(terms), RS::less_equal, rhs, gen_tag(Equation::ramp_up, g, t));
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sc.generators[g];
        const double u0 = gen.initial_on ? 1.0 : 0.0;
        for (int t = 1; t <= T; ++t) {
            // P(t-1) - P(t) <= R_hr u(t) + R_sd (v(t) - u(t) + u(t-1))
            std::vector<Term> terms{{ix.P(g, t), -1.0},
                                    {ix.u(g, t), -gen.ramp_hourly},
                                    {ix.v(g, t), -gen.ramp_shutdown},
                                    {ix.u(g, t), gen.ramp_shutdown}};
            double rhs = 0.0;
            if (t > 1) {
                terms.push_back({ix.P(g, t - 1), 1.0});
                terms.push_back({ix.u(g, t - 1), -gen.ramp_shutdown});
            } else {
                rhs = gen.ramp_shutdown * u0;
            }
            emit(std::move(terms), RS::less_equal, rhs, gen_tag(Equation::ramp_down, g, t));
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const int up = sc.generators[g].min_up;
        for (int t = 1; t <= T; ++t) {
            if (options.literal_min_up && t < up) {
                continue;
            }
            std::vector<Term> terms;
            for (int q = std::max(1, t - up + 1); q <= t; ++q) {
                terms.push_back({ix.v(g, q), 1.0});
            }
            terms.push_back({ix.u(g, t), -1.0});
            emit(std::move(terms), RS::less_equal, 0.0, gen_tag(Equation::min_up, g, t));
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const int down = sc.generators[g].min_down;
        for (int t = 1; t <= T - down; ++t) {
            std::vector<Term> terms;
            for (int q = t + 1; q <= t + down; ++q) {
                terms.push_back({ix.v(g, q), 1.0});
            }
            terms.push_back({ix.u(g, t), 1.0});
            emit(std::move(terms), RS::less_equal, 1.0, gen_tag(Equation::min_down, g, t));
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const double u0 = sc.generators[g].initial_on ? 1.0 : 0.0;
        for (int t = 1; t <= T; ++t) {
            std::vector<Term> terms{{ix.v(g, t), 1.0}, {ix.u(g, t), -1.0}};
            double rhs = 0.0;
            if (t > 1) {
                terms.push_back({ix.u(g, t - 1), 1.0});
            } else {
                rhs = -u0;
            }
            emit(std::move(terms), RS::greater_equal, rhs, gen_tag(Equation::startup, g, t));
        }
    }

    const auto inc = incidence(sc);
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        for (int t = 1; t <= T; ++t) {
            std::vector<Term> terms;
            for (std::size_t g : inc[n].gens) terms.push_back({ix.P(g, t), 1.0});
            for (std::size_t k : inc[n].inflow) terms.push_back({ix.flow(k, t), 1.0});
            for (std::size_t k : inc[n].outflow) terms.push_back({ix.flow(k, t), -1.0});
            emit(std::move(terms), RS::equal, sc.demand(n, t), tag(ix, Equation::balance, 'n', sc.buses[n].id, t));
        }
    }
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        const auto& line = sc.lines[k];
        const std::size_t from = sc.bus_position(line.from_bus);
        const std::size_t to = sc.bus_position(line.to_bus);
        for (int t = 1; t <= T; ++t) {
            emit({{ix.flow(k, t), 1.0}, {ix.angle(from, t), -line.susceptance}, {ix.angle(to, t), line.susceptance}},
                 RS::equal, 0.0, tag(ix, Equation::flow_definition, 'k', line.id, t));
        }
    }
    const std::size_t ref = sc.bus_position(sc.reference_bus);
    for (int t = 1; t <= T; ++t) {
        emit({{ix.angle(ref, t), 1.0}}, RS::equal, 0.0, tag(ix, Equation::reference_angle, 0, 0, t));
    }
    return rows;
}

namespace {

std::vector<Row> contingency_block(const SystemCase& sc, const Contingency& ctg, std::size_t c,
                                   const VariableIndex& ix, bool cdr, const std::vector<BusLines>& inc) {
    std::vector<Row> rows;
    const int T = sc.horizon();
    const std::size_t out_gen =
        ctg.kind == ContingencyKind::generator ? sc.generator_position(ctg.element_id) : npos;
    const std::size_t out_line = ctg.kind == ContingencyKind::line ? sc.line_position(ctg.element_id) : npos;
    using RS = RowSense;
    auto emit = [&](std::vector<Term> terms, RS sense, double rhs, Equation eq, char kind, int id, int t) {
        rows.push_back(make_row(std::move(terms), sense, rhs, tag(ix, eq, kind, id, t, c)));
    };

    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        if (g == out_gen) continue;
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.P(g, t), 1.0}, {ix.P_ctg(g, c, t), -1.0}, {ix.u(g, t), -gen.ramp_10min}}, RS::less_equal, 0.0,
                 Equation::ctg_ramp_down, 'g', gen.id, t);
        }
    }
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        if (g == out_gen) continue;
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.P_ctg(g, c, t), 1.0}, {ix.P(g, t), -1.0}, {ix.u(g, t), -gen.ramp_10min}}, RS::less_equal, 0.0,
                 Equation::ctg_ramp_up, 'g', gen.id, t);
        }
    }
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        if (g == out_gen) continue;
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.P_ctg(g, c, t), 1.0}, {ix.u(g, t), -gen.p_min}}, RS::greater_equal, 0.0,
                 Equation::ctg_min_output, 'g', gen.id, t);
        }
    }
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        if (g == out_gen) continue;
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            emit({{ix.P_ctg(g, c, t), 1.0}, {ix.u(g, t), -gen.p_max}}, RS::less_equal, 0.0,
                 Equation::ctg_max_output, 'g', gen.id, t);
        }
    }
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        if (k == out_line) continue;
        const auto& line = sc.lines[k];
        const std::size_t from = sc.bus_position(line.from_bus);
        const std::size_t to = sc.bus_position(line.to_bus);
        for (int t = 1; t <= T; ++t) {
            emit({{ix.flow_ctg(k, c, t), 1.0},
                  {ix.angle_ctg(from, c, t), -line.susceptance},
                  {ix.angle_ctg(to, c, t), line.susceptance}},
                 RS::equal, 0.0, Equation::ctg_flow_definition, 'k', line.id, t);
        }
    }
    const Equation balance = cdr ? Equation::ctg_balance_cdr : Equation::ctg_balance;
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        for (int t = 1; t <= T; ++t) {
            std::vector<Term> terms;
            for (std::size_t g : inc[n].gens) {
                if (g != out_gen) terms.push_back({ix.P_ctg(g, c, t), 1.0});
            }
            for (std::size_t k : inc[n].inflow) {
                if (k != out_line) terms.push_back({ix.flow_ctg(k, c, t), 1.0});
            }
            for (std::size_t k : inc[n].outflow) {
                if (k != out_line) terms.push_back({ix.flow_ctg(k, c, t), -1.0});
            }
            if (cdr) {
                if (auto j = ix.cdr(n, c, t)) terms.push_back({*j, 1.0});
            }
            emit(std::move(terms), RS::equal, sc.demand(n, t), balance, 'n', sc.buses[n].id, t);
        }
    }
    if (cdr) {
        for (std::size_t n = 0; n < sc.buses.size(); ++n) {
            for (int t = 1; t <= T; ++t) {
                if (auto j = ix.cdr(n, c, t)) {
                    emit({{*j, 1.0}}, RS::less_equal, sc.cdr.cap_fraction * sc.demand(n, t), Equation::cdr_cap, 'n',
                         sc.buses[n].id, t);
                }
            }
        }
    }
    const std::size_t ref = sc.bus_position(sc.reference_bus);
    for (int t = 1; t <= T; ++t) {
        emit({{ix.angle_ctg(ref, c, t), 1.0}}, RS::equal, 0.0, Equation::reference_angle, 0, 0, t);
    }
    return rows;
}

}  // namespace

std::vector<Row> build_contingency_constraints(const SystemCase& sc, const ContingencySet& contingencies,
                                               const VariableIndex& ix, ModelVariant variant, Execution execution) {
    if (ix.num_contingencies() != contingencies.size()) {
        throw FormulationError("variable index was built for a different contingency set");
    }
    const bool cdr = uses_cdr(variant);
    const auto inc = incidence(sc);
    const auto count = static_cast<std::ptrdiff_t>(contingencies.size());
    std::vector<std::vector<Row>> blocks(contingencies.size());

    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < count; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            blocks[ci] = contingency_block(sc, contingencies[ci], ci, ix, cdr, inc);
        }
    } else {
        for (std::size_t c = 0; c < contingencies.size(); ++c) {
            blocks[c] = contingency_block(sc, contingencies[c], c, ix, cdr, inc);
        }
    }

    std::size_t total = 0;
    for (const auto& b : blocks) total += b.size();
    std::vector<Row> rows;
    rows.reserve(total);
    for (auto& b : blocks) {
        std::move(b.begin(), b.end(), std::back_inserter(rows));
    }
    return rows;
}

MilpModel assemble_model(const SystemCase& sc, const ContingencySet& contingencies, ModelVariant variant,
                         const FormulationOptions& options, Execution execution) {
    MilpModel model;
    model.name = (sc.name.empty() ? std::string("case") : sc.name) + "_" + std::string(variant_name(variant));
    VariableIndex ix = index_variables(sc, contingencies, variant);
    const std::size_t nv = ix.size();
    model.lower.assign(nv, 0.0);
    model.upper.assign(nv, inf);
    model.integer.assign(nv, false);
    model.objective = build_objective(sc, contingencies, ix, variant);

    const int T = sc.horizon();
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        for (int t = 1; t <= T; ++t) {
            model.upper[ix.P(g, t)] = sc.generators[g].p_max;
            for (std::size_t j : {ix.u(g, t), ix.v(g, t)}) {
                model.upper[j] = 1.0;
                model.integer[j] = true;
            }
        }
    }
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        for (int t = 1; t <= T; ++t) {
            model.lower[ix.flow(k, t)] = -sc.lines[k].rate_normal;
            model.upper[ix.flow(k, t)] = sc.lines[k].rate_normal;
        }
    }
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        for (int t = 1; t <= T; ++t) {
            model.lower[ix.angle(n, t)] = -inf;
        }
    }
    for (std::size_t c = 0; c < contingencies.size(); ++c) {
        const auto& ctg = contingencies[c];
        for (int t = 1; t <= T; ++t) {
            for (std::size_t g = 0; g < sc.generators.size(); ++g) {
                const bool out = ctg.kind == ContingencyKind::generator && sc.generators[g].id == ctg.element_id;
                model.upper[ix.P_ctg(g, c, t)] = out ? 0.0 : sc.generators[g].p_max;
            }
            for (std::size_t k = 0; k < sc.lines.size(); ++k) {
                const bool out = ctg.kind == ContingencyKind::line && sc.lines[k].id == ctg.element_id;
                const double limit = out ? 0.0 : sc.lines[k].rate_emergency;
                model.lower[ix.flow_ctg(k, c, t)] = -limit;
                model.upper[ix.flow_ctg(k, c, t)] = limit;
            }
            for (std::size_t n = 0; n < sc.buses.size(); ++n) {
                model.lower[ix.angle_ctg(n, c, t)] = -inf;
            }
        }
    }

    model.rows = build_base_constraints(sc, ix, options);
    auto ctg_rows = build_contingency_constraints(sc, contingencies, ix, variant, execution);
    model.rows.reserve(model.rows.size() + ctg_rows.size());
    std::move(ctg_rows.begin(), ctg_rows.end(), std::back_inserter(model.rows));
    model.index = std::move(ix);
    return model;
}

}  // namespace gridsched
