#include "gridsched/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "gridsched/lp_solver.hpp"

namespace gridsched {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

HourlySeries zeros(std::size_t rows, int T) {
    return HourlySeries(rows, std::vector<double>(static_cast<std::size_t>(T), 0.0));
}

void require_shape(const HourlySeries& s, std::size_t rows, int T, const char* what) {
    bool ok = s.size() == rows;
    for (std::size_t i = 0; ok && i < s.size(); ++i) {
        ok = s[i].size() == static_cast<std::size_t>(T);
    }
    if (!ok) {
        std::ostringstream msg;
        msg << what << ": expected " << rows << " x " << T << " values";
        throw ShapeError(msg.str());
    }
}

bool all_zero(const HourlySeries& s) {
    for (const auto& row : s) {
        for (double x : row) {
            if (x != 0.0) return false;
        }
    }
    return true;
}

std::string label(const Contingency& c) {
    return (c.kind == ContingencyKind::line ? "L" : "G") + std::to_string(c.element_id);
}

// Collects violations for one group of checks.
class Collector {
public:
    explicit Collector(double tol) : tol_(tol) {}

    void geq(Equation eq, const std::string& subs, double lhs, double rhs) { add(eq, subs, lhs, rhs, lhs - rhs); }
    void leq(Equation eq, const std::string& subs, double lhs, double rhs) { add(eq, subs, lhs, rhs, rhs - lhs); }
    void eq(Equation eq, const std::string& subs, double lhs, double rhs) {
        add(eq, subs, lhs, rhs, -std::abs(lhs - rhs));
    }
    void integral(const std::string& subs, double x, double tol) {
        const double dist = std::abs(x - std::round(x));
        const double range = std::max({0.0, -x, x - 1.0});
        const double bad = std::max(dist, range);
        if (bad > tol) out.push_back({Equation::integrality, subs, x, std::round(std::clamp(x, 0.0, 1.0)), -bad});
    }

    std::vector<Violation> out;

private:
    void add(Equation eq, const std::string& subs, double lhs, double rhs, double slack) {
        if (slack < -tol_) out.push_back({eq, subs, lhs, rhs, slack});
    }
    double tol_;
};

std::string subs(char kind, int id, int t, const std::string& ctg = {}) {
    std::string s;
    if (kind) {
        s += kind;
        s += '=';
        s += std::to_string(id);
        s += ',';
    }
    if (!ctg.empty()) {
        s += "c=" + ctg + ",";
    }
    s += "t=" + std::to_string(t);
    return s;
}

struct Incidence {
    std::vector<std::vector<std::size_t>> gens, inflow, outflow;
};

Incidence incidence_of(const SystemCase& sc) {
    Incidence inc;
    const std::size_t N = sc.buses.size();
    inc.gens.resize(N);
    inc.inflow.resize(N);
    inc.outflow.resize(N);
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        inc.gens[sc.bus_position(sc.generators[g].bus)].push_back(g);
    }
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        inc.outflow[sc.bus_position(sc.lines[k].from_bus)].push_back(k);
        inc.inflow[sc.bus_position(sc.lines[k].to_bus)].push_back(k);
    }
    return inc;
}

void check_base(const SystemCase& sc, const ScheduleSolution& s, const CheckOptions& opt, const Incidence& inc,
                Collector& col) {
    const int T = sc.horizon();
    const std::size_t G = sc.generators.size();
    auto at = [](const HourlySeries& h, std::size_t e, int t) { return h[e][static_cast<std::size_t>(t - 1)]; };

    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = sc.generators[g];
        const double u0 = gen.initial_on ? 1.0 : 0.0;
        for (int t = 1; t <= T; ++t) {
            const auto sub = subs('g', gen.id, t);
            const double P = at(s.P, g, t), u = at(s.u, g, t), v = at(s.v, g, t), r = at(s.r, g, t);
            const double P_prev = t > 1 ? at(s.P, g, t - 1) : 0.0;
            const double u_prev = t > 1 ? at(s.u, g, t - 1) : u0;

            col.geq(Equation::min_output, sub, P, gen.p_min * u);
            col.geq(Equation::min_output, sub, P, 0.0);
            col.leq(Equation::max_output_with_reserve, sub, P + r, gen.p_max * u);
            col.leq(Equation::reserve_limit, sub, r, gen.ramp_10min * u);
            col.geq(Equation::reserve_limit, sub, r, 0.0);
            if (opt.formulation.reserve_coverage) {
                double total = 0.0;
                for (std::size_t q = 0; q < G; ++q) total += at(s.r, q, t);
                col.geq(Equation::reserve_coverage, sub, total, P + r);
            }
            col.leq(Equation::ramp_up, sub, P - P_prev, gen.ramp_hourly * u_prev + gen.ramp_startup * v);
            col.leq(Equation::ramp_down, sub, P_prev - P, gen.ramp_hourly * u + gen.ramp_shutdown * (v - u + u_prev));
            if (!(opt.formulation.literal_min_up && t < gen.min_up)) {
                double starts = 0.0;
                for (int q = std::max(1, t - gen.min_up + 1); q <= t; ++q) starts += at(s.v, g, q);
                col.leq(Equation::min_up, sub, starts, u);
            }
            if (t <= T - gen.min_down) {
                double starts = 0.0;
                for (int q = t + 1; q <= t + gen.min_down; ++q) starts += at(s.v, g, q);
                col.leq(Equation::min_down, sub, starts + u, 1.0);
            }
            col.geq(Equation::startup, sub, v, u - u_prev);
            col.integral("u," + sub, u, opt.integrality_tolerance);
            col.integral("v," + sub, v, opt.integrality_tolerance);
        }
    }
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        for (int t = 1; t <= T; ++t) {
            double net = 0.0;
            for (std::size_t g : inc.gens[n]) net += at(s.P, g, t);
            for (std::size_t k : inc.inflow[n]) net += at(s.flow, k, t);
            for (std::size_t k : inc.outflow[n]) net -= at(s.flow, k, t);
            col.eq(Equation::balance, subs('n', sc.buses[n].id, t), net, sc.demand(n, t));
        }
    }
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        const auto& line = sc.lines[k];
        const std::size_t from = sc.bus_position(line.from_bus);
        const std::size_t to = sc.bus_position(line.to_bus);
        for (int t = 1; t <= T; ++t) {
            const auto sub = subs('k', line.id, t);
            const double F = at(s.flow, k, t);
            col.leq(Equation::flow_limit, sub, std::abs(F), line.rate_normal);
            col.eq(Equation::flow_definition, sub, F, line.susceptance * (at(s.angle, from, t) - at(s.angle, to, t)));
        }
    }
    const std::size_t ref = sc.bus_position(sc.reference_bus);
    for (int t = 1; t <= T; ++t) {
        col.eq(Equation::reference_angle, subs(0, 0, t), at(s.angle, ref, t), 0.0);
    }
}

void check_contingency(const SystemCase& sc, const ScheduleSolution& s, const Contingency& ctg,
                       const PostContingency& pc, bool cdr, const Incidence& inc, Collector& col) {
    const int T = sc.horizon();
    const std::string lab = label(ctg);
    const std::size_t out_gen =
        ctg.kind == ContingencyKind::generator ? sc.generator_position(ctg.element_id) : npos;
    const std::size_t out_line = ctg.kind == ContingencyKind::line ? sc.line_position(ctg.element_id) : npos;
    auto at = [](const HourlySeries& h, std::size_t e, int t) { return h[e][static_cast<std::size_t>(t - 1)]; };

    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        const auto& gen = sc.generators[g];
        for (int t = 1; t <= T; ++t) {
            const auto sub = subs('g', gen.id, t, lab);
            const double Pc = at(pc.P, g, t);
            if (g == out_gen) {
                col.eq(Equation::ctg_max_output, sub, Pc, 0.0);
                continue;
            }
            const double P = at(s.P, g, t), u = at(s.u, g, t);
            col.leq(Equation::ctg_ramp_down, sub, P - Pc, gen.ramp_10min * u);
            col.leq(Equation::ctg_ramp_up, sub, Pc - P, gen.ramp_10min * u);
            col.geq(Equation::ctg_min_output, sub, Pc, gen.p_min * u);
            col.geq(Equation::ctg_min_output, sub, Pc, 0.0);
            col.leq(Equation::ctg_max_output, sub, Pc, gen.p_max * u);
        }
    }
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        const auto& line = sc.lines[k];
        const std::size_t from = sc.bus_position(line.from_bus);
        const std::size_t to = sc.bus_position(line.to_bus);
        for (int t = 1; t <= T; ++t) {
            const auto sub = subs('k', line.id, t, lab);
            const double F = at(pc.flow, k, t);
            if (k == out_line) {
                col.eq(Equation::ctg_flow_limit, sub, F, 0.0);
                continue;
            }
            col.eq(Equation::ctg_flow_definition, sub, F,
                   line.susceptance * (at(pc.angle, from, t) - at(pc.angle, to, t)));
            col.leq(Equation::ctg_flow_limit, sub, std::abs(F), line.rate_emergency);
        }
    }
    const Equation balance = cdr ? Equation::ctg_balance_cdr : Equation::ctg_balance;
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        for (int t = 1; t <= T; ++t) {
            const auto sub = subs('n', sc.buses[n].id, t, lab);
            double net = 0.0;
            for (std::size_t g : inc.gens[n]) {
                if (g != out_gen) net += at(pc.P, g, t);
            }
            for (std::size_t k : inc.inflow[n]) {
                if (k != out_line) net += at(pc.flow, k, t);
            }
            for (std::size_t k : inc.outflow[n]) {
                if (k != out_line) net -= at(pc.flow, k, t);
            }
            const double curtail = cdr ? at(pc.cdr, n, t) : 0.0;
            col.eq(balance, sub, net + curtail, sc.demand(n, t));
            if (!cdr) continue;
            if (sc.participates(n)) {
                col.leq(Equation::cdr_cap, sub, curtail, sc.cdr.cap_fraction * sc.demand(n, t));
                col.geq(Equation::cdr_cap, sub, curtail, 0.0);
            } else {
                col.eq(Equation::cdr_cap, sub, curtail, 0.0);
            }
        }
    }
    const std::size_t ref = sc.bus_position(sc.reference_bus);
    for (int t = 1; t <= T; ++t) {
        col.eq(Equation::reference_angle, subs(0, 0, t, lab), at(pc.angle, ref, t), 0.0);
    }
}

void validate_shapes(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                     const ScheduleSolution& s) {
    const int T = sc.horizon();
    const std::size_t G = sc.generators.size(), K = sc.lines.size(), N = sc.buses.size();
    require_shape(s.u, G, T, "u");
    require_shape(s.v, G, T, "v");
    require_shape(s.P, G, T, "P");
    require_shape(s.r, G, T, "r");
    require_shape(s.flow, K, T, "flow");
    require_shape(s.angle, N, T, "angle");
    if (s.contingency.size() != ctgs.size()) {
        throw ShapeError("contingency: expected " + std::to_string(ctgs.size()) + " entries, got " +
                         std::to_string(s.contingency.size()));
    }
    for (const auto& pc : s.contingency) {
        require_shape(pc.P, G, T, "contingency P");
        require_shape(pc.flow, K, T, "contingency flow");
        require_shape(pc.angle, N, T, "contingency angle");
        if (uses_cdr(variant) || !pc.cdr.empty()) require_shape(pc.cdr, N, T, "contingency cdr");
    }
}

}  // namespace

bool ViolationReport::flags(Equation eq) const {
    return std::any_of(violations.begin(), violations.end(), [eq](const Violation& v) { return v.equation == eq; });
}

ScheduleSolution empty_schedule(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant) {
    const int T = sc.horizon();
    ScheduleSolution s;
    s.variant = variant;
    s.u = s.v = s.P = s.r = zeros(sc.generators.size(), T);
    s.flow = zeros(sc.lines.size(), T);
    s.angle = zeros(sc.buses.size(), T);
    s.contingency.resize(ctgs.size());
    for (auto& pc : s.contingency) {
        pc.P = zeros(sc.generators.size(), T);
        pc.flow = zeros(sc.lines.size(), T);
        pc.angle = zeros(sc.buses.size(), T);
        if (uses_cdr(variant)) pc.cdr = zeros(sc.buses.size(), T);
    }
    return s;
}

ScheduleSolution to_schedule(const MilpModel& model, std::span<const double> x, ModelVariant variant,
                             double objective) {
    if (!model.index) throw ShapeError("model has no variable index");
    const VariableIndex& ix = *model.index;
    if (x.size() != ix.size()) throw ShapeError("column vector does not match the model");
    const int T = ix.horizon();
    ScheduleSolution s;
    s.variant = variant;
    s.objective = objective;
    s.u = s.v = s.P = s.r = zeros(ix.num_generators(), T);
    s.flow = zeros(ix.num_lines(), T);
    s.angle = zeros(ix.num_buses(), T);
    s.contingency.resize(ix.num_contingencies());
    for (auto& pc : s.contingency) {
        pc.P = zeros(ix.num_generators(), T);
        pc.flow = zeros(ix.num_lines(), T);
        pc.angle = zeros(ix.num_buses(), T);
        if (ix.has_cdr()) pc.cdr = zeros(ix.num_buses(), T);
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        const VariableKey key = ix.key(j);
        const auto h = static_cast<std::size_t>(key.hour - 1);
        const double val = x[j];
        switch (key.family) {
        case Family::P: s.P[key.element][h] = val; break;
        case Family::u: s.u[key.element][h] = val; break;
        case Family::v: s.v[key.element][h] = val; break;
        case Family::r: s.r[key.element][h] = val; break;
        case Family::flow: s.flow[key.element][h] = val; break;
        case Family::angle: s.angle[key.element][h] = val; break;
        case Family::P_ctg: s.contingency[key.contingency].P[key.element][h] = val; break;
        case Family::flow_ctg: s.contingency[key.contingency].flow[key.element][h] = val; break;
        case Family::angle_ctg: s.contingency[key.contingency].angle[key.element][h] = val; break;
        case Family::cdr: s.contingency[key.contingency].cdr[key.element][h] = val; break;
        }
    }
    return s;
}

std::vector<double> to_columns(const MilpModel& model, const ScheduleSolution& s) {
    if (!model.index) throw ShapeError("model has no variable index");
    const VariableIndex& ix = *model.index;
    std::vector<double> x(ix.size(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        const VariableKey key = ix.key(j);
        const auto h = static_cast<std::size_t>(key.hour - 1);
        auto get = [&](const HourlySeries& series) {
            if (key.element >= series.size() || h >= series[key.element].size()) {
                throw ShapeError("schedule is smaller than the model");
            }
            return series[key.element][h];
        };
        auto post = [&]() -> const PostContingency& {
            if (key.contingency >= s.contingency.size()) throw ShapeError("schedule is missing contingencies");
            return s.contingency[key.contingency];
        };
        switch (key.family) {
        case Family::P: x[j] = get(s.P); break;
        case Family::u: x[j] = get(s.u); break;
        case Family::v: x[j] = get(s.v); break;
        case Family::r: x[j] = get(s.r); break;
        case Family::flow: x[j] = get(s.flow); break;
        case Family::angle: x[j] = get(s.angle); break;
        case Family::P_ctg: x[j] = get(post().P); break;
        case Family::flow_ctg: x[j] = get(post().flow); break;
        case Family::angle_ctg: x[j] = get(post().angle); break;
        case Family::cdr: x[j] = get(post().cdr); break;
        }
    }
    return x;
}

double schedule_cost(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                     const ScheduleSolution& s) {
    const int T = sc.horizon();
    double cost = 0.0;
    for (std::size_t g = 0; g < sc.generators.size(); ++g) {
        const auto& gen = sc.generators[g];
        for (int t = 0; t < T; ++t) {
            cost += gen.energy_cost * s.P[g][t] + gen.no_load_cost * s.u[g][t] + gen.startup_cost * s.v[g][t];
        }
    }
    if (uses_cdr(variant)) {
        for (std::size_t c = 0; c < ctgs.size(); ++c) {
            const auto& cdr = s.contingency[c].cdr;
            for (std::size_t n = 0; n < sc.buses.size(); ++n) {
                if (!sc.participates(n)) continue;
                for (int t = 0; t < T; ++t) {
                    cost += ctgs[c].probability * sc.cdr.penalty[n] * cdr[n][t];
                }
            }
        }
    }
    return cost;
}

ViolationReport check_solution(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                               const ScheduleSolution& s, const CheckOptions& opt) {
    validate_shapes(sc, ctgs, variant, s);
    const Incidence inc = incidence_of(sc);
    const bool cdr = uses_cdr(variant);

    Collector base(opt.tolerance);
    check_base(sc, s, opt, inc, base);

    std::vector<std::vector<Violation>> per_ctg(ctgs.size());
    auto run_one = [&](std::size_t c) {
        Collector col(opt.tolerance);
        check_contingency(sc, s, ctgs[c], s.contingency[c], cdr, inc, col);
        if (!cdr && !all_zero(s.contingency[c].cdr)) {
            col.eq(Equation::cdr_cap, "c=" + label(ctgs[c]), 1.0, 0.0);
        }
        per_ctg[c] = std::move(col.out);
    };
    if (opt.execution == Execution::parallel) {
        const auto count = static_cast<std::ptrdiff_t>(ctgs.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < count; ++c) {
            run_one(static_cast<std::size_t>(c));
        }
    } else {
        for (std::size_t c = 0; c < ctgs.size(); ++c) run_one(c);
    }

    ViolationReport report;
    report.violations = std::move(base.out);
    for (auto& block : per_ctg) {
        std::move(block.begin(), block.end(), std::back_inserter(report.violations));
    }

    report.recomputed_objective = schedule_cost(sc, ctgs, variant, s);
    const double diff = std::abs(report.recomputed_objective - s.objective);
    if (diff > opt.objective_rel_tolerance * std::max(1.0, std::abs(s.objective))) {
        report.objective_matches = false;
        report.violations.push_back({Equation::custom, "objective", report.recomputed_objective, s.objective, -diff});
    }

    std::stable_sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
        return equation_number(a.equation) < equation_number(b.equation);
    });
    for (const auto& v : report.violations) {
        if (v.equation != Equation::custom) report.max_violation = std::max(report.max_violation, -v.slack);
    }
    report.pass = report.violations.empty();
    return report;
}

namespace {

struct CommitmentPattern {
    std::vector<double> u, v;
};

// Every (u, v) sequence of one unit that satisfies the startup
// definition and the minimum up/down windows.
std::vector<CommitmentPattern> unit_patterns(const Generator& gen, int T, const FormulationOptions& opt) {
    std::vector<CommitmentPattern> out;
    const double u0 = gen.initial_on ? 1.0 : 0.0;
    const std::uint32_t limit = 1u << T;
    for (std::uint32_t ub = 0; ub < limit; ++ub) {
        for (std::uint32_t vb = 0; vb < limit; ++vb) {
            CommitmentPattern p;
            p.u.resize(static_cast<std::size_t>(T));
            p.v.resize(static_cast<std::size_t>(T));
            for (int t = 0; t < T; ++t) {
                p.u[t] = (ub >> t) & 1u ? 1.0 : 0.0;
                p.v[t] = (vb >> t) & 1u ? 1.0 : 0.0;
            }
            bool ok = true;
            for (int t = 1; ok && t <= T; ++t) {
                const double prev = t > 1 ? p.u[t - 2] : u0;
                ok = p.v[t - 1] >= p.u[t - 1] - prev;
                if (ok && !(opt.literal_min_up && t < gen.min_up)) {
                    double starts = 0.0;
                    for (int q = std::max(1, t - gen.min_up + 1); q <= t; ++q) starts += p.v[q - 1];
                    ok = starts <= p.u[t - 1];
                }
                if (ok && t <= T - gen.min_down) {
                    double starts = 0.0;
                    for (int q = t + 1; q <= t + gen.min_down; ++q) starts += p.v[q - 1];
                    ok = starts + p.u[t - 1] <= 1.0;
                }
            }
            if (ok) out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

OracleResult brute_force_optimum(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                                 std::size_t max_binaries, const FormulationOptions& formulation) {
    const std::size_t G = sc.generators.size();
    const int T = sc.horizon();
    if (G * static_cast<std::size_t>(T) > max_binaries) {
        throw OracleLimitError("enumeration needs |G| x T <= " + std::to_string(max_binaries) + ", got " +
                               std::to_string(G * static_cast<std::size_t>(T)));
    }
    const MilpModel model = assemble_model(sc, ctgs, variant, formulation, Execution::serial);
    const VariableIndex& ix = *model.index;
    const SimplexSolver lp(model);

    std::vector<std::vector<CommitmentPattern>> patterns(G);
    for (std::size_t g = 0; g < G; ++g) {
        patterns[g] = unit_patterns(sc.generators[g], T, formulation);
        if (patterns[g].empty()) return {};
    }

    OracleResult result;
    std::vector<double> best_x;
    std::vector<double> lo = model.lower;
    std::vector<double> hi = model.upper;
    std::vector<std::size_t> pick(G, 0);
    Basis warm;
    while (true) {
        for (std::size_t g = 0; g < G; ++g) {
            const auto& p = patterns[g][pick[g]];
            for (int t = 1; t <= T; ++t) {
                lo[ix.u(g, t)] = hi[ix.u(g, t)] = p.u[t - 1];
                lo[ix.v(g, t)] = hi[ix.v(g, t)] = p.v[t - 1];
            }
        }
        ++result.patterns;
        LpSolution sol = lp.solve(lo, hi, warm.empty() ? nullptr : &warm);
        if (sol.status == LpStatus::optimal) {
            if (!result.feasible || sol.objective < result.objective - 1e-9 * std::max(1.0, std::abs(result.objective))) {
                result.feasible = true;
                result.objective = sol.objective;
                best_x = sol.x;
            }
            warm = std::move(sol.basis);
        }
        std::size_t g = 0;
        while (g < G && ++pick[g] == patterns[g].size()) {
            pick[g] = 0;
            ++g;
        }
        if (g == G) break;
    }
    if (result.feasible) {
        result.schedule = to_schedule(model, best_x, variant, result.objective);
    }
    return result;
}

}  // namespace gridsched
