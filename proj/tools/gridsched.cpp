// gridsched: command-line front end for the scheduling library.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gridsched/case_model.hpp"
#include "gridsched/experiments.hpp"
#include "gridsched/formulation.hpp"
#include "gridsched/grid_analysis.hpp"
#include "gridsched/market.hpp"
#include "gridsched/milp_solver.hpp"
#include "gridsched/schedule_io.hpp"
#include "gridsched/solver_io.hpp"
#include "gridsched/verifier.hpp"

namespace fs = std::filesystem;
using namespace gridsched;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_infeasible = 1;
constexpr int exit_usage = 2;
constexpr int exit_internal = 3;

// Bad user input discovered after argument parsing (unreadable files,
// malformed documents).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string case_path;
    std::string variant = "t-scuc";
    double gap = 0.01;
    std::optional<double> time_limit;
    std::string out = ".";
    std::optional<double> penalty;
    std::optional<double> load_factor;
    bool no_reserve_coverage = false;
    bool literal_min_up = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

SystemCase load_case(const RunConfig& cfg) {
    SystemCase sc = parse_case(read_file(cfg.case_path));
    if (cfg.load_factor) sc = scale_loads(sc, *cfg.load_factor);
    if (cfg.penalty) sc = with_uniform_penalty(sc, *cfg.penalty);
    return sc;
}

FormulationOptions formulation_of(const RunConfig& cfg) {
    FormulationOptions f;
    f.reserve_coverage = !cfg.no_reserve_coverage;
    f.literal_min_up = cfg.literal_min_up;
    return f;
}

SolveConfig solve_config_of(const RunConfig& cfg) {
    SolveConfig s;
    s.gap_target = cfg.gap;
    s.time_limit = cfg.time_limit;
    s.formulation = formulation_of(cfg);
    return s;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(std::string("bad ") + what + " value '" + item + "'");
        }
    }
    if (values.empty()) throw InputError(std::string("empty ") + what + " list");
    return values;
}

void add_case_options(CLI::App* cmd, RunConfig& cfg, bool with_variant) {
    cmd->add_option("case", cfg.case_path, "Case file (JSON)")->required();
    if (with_variant) {
        cmd->add_option("--variant", cfg.variant, "t-scuc, tg-scuc, t-scuc-cdr or tg-scuc-cdr");
    }
    cmd->add_option("--penalty", cfg.penalty, "Uniform curtailment penalty override ($/MWh)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--load-factor", cfg.load_factor, "Scale every nodal demand")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-reserve-coverage", cfg.no_reserve_coverage, "Drop the system reserve coverage rows");
    cmd->add_flag("--literal-min-up", cfg.literal_min_up, "Apply minimum up time only from hour UT onward");
}

void add_solver_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--gap", cfg.gap, "Relative MIP gap target")->check(CLI::NonNegativeNumber);
    cmd->add_option("--time-limit", cfg.time_limit, "Seconds")->check(CLI::PositiveNumber);
}

std::string solve_report(const SolveOutcome& o, const ContingencySet& ctgs) {
    std::ostringstream r;
    r << "variant: " << variant_name(o.variant) << "\n";
    r << "status: " << milp_status_name(o.status) << "\n";
    r << "contingencies: " << ctgs.size() << "\n";
    r << "nodes: " << o.nodes << "\n";
    if (o.feasible()) {
        r << "objective: " << format_number(o.objective()) << "\n";
        r << "achieved_gap: " << (o.gap ? format_number(*o.gap) : "NA") << "\n";
        if (uses_cdr(o.variant)) {
            r << "cdr_line_mw: " << format_number(o.cdr.line_mw) << "\n";
            r << "cdr_gen_mw: " << format_number(o.cdr.generator_mw) << "\n";
        }
    }
    return r.str();
}

int cmd_solve(const RunConfig& cfg) {
    const SystemCase sc = load_case(cfg);
    const ModelVariant variant = parse_variant(cfg.variant);
    const ContingencySet ctgs = contingencies_for(sc, variant);
    const SolveOutcome o = solve_variant(sc, variant, solve_config_of(cfg));
    const fs::path out(cfg.out);
    const std::string report = solve_report(o, ctgs);
    write_file(out / "report.txt", report);
    std::cout << report;
    if (!o.feasible()) {
        std::cerr << "no solution: " << milp_status_name(o.status) << "\n";
        return exit_infeasible;
    }
    write_file(out / "solution.json", write_schedule_json(sc, ctgs, *o.schedule));
    // The same point in the external-solver format, for import-sol round trips.
    const MilpModel model = assemble_model(sc, ctgs, variant, formulation_of(cfg));
    write_file(out / "solution.sol", write_solution_file(model, NameMap(model), to_columns(model, *o.schedule)));
    return exit_ok;
}

int cmd_export_mps(const RunConfig& cfg, const std::string& mps_path) {
    const SystemCase sc = load_case(cfg);
    const ModelVariant variant = parse_variant(cfg.variant);
    const MilpModel model = assemble_model(sc, contingencies_for(sc, variant), variant, formulation_of(cfg));
    const MpsExport mps = export_mps(model);
    write_file(mps_path, mps.text);
    std::cout << "wrote " << mps_path << " (" << model.num_vars() << " columns, " << model.num_rows() << " rows)\n";
    return exit_ok;
}

int cmd_import_sol(const RunConfig& cfg, const std::string& sol_path, const std::string& json_path) {
    const SystemCase sc = load_case(cfg);
    const ModelVariant variant = parse_variant(cfg.variant);
    const ContingencySet ctgs = contingencies_for(sc, variant);
    const MilpModel model = assemble_model(sc, ctgs, variant, formulation_of(cfg));
    const NameMap names(model);
    ImportedSolution imported;
    try {
        imported = import_solution(read_file(sol_path), names, model);
    } catch (const MpsError& e) {
        throw InputError(sol_path + ": " + e.what());
    }
    if (imported.missing > 0) {
        std::cerr << "warning: " << imported.missing << " variables missing from " << sol_path
                  << ", set to 0\n";
    }
    ScheduleSolution schedule = to_schedule(model, imported.solution.x, variant, imported.solution.objective);
    write_file(json_path, write_schedule_json(sc, ctgs, schedule));
    std::cout << "objective: " << format_number(imported.solution.objective) << "\n";
    return exit_ok;
}

int cmd_check(const RunConfig& cfg, const std::string& solution_path, double tolerance) {
    const SystemCase sc = load_case(cfg);
    const std::string text = read_file(solution_path);
    // The variant recorded in the solution decides the contingency set.
    ModelVariant variant;
    try {
        variant = parse_variant(nlohmann::json::parse(text).at("variant").get<std::string>());
    } catch (const std::exception&) {
        throw InputError(solution_path + ": cannot read variant");
    }
    const ContingencySet ctgs = contingencies_for(sc, variant);
    const ScheduleSolution schedule = read_schedule_json(text, sc, ctgs);
    CheckOptions options;
    options.tolerance = tolerance;
    options.formulation = formulation_of(cfg);
    const ViolationReport report = check_solution(sc, ctgs, variant, schedule, options);
    std::cout << "equation,subscripts,lhs,rhs,slack\n";
    for (const auto& v : report.violations) {
        const std::string eq = v.equation == Equation::custom ? "objective" : std::to_string(equation_number(v.equation));
        std::cout << eq << ",\"" << v.subscripts << "\"," << format_number(v.lhs) << "," << format_number(v.rhs) << ","
                  << format_number(v.slack) << "\n";
    }
    std::cerr << (report.pass ? "pass" : "FAIL") << ": " << report.violations.size() << " violations, max "
              << format_number(report.max_violation) << "\n";
    return report.pass ? exit_ok : exit_infeasible;
}

int cmd_market(const RunConfig& cfg, const std::string& solution_path) {
    const SystemCase sc = load_case(cfg);
    const std::string text = read_file(solution_path);
    ModelVariant variant;
    try {
        variant = parse_variant(nlohmann::json::parse(text).at("variant").get<std::string>());
    } catch (const std::exception&) {
        throw InputError(solution_path + ": cannot read variant");
    }
    const ContingencySet ctgs = contingencies_for(sc, variant);
    const ScheduleSolution schedule = read_schedule_json(text, sc, ctgs);
    HourlySeries lmp;
    try {
        lmp = compute_lmp(sc, ctgs, variant, schedule, formulation_of(cfg));
    } catch (const MarketError& e) {
        std::cerr << e.what() << "\n";
        return exit_infeasible;
    }
    const MarketReport report = market_summary(sc, lmp, schedule);

    std::string lmp_csv = "bus";
    for (int t = 1; t <= sc.horizon(); ++t) lmp_csv += ",h" + std::to_string(t);
    lmp_csv += "\n";
    for (std::size_t n = 0; n < sc.buses.size(); ++n) {
        lmp_csv += std::to_string(sc.buses[n].id);
        for (double p : lmp[n]) lmp_csv += "," + format_number(p);
        lmp_csv += "\n";
    }
    std::string summary = "metric,value\n";
    summary += "load_payment," + format_number(report.load_payment) + "\n";
    summary += "generator_revenue," + format_number(report.generator_revenue) + "\n";
    summary += "average_lmp," + format_number(report.average_lmp) + "\n";
    const auto& c = report.commitment;
    summary += "always_on," + std::to_string(c.always_on) + "\n";
    summary += "always_off," + std::to_string(c.always_off) + "\n";
    summary += "marginal," + std::to_string(c.marginal) + "\n";
    summary += "startups_first_hour," + std::to_string(c.startups_first_hour) + "\n";
    summary += "startups_later," + std::to_string(c.startups_later) + "\n";
    summary += "total_commitment," + std::to_string(c.total_commitment) + "\n";

    const fs::path out(cfg.out);
    write_file(out / "lmp.csv", lmp_csv);
    write_file(out / "summary.csv", summary);
    std::cout << summary;
    return exit_ok;
}

int cmd_contingencies(const RunConfig& cfg) {
    const SystemCase sc = load_case(cfg);
    const ContingencySet ctgs = contingencies_for(sc, parse_variant(cfg.variant));
    std::cout << "kind,element,probability\n";
    for (const auto& c : ctgs) {
        std::cout << kind_name(c.kind) << "," << c.element_id << "," << format_number(c.probability) << "\n";
    }
    return exit_ok;
}

int cmd_compare(const RunConfig& cfg) {
    const SystemCase sc = load_case(cfg);
    const auto rows = run_variant_comparison(sc, solve_config_of(cfg));
    const std::string csv = comparison_csv(rows);
    write_file(fs::path(cfg.out) / "comparison.csv", csv);
    std::cout << csv;
    return exit_ok;
}

int cmd_sweep_penalty(const RunConfig& cfg, const std::string& penalties) {
    const SystemCase sc = load_case(cfg);
    const auto values = parse_list(penalties, "penalty");
    const auto rows = penalty_sweep(sc, values, parse_variant(cfg.variant), solve_config_of(cfg));
    const std::string csv = penalty_sweep_csv(rows);
    write_file(fs::path(cfg.out) / "penalty_sweep.csv", csv);
    std::cout << csv;
    return exit_ok;
}

int cmd_sweep_load(const RunConfig& cfg, const std::string& factors, const std::vector<std::string>& variant_names) {
    const SystemCase sc = load_case(cfg);
    const auto values = parse_list(factors, "factor");
    for (double f : values) {
        if (!(f > 0.0)) throw InputError("load factors must be positive");
    }
    std::vector<ModelVariant> variants;
    for (const auto& v : variant_names) variants.push_back(parse_variant(v));
    if (variants.empty()) variants.assign(all_variants.begin(), all_variants.end());
    const auto rows = load_scenario_sweep(sc, values, variants, solve_config_of(cfg));
    const std::string csv = load_sweep_csv(rows);
    write_file(fs::path(cfg.out) / "load_sweep.csv", csv);
    std::cout << csv;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_limit();

    CLI::App app{"Day-ahead security-constrained unit commitment with corrective demand response"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string mps_path = "model.mps";
    std::string sol_path;
    std::string solution_path;
    std::string json_out = "solution.json";
    double tolerance = 1e-4;
    std::string penalties = "0,10,100,1000,10000,40000";
    std::string factors = "0.8,0.9,1,1.1,1.2";
    std::vector<std::string> sweep_variants;

    auto* solve = app.add_subcommand("solve", "Solve one variant; writes solution.json, solution.sol and report.txt");
    add_case_options(solve, cfg, true);
    add_solver_options(solve, cfg);
    solve->add_option("--out", cfg.out, "Output directory");

    auto* export_cmd = app.add_subcommand("export-mps", "Write the assembled model as free MPS");
    add_case_options(export_cmd, cfg, true);
    export_cmd->add_option("--out", mps_path, "MPS file");

    auto* import_cmd = app.add_subcommand("import-sol", "Convert an external '<name> <value>' solution");
    add_case_options(import_cmd, cfg, true);
    import_cmd->add_option("solution", sol_path, "Solution file")->required();
    import_cmd->add_option("--out", json_out, "solution.json to write");

    auto* check = app.add_subcommand("check", "Verify a solution.json; prints violations as CSV");
    add_case_options(check, cfg, false);
    check->add_option("solution", solution_path, "solution.json")->required();
    check->add_option("--tolerance", tolerance, "Violation tolerance")->check(CLI::PositiveNumber);

    auto* market = app.add_subcommand("market", "LMPs and settlement summary; writes lmp.csv and summary.csv");
    add_case_options(market, cfg, false);
    market->add_option("solution", solution_path, "solution.json")->required();
    market->add_option("--out", cfg.out, "Output directory");

    auto* ctg = app.add_subcommand("contingencies", "List the contingency set as CSV");
    add_case_options(ctg, cfg, true);

    auto* compare = app.add_subcommand("compare", "Solve all four variants; writes comparison.csv");
    add_case_options(compare, cfg, false);
    add_solver_options(compare, cfg);
    compare->add_option("--out", cfg.out, "Output directory");

    auto* sweep_pen = app.add_subcommand("sweep-penalty", "Uniform penalty sweep; writes penalty_sweep.csv");
    std::string penalty_variant = "tg-scuc-cdr";
    add_case_options(sweep_pen, cfg, false);
    sweep_pen->add_option("--variant", penalty_variant, "A CDR variant");
    add_solver_options(sweep_pen, cfg);
    sweep_pen->add_option("--penalties", penalties, "Comma-separated $/MWh values");
    sweep_pen->add_option("--out", cfg.out, "Output directory");

    auto* sweep_load = app.add_subcommand("sweep-load", "Load scaling sweep; writes load_sweep.csv");
    add_case_options(sweep_load, cfg, false);
    add_solver_options(sweep_load, cfg);
    sweep_load->add_option("--factors", factors, "Comma-separated load factors");
    sweep_load->add_option("--variants", sweep_variants, "Comma-separated variants (default: all)")->delimiter(',');
    sweep_load->add_option("--out", cfg.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*solve) return cmd_solve(cfg);
        if (*export_cmd) return cmd_export_mps(cfg, mps_path);
        if (*import_cmd) return cmd_import_sol(cfg, sol_path, json_out);
        if (*check) return cmd_check(cfg, solution_path, tolerance);
        if (*market) return cmd_market(cfg, solution_path);
        if (*ctg) return cmd_contingencies(cfg);
        if (*compare) return cmd_compare(cfg);
        if (*sweep_pen) {
            cfg.variant = penalty_variant;
            return cmd_sweep_penalty(cfg, penalties);
        }
        if (*sweep_load) return cmd_sweep_load(cfg, factors, sweep_variants);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const CaseError& e) {
        std::cerr << "error: " << cfg.case_path << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const FormulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const TopologyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ExperimentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_usage;
}
