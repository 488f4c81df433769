#include <doctest.h>

#include "gridsched/experiments.hpp"
#include "gridsched/verifier.hpp"
#include "tiny_cases.hpp"

using namespace gridsched;

namespace {

SolveConfig exact(Execution execution = Execution::parallel) {
    SolveConfig c;
    c.gap_target = 0.0;
    c.execution = execution;
    return c;
}

}  // namespace

TEST_CASE("slack network: every variant has the same cost and no curtailment") {
    const auto rows = run_variant_comparison(testcases::slack_triangle(), exact());
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        REQUIRE(r.feasible());
        CHECK(r.objective() == doctest::Approx(rows[0].objective()).epsilon(1e-9));
        CHECK(r.cdr.total() == doctest::Approx(0.0));
    }
}

TEST_CASE("binding line contingency: curtailment is cheaper than local commitment") {
    const SystemCase sc = testcases::binding_line(10.0);
    const SolveOutcome plain = solve_variant(sc, ModelVariant::t_scuc, exact());
    const SolveOutcome cdr = solve_variant(sc, ModelVariant::t_scuc_cdr, exact());
    REQUIRE(plain.feasible());
    REQUIRE(cdr.feasible());
    // Without curtailment unit 3 must be committed (20 + 200); with it,
    // 20 MW is curtailed in each of two line outages at 10 $/MWh x 1/2.
    CHECK(plain.objective() == doctest::Approx(1000.0 + 220.0));
    CHECK(cdr.objective() == doctest::Approx(1000.0 + 200.0));
    CHECK(cdr.cdr.line_mw == doctest::Approx(40.0));
    CHECK(cdr.cdr.generator_mw == 0.0);
}

TEST_CASE("penalty sweep") {
    const SystemCase sc = testcases::binding_line(10.0);
    const std::vector<double> penalties = {1e6, 0.0, 10.0};
    const auto rows = penalty_sweep(sc, penalties, ModelVariant::t_scuc_cdr, exact());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].parameter == 0.0);  // sorted
    CHECK(rows[2].parameter == 1e6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].feasible());
        CHECK(rows[i].cdr.total() <= rows[i - 1].cdr.total() + 1e-9);
        CHECK(*rows[i].objective >= *rows[i - 1].objective - 1e-9);
    }
    CHECK(rows[2].cdr.total() == 0.0);
    CHECK_THROWS_AS(penalty_sweep(sc, penalties, ModelVariant::t_scuc, exact()), ExperimentError);
    CHECK_THROWS_AS(with_uniform_penalty(sc, -1.0), ExperimentError);
}

TEST_CASE("load sweep marks infeasibility as data") {
    const SystemCase sc = testcases::feasibility_boundary();
    const std::vector<double> factors = {1.0, 0.5};
    const std::vector<ModelVariant> variants = {ModelVariant::t_scuc, ModelVariant::t_scuc_cdr};
    const auto rows = load_scenario_sweep(sc, factors, variants, exact());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].parameter == 0.5);
    CHECK(rows[0].feasible());  // 50 MW fits through one 80 MW circuit
    CHECK(rows[1].feasible());
    CHECK(rows[2].parameter == 1.0);
    CHECK_FALSE(rows[2].feasible());
    CHECK(rows[2].status == MilpStatus::infeasible);
    CHECK(rows[3].feasible());
    CHECK(rows[3].cdr.line_mw == doctest::Approx(40.0));
    const std::string csv = load_sweep_csv(rows);
    CHECK(csv.rfind("factor,variant,feasible,cost,cdr_line_mw,cdr_gen_mw\n", 0) == 0);
    CHECK(csv.find("1,T-SCUC,false,,,\n") != std::string::npos);
}

TEST_CASE("serial and parallel sweeps agree") {
    const SystemCase sc = testcases::binding_line(10.0);
    const std::vector<double> penalties = {0.0, 5.0, 10.0, 20.0, 1000.0};
    const auto a = penalty_sweep(sc, penalties, ModelVariant::tg_scuc_cdr, exact(Execution::serial));
    const auto b = penalty_sweep(sc, penalties, ModelVariant::tg_scuc_cdr, exact(Execution::parallel));
    CHECK(penalty_sweep_csv(a) == penalty_sweep_csv(b));
}

TEST_CASE("csv headers") {
    const SystemCase sc = testcases::binding_line(10.0);
    const auto cmp = run_variant_comparison(sc, exact());
    const std::string csv = comparison_csv(cmp);
    CHECK(csv.rfind("variant,cost,gap,time_s,cdr_line_mw,cdr_gen_mw\n", 0) == 0);
    CHECK(csv.find("\nT-SCUC,1220,0,") != std::string::npos);
    const std::vector<double> p = {10.0};
    const std::string pen = penalty_sweep_csv(penalty_sweep(sc, p, ModelVariant::t_scuc_cdr, exact()));
    CHECK(pen == "penalty,cost,cdr_line_mw,cdr_gen_mw,gap\n10,1200,40,0,0\n");
}

TEST_CASE("curtailment totals by outage kind") {
    const SystemCase sc = testcases::binding_line(10.0);
    const ContingencySet ctgs = contingencies_for(sc, ModelVariant::tg_scuc_cdr);
    ScheduleSolution s = empty_schedule(sc, ctgs, ModelVariant::tg_scuc_cdr);
    s.contingency[0].cdr[1][0] = 5;   // line 1
    s.contingency[2].cdr[1][0] = 7;   // unit 1
    const CdrTotals t = cdr_totals(ctgs, s);
    CHECK(t.line_mw == 5.0);
    CHECK(t.generator_mw == 7.0);
}
