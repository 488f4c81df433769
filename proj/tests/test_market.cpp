#include <doctest.h>

#include "gridsched/lp_solver.hpp"
#include "gridsched/market.hpp"
#include "gridsched/milp_solver.hpp"
#include "tiny_cases.hpp"

using namespace gridsched;

namespace {

ScheduleSolution solve_schedule(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant,
                                const FormulationOptions& opt = {}) {
    const MilpModel m = assemble_model(sc, ctgs, variant, opt);
    const MilpSolution s = solve_milp(m);
    REQUIRE(s.status == MilpStatus::optimal);
    return to_schedule(m, s.x, variant, s.objective);
}

// Central finite difference of the fixed-commitment LP objective with
// respect to one base-case balance row.
double fd_price(const SystemCase& sc, const ContingencySet& ctgs, ModelVariant variant, const ScheduleSolution& s,
                std::size_t bus, int hour, const FormulationOptions& opt = {}) {
    const MilpModel m = fixed_commitment_model(sc, ctgs, variant, s, opt);
    const SimplexSolver lp(m);
    const std::size_t row = balance_rows(m)[bus][static_cast<std::size_t>(hour - 1)];
    std::vector<double> rhs;
    for (const auto& r : m.rows) rhs.push_back(r.rhs);
    const double eps = 1e-3;
    rhs[row] += eps;
    const LpSolution up = lp.solve_with_rhs(rhs);
    rhs[row] -= 2 * eps;
    const LpSolution down = lp.solve_with_rhs(rhs);
    REQUIRE(up.status == LpStatus::optimal);
    REQUIRE(down.status == LpStatus::optimal);
    return (up.objective - down.objective) / (2 * eps);
}

SystemCase two_bus(double rate_normal, double rate_emergency) {
    SystemCase sc = testcases::make_case(2, {{0}, {100}});
    testcases::add_line(sc, 1, 1, 2, 100, rate_normal, rate_emergency);
    testcases::add_line(sc, 2, 1, 2, 100, rate_normal, rate_emergency);
    sc.generators.push_back(testcases::unit(1, 1, 10, 100));
    sc.generators.push_back(testcases::unit(2, 1, 10, 100));
    sc.generators.push_back(testcases::unit(3, 2, 50, 100));
    return sc;
}

}  // namespace

TEST_CASE("single bus price equals the marginal energy cost") {
    SystemCase sc = testcases::single_unit();
    sc.generators[0].energy_cost = 20;
    FormulationOptions opt;
    opt.reserve_coverage = false;
    const ScheduleSolution s = solve_schedule(sc, {}, ModelVariant::t_scuc, opt);
    const HourlySeries lmp = compute_lmp(sc, {}, ModelVariant::t_scuc, s, opt);
    CHECK(lmp[0][0] == doctest::Approx(20.0));
}

TEST_CASE("uncongested network has a uniform price") {
    const SystemCase sc = two_bus(200, 200);
    const ContingencySet ctgs = contingencies_for(sc, ModelVariant::t_scuc);
    const ScheduleSolution s = solve_schedule(sc, ctgs, ModelVariant::t_scuc);
    const HourlySeries lmp = compute_lmp(sc, ctgs, ModelVariant::t_scuc, s);
    CHECK(lmp[0][0] == doctest::Approx(10.0));
    CHECK(lmp[1][0] == doctest::Approx(10.0));
}

TEST_CASE("congestion separates prices") {
    // Two 30 MW circuits into bus 2 (emergency 60): 60 MW is imported,
    // the local 50 $/MWh unit covers the rest. Reserve coverage is off:
    // with it the cheapest commitment leaves the bus 1 price degenerate.
    const SystemCase sc = two_bus(30, 60);
    FormulationOptions opt;
    opt.reserve_coverage = false;
    const ContingencySet ctgs = contingencies_for(sc, ModelVariant::t_scuc);
    const ScheduleSolution s = solve_schedule(sc, ctgs, ModelVariant::t_scuc, opt);
    CHECK(s.P[2][0] == doctest::Approx(40.0));
    const HourlySeries lmp = compute_lmp(sc, ctgs, ModelVariant::t_scuc, s, opt);
    CHECK(lmp[0][0] == doctest::Approx(10.0));
    CHECK(lmp[1][0] == doctest::Approx(50.0));
    CHECK(fd_price(sc, ctgs, ModelVariant::t_scuc, s, 0, 1, opt) == doctest::Approx(lmp[0][0]).epsilon(1e-4));
    CHECK(fd_price(sc, ctgs, ModelVariant::t_scuc, s, 1, 1, opt) == doctest::Approx(lmp[1][0]).epsilon(1e-4));
}

TEST_CASE("fixed-commitment LP pins binaries") {
    const SystemCase sc = two_bus(30, 60);
    const ContingencySet ctgs = contingencies_for(sc, ModelVariant::t_scuc);
    const ScheduleSolution s = solve_schedule(sc, ctgs, ModelVariant::t_scuc);
    const MilpModel m = fixed_commitment_model(sc, ctgs, ModelVariant::t_scuc, s);
    for (std::size_t j = 0; j < m.num_vars(); ++j) CHECK_FALSE(m.integer[j]);
    CHECK(m.lower[m.index->u(2, 1)] == 1.0);
    CHECK(m.upper[m.index->u(2, 1)] == 1.0);
}

TEST_CASE("settlement arithmetic") {
    SystemCase sc = testcases::make_case(1, {{100}});
    sc.generators.push_back(testcases::unit(1, 1, 10, 200));
    ScheduleSolution s = empty_schedule(sc, {}, ModelVariant::t_scuc);
    s.u[0][0] = 1;
    s.v[0][0] = 1;
    s.P[0][0] = 100;
    const MarketReport r = market_summary(sc, HourlySeries{{10.0}}, s);
    CHECK(r.load_payment == 1000.0);
    CHECK(r.generator_revenue == 1000.0);
    CHECK(r.average_lmp == 10.0);
    CHECK(r.commitment.always_on == 1);
    CHECK(r.commitment.startups_first_hour == 1);
    CHECK(r.commitment.startups_later == 0);
    CHECK(r.commitment.total_commitment == 1);
}

TEST_CASE("all-off schedule") {
    const SystemCase sc = testcases::slack_triangle();
    const ScheduleSolution s = empty_schedule(sc, contingencies_for(sc, ModelVariant::t_scuc), ModelVariant::t_scuc);
    const HourlySeries lmp(3, std::vector<double>(2, 7.0));
    const MarketReport r = market_summary(sc, lmp, s);
    CHECK(r.commitment.total_commitment == 0);
    CHECK(r.commitment.always_off == sc.generators.size());
    CHECK(r.generator_revenue == 0.0);
    CHECK(r.load_payment == doctest::Approx(7.0 * 100));
}

TEST_CASE("commitment classes partition the fleet") {
    SystemCase sc = testcases::make_case(1, {{10, 20, 30}});
    for (int g = 1; g <= 3; ++g) sc.generators.push_back(testcases::unit(g, 1, 10, 100));
    ScheduleSolution s = empty_schedule(sc, {}, ModelVariant::t_scuc);
    s.u[0] = {1, 1, 1};
    s.v[0] = {1, 0, 0};
    s.u[1] = {0, 1, 1};
    s.v[1] = {0, 1, 0};
    const CommitmentSummary c = summarize_commitment(sc, s);
    CHECK(c.always_on == 1);
    CHECK(c.marginal == 1);
    CHECK(c.always_off == 1);
    CHECK(c.always_on + c.marginal + c.always_off == 3);
    CHECK(c.startups_first_hour == 1);
    CHECK(c.startups_later == 1);
    CHECK(c.total_commitment == 5);
    CHECK(c.generators[1].status == CommitmentClass::marginal);
}

TEST_CASE("shape errors") {
    const SystemCase sc = testcases::slack_triangle();
    const ScheduleSolution s = empty_schedule(sc, {}, ModelVariant::t_scuc);
    CHECK_THROWS_AS(market_summary(sc, HourlySeries{{1.0}}, s), ShapeError);
}
