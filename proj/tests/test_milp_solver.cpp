#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gridsched/milp_solver.hpp"
#include "tiny_cases.hpp"

using namespace gridsched;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Enumerated {
    bool feasible = false;
    double objective = inf;
};

// Exhaustive search over small pure-integer models.
Enumerated enumerate(const MilpModel& m) {
    Enumerated best;
    const std::size_t n = m.num_vars();
    std::vector<double> x(m.lower);
    while (true) {
        bool ok = true;
        for (const auto& row : m.rows) {
            double a = 0.0;
            for (const auto& t : row.terms) a += t.coef * x[t.var];
            ok = ok && (row.sense == RowSense::less_equal      ? a <= row.rhs + 1e-9
                        : row.sense == RowSense::greater_equal ? a >= row.rhs - 1e-9
                                                               : std::abs(a - row.rhs) <= 1e-9);
        }
        if (ok) {
            double obj = 0.0;
            for (std::size_t j = 0; j < n; ++j) obj += m.objective[j] * x[j];
            if (obj < best.objective) best = {true, obj};
        }
        std::size_t j = 0;
        while (j < n && ++x[j] > m.upper[j]) {
            x[j] = m.lower[j];
            ++j;
        }
        if (j == n) break;
    }
    return best;
}

}  // namespace

TEST_CASE("single unit commitment costs 605") {
    // c=10, NL=5, SU=100, d=50: 10*50 + 5 + 100.
    const SystemCase sc = testcases::single_unit();
    FormulationOptions opt;
    opt.reserve_coverage = false;
    const MilpModel m = assemble_model(sc, ContingencySet{}, ModelVariant::t_scuc, opt);
    const MilpSolution s = solve_milp(m);
    REQUIRE(s.status == MilpStatus::optimal);
    CHECK(s.objective == doctest::Approx(605.0));
    const VariableIndex& ix = *m.index;
    CHECK(s.x[ix.u(0, 1)] == 1.0);
    CHECK(s.x[ix.v(0, 1)] == 1.0);
    CHECK(s.x[ix.P(0, 1)] == doctest::Approx(50.0));
    REQUIRE(s.achieved_gap.has_value());
    CHECK(*s.achieved_gap == 0.0);
}

TEST_CASE("zero demand keeps everything off") {
    SystemCase sc = testcases::single_unit();
    sc.load.demand = {{0.0}};
    const MilpModel m = assemble_model(sc, ContingencySet{}, ModelVariant::t_scuc);
    const MilpSolution s = solve_milp(m);
    REQUIRE(s.status == MilpStatus::optimal);
    CHECK(s.objective == doctest::Approx(0.0));
    CHECK(s.x[m.index->u(0, 1)] == 0.0);
}

TEST_CASE("random integer programs match enumeration") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-6, 6);
    int feasible = 0;
    for (int trial = 0; trial < 150; ++trial) {
        MilpModel m;
        const int n = 2 + int(rng() % 4);
        for (int j = 0; j < n; ++j) m.add_var(0, 1 + rng() % 3, coef(rng), true);
        const int rows = 1 + int(rng() % 4);
        for (int i = 0; i < rows; ++i) {
            std::vector<Term> terms;
            for (int j = 0; j < n; ++j) terms.push_back({std::size_t(j), double(coef(rng))});
            m.add_row(terms, rng() % 2 ? RowSense::less_equal : RowSense::greater_equal, coef(rng));
        }
        const Enumerated oracle = enumerate(m);
        const MilpSolution s = solve_milp(m);
        CAPTURE(trial);
        if (!oracle.feasible) {
            CHECK(s.status == MilpStatus::infeasible);
            continue;
        }
        ++feasible;
        REQUIRE(s.status == MilpStatus::optimal);
        CHECK(s.objective == doctest::Approx(oracle.objective).epsilon(1e-9).scale(1.0));
    }
    CHECK(feasible > 50);
}

TEST_CASE("mixed model with continuous part") {
    // Fixed-charge choice: y in {0,1} opens capacity 10 at cost 7;
    // x <= 10 y, x >= 4, cost 1 per unit; or z (no fixed cost) at 3/unit, z <= 6.
    MilpModel m;
    const auto y = m.add_var(0, 1, 7, true);
    const auto x = m.add_var(0, inf, 1);
    const auto z = m.add_var(0, 6, 3);
    m.add_row({{x, 1}, {y, -10}}, RowSense::less_equal, 0);
    m.add_row({{x, 1}, {z, 1}}, RowSense::greater_equal, 4);
    const MilpSolution s = solve_milp(m);
    REQUIRE(s.status == MilpStatus::optimal);
    CHECK(s.objective == doctest::Approx(11.0));  // open y, x = 4 (z alone would cost 12)
}

TEST_CASE("gap target is honoured and reported") {
    const auto rc = testcases::random_tiny(3);
    const ModelVariant variant = ModelVariant::tg_scuc_cdr;
    const MilpModel m = assemble_model(rc.system, contingencies_for(rc.system, variant), variant, rc.formulation);
    MilpOptions loose;
    loose.gap_target = 0.05;
    const MilpSolution a = solve_milp(m, loose);
    const MilpSolution exact = solve_milp(m);
    if (has_solution(exact.status)) {
        REQUIRE(has_solution(a.status));
        CHECK(*a.achieved_gap <= 0.05 + 1e-12);
        CHECK(a.objective >= exact.objective - 1e-9);
        CHECK(a.best_bound <= exact.objective + 1e-6);
    }
}

TEST_CASE("node limit without incumbent is unknown, not infeasible") {
    MilpModel m;
    for (int j = 0; j < 6; ++j) m.add_var(0, 1, 0, true);
    std::vector<Term> terms;
    for (int j = 0; j < 6; ++j) terms.push_back({std::size_t(j), 2.0});
    m.add_row(terms, RowSense::equal, 5);  // even = odd: infeasible, LP relaxation is not
    MilpOptions opts;
    opts.node_limit = 1;
    CHECK(solve_milp(m, opts).status == MilpStatus::unknown);
    CHECK(solve_milp(m).status == MilpStatus::infeasible);
}

TEST_CASE("repeat solves are identical") {
    const auto rc = testcases::random_tiny(8);
    const MilpModel m = assemble_model(rc.system, contingencies_for(rc.system, ModelVariant::tg_scuc),
                                       ModelVariant::tg_scuc, rc.formulation);
    const MilpSolution a = solve_milp(m);
    const MilpSolution b = solve_milp(m);
    CHECK(a.status == b.status);
    CHECK(a.x == b.x);
    CHECK(a.node_count == b.node_count);
}
