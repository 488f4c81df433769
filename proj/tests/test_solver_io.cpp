#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gridsched/milp_solver.hpp"
#include "gridsched/solver_io.hpp"
#include "mps_reader.hpp"
#include "tiny_cases.hpp"

using namespace gridsched;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Field-by-field comparison of a model against what an independent
// reader recovers from its MPS text.
void check_same(const MilpModel& m, const testmps::MpsProblem& p) {
    const NameMap names(m);
    REQUIRE(p.columns.size() == m.num_vars());
    REQUIRE(p.rows.size() == m.num_rows());
    for (std::size_t j = 0; j < m.num_vars(); ++j) {
        CHECK(p.columns[j] == names.column_name(j));
        CHECK(p.cost[j] == m.objective[j]);
        CHECK(p.lower[j] == m.lower[j]);
        CHECK(p.upper[j] == m.upper[j]);
        CHECK(p.integer[j] == m.integer[j]);
    }
    std::size_t nonzeros = 0;
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        const Row& row = m.rows[i];
        CHECK(p.rows[i].name == names.row_name(i));
        CHECK(p.rows[i].rhs == row.rhs);
        const char expected = row.sense == RowSense::equal ? 'E' : row.sense == RowSense::less_equal ? 'L' : 'G';
        CHECK(p.rows[i].type == expected);
        for (const auto& t : row.terms) {
            auto it = p.matrix.find({i, t.var});
            REQUIRE(it != p.matrix.end());
            CHECK(it->second == t.coef);
            ++nonzeros;
        }
    }
    CHECK(p.matrix.size() == nonzeros);
}

MilpModel tiny_model(ModelVariant variant) {
    const SystemCase sc = testcases::binding_line(10.0);
    return assemble_model(sc, contingencies_for(sc, variant), variant);
}

}  // namespace

TEST_CASE("number formatting is shortest round trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(100.0) == "100");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_number(-2.5) == "-2.5");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = d(rng) * std::pow(10.0, double(int(rng() % 20)) - 10);
        CHECK(std::stod(format_number(x)) == x);
    }
}

TEST_CASE("one-variable LP") {
    MilpModel m;
    m.name = "one";
    m.add_var(0, 4, 2.5);
    const MpsExport e = export_mps(m);
    CHECK(e.text ==
          "NAME one\n"
          "ROWS\n"
          " N OBJ\n"
          "COLUMNS\n"
          "    x0 OBJ 2.5\n"
          "RHS\n"
          "BOUNDS\n"
          "    UP BND x0 4\n"
          "ENDATA\n");
    check_same(m, testmps::read_mps(e.text));
}

TEST_CASE("bound kinds") {
    MilpModel m;
    m.add_var(-inf, inf, 0);       // FR
    m.add_var(-inf, 3, 0);         // MI + UP
    m.add_var(2, 2, 0);            // FX
    m.add_var(-1, inf, 0);         // LO
    m.add_var(0, 1, 1, true);      // BV
    m.add_var(0, inf, 1, true);    // PL
    m.add_var(0, 5, 1, true);      // UP
    m.add_row({{0, 1}, {1, 1}}, RowSense::greater_equal, -3);
    check_same(m, testmps::read_mps(export_mps(m).text));
}

TEST_CASE("scheduling models survive the MPS round trip") {
    for (ModelVariant variant : all_variants) {
        const MilpModel m = tiny_model(variant);
        const MpsExport e = export_mps(m);
        const testmps::MpsProblem p = testmps::read_mps(e.text);
        CHECK(p.rows.size() == m.num_rows());
        check_same(m, p);
        CHECK(export_mps(m).text == e.text);
    }
}

TEST_CASE("binaries sit inside integer markers with BV bounds") {
    const MilpModel m = tiny_model(ModelVariant::t_scuc);
    const std::string text = export_mps(m).text;
    const auto org = text.find("'INTORG'");
    const auto end = text.find("'INTEND'");
    REQUIRE(org != std::string::npos);
    REQUIRE(end != std::string::npos);
    const auto u_entry = text.find("    u_g1_t1 ");
    CHECK(u_entry > org);
    CHECK(u_entry < end);
    CHECK(text.find("    BV BND u_g1_t1\n") != std::string::npos);
    CHECK(text.find("    BV BND P_g1_t1\n") == std::string::npos);
}

TEST_CASE("name map round trip") {
    const MilpModel m = tiny_model(ModelVariant::tg_scuc_cdr);
    const NameMap names(m);
    for (std::size_t j = 0; j < m.num_vars(); ++j) {
        CHECK(valid_mps_name(names.column_name(j)));
        CHECK(names.column(names.column_name(j)) == j);
    }
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        CHECK(names.row(names.row_name(i)) == i);
    }
    CHECK_FALSE(names.column("bogus").has_value());
}

TEST_CASE("invalid names are rejected") {
    MilpModel m;
    m.add_var(0, 1, 0);
    m.add_row({{0, 1}}, RowSense::less_equal, 1, RowTag{Equation::custom, 0, 0, no_contingency, 0, "bad name"});
    CHECK_THROWS_AS(NameMap{m}, MpsError);
    CHECK_FALSE(valid_mps_name(""));
    CHECK_FALSE(valid_mps_name(std::string(256, 'a')));
    CHECK(valid_mps_name("a(1)_B"));
}

TEST_CASE("import recomputes the objective") {
    const SystemCase sc = testcases::single_unit();
    FormulationOptions opt;
    opt.reserve_coverage = false;
    const MilpModel m = assemble_model(sc, ContingencySet{}, ModelVariant::t_scuc, opt);
    const NameMap names(m);
    const ImportedSolution s = import_solution("# optimum\nP_g1_t1 50\nu_g1_t1 1  # on\nv_g1_t1 1\n", names, m);
    CHECK(s.solution.status == MilpStatus::feasible);
    CHECK(s.solution.objective == 605.0);
    CHECK(s.missing == 2);  // r and theta
    CHECK_FALSE(s.solution.achieved_gap.has_value());
}

TEST_CASE("empty solution file") {
    const MilpModel m = tiny_model(ModelVariant::t_scuc);
    const ImportedSolution s = import_solution("", NameMap(m), m);
    CHECK(s.missing == m.num_vars());
    CHECK(s.solution.objective == 0.0);
    for (double x : s.solution.x) CHECK(x == 0.0);
}

TEST_CASE("import errors") {
    const MilpModel m = tiny_model(ModelVariant::t_scuc);
    const NameMap names(m);
    CHECK_THROWS_WITH_AS(import_solution("bogus 1\n", names, m), "line 1: unknown variable 'bogus'", MpsError);
    CHECK_THROWS_AS(import_solution("P_g1_t1\n", names, m), MpsError);
    CHECK_THROWS_AS(import_solution("P_g1_t1 abc\n", names, m), MpsError);
    CHECK_THROWS_AS(import_solution("P_g1_t1 1 2\n", names, m), MpsError);
    CHECK_THROWS_AS(import_solution("P_g1_t1 1\nP_g1_t1 2\n", names, m), MpsError);
}

TEST_CASE("solver output round trips through the solution file") {
    const MilpModel m = tiny_model(ModelVariant::tg_scuc_cdr);
    const MilpSolution s = solve_milp(m);
    REQUIRE(s.status == MilpStatus::optimal);
    const NameMap names(m);
    const ImportedSolution back = import_solution(write_solution_file(m, names, s.x), names, m);
    CHECK(back.missing == 0);
    CHECK(back.solution.x == s.x);
    double expected = 0.0;
    for (std::size_t j = 0; j < m.num_vars(); ++j) expected += m.objective[j] * s.x[j];
    CHECK(back.solution.objective == expected);
    CHECK(back.solution.objective == doctest::Approx(s.objective).epsilon(1e-9));
}
