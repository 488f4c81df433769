#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gridsched/lp_solver.hpp"

using namespace gridsched;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double row_activity(const Row& row, const std::vector<double>& x) {
    double a = 0.0;
    for (const auto& t : row.terms) a += t.coef * x[t.var];
    return a;
}

// KKT certificate computed from scratch: primal feasibility, dual sign
// conditions, complementary slackness, and zero duality gap.
void check_kkt(const MilpModel& m, const LpSolution& s, double tol = 1e-6) {
    REQUIRE(s.status == LpStatus::optimal);
    const std::size_t n = m.num_vars();
    std::vector<double> d = m.objective;
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        const Row& row = m.rows[i];
        const double act = row_activity(row, s.x);
        const double y = s.row_duals[i];
        switch (row.sense) {
        case RowSense::less_equal:
            CHECK(act <= row.rhs + tol);
            CHECK(y <= tol);
            break;
        case RowSense::greater_equal:
            CHECK(act >= row.rhs - tol);
            CHECK(y >= -tol);
            break;
        case RowSense::equal:
            CHECK(act == doctest::Approx(row.rhs).epsilon(tol));
            break;
        }
        if (std::abs(act - row.rhs) > 1e-5) CHECK(std::abs(y) <= tol);
        for (const auto& t : row.terms) d[t.var] -= y * t.coef;
    }
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m.num_rows(); ++i) dual_obj += s.row_duals[i] * m.rows[i].rhs;
    double primal_obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        primal_obj += m.objective[j] * s.x[j];
        CHECK(s.x[j] >= m.lower[j] - tol);
        CHECK(s.x[j] <= m.upper[j] + tol);
        const bool at_lo = std::abs(s.x[j] - m.lower[j]) <= 1e-6;
        const bool at_hi = std::abs(s.x[j] - m.upper[j]) <= 1e-6;
        if (!at_lo) CHECK(d[j] <= tol);
        if (!at_hi) CHECK(d[j] >= -tol);
        dual_obj += d[j] * s.x[j];
        CHECK(d[j] == doctest::Approx(s.reduced_costs[j]).epsilon(1e-6).scale(1.0));
    }
    CHECK(primal_obj == doctest::Approx(s.objective).epsilon(1e-9).scale(1.0));
    CHECK(dual_obj == doctest::Approx(primal_obj).epsilon(1e-6).scale(1.0));
}

MilpModel textbook() {
    // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6,  x, y >= 0
    MilpModel m;
    const auto x = m.add_var(0, inf, -1);
    const auto y = m.add_var(0, inf, -1);
    m.add_row({{x, 1}, {y, 2}}, RowSense::less_equal, 4);
    m.add_row({{x, 3}, {y, 1}}, RowSense::less_equal, 6);
    return m;
}

}  // namespace

TEST_CASE("textbook LP") {
    const MilpModel m = textbook();
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.x[1] == doctest::Approx(1.2));
    CHECK(s.objective == doctest::Approx(-2.8));
    // d objective / d rhs, by hand from the two binding rows.
    CHECK(s.row_duals[0] == doctest::Approx(-0.4));
    CHECK(s.row_duals[1] == doctest::Approx(-0.2));
    check_kkt(m, s);
}

TEST_CASE("infeasible and unbounded LPs") {
    MilpModel inf_model;
    const auto x = inf_model.add_var(0, 10, 1);
    inf_model.add_row({{x, 1}}, RowSense::greater_equal, 11);
    CHECK(solve_lp(inf_model).status == LpStatus::infeasible);

    MilpModel crossed;
    crossed.add_var(5, 4, 1);
    CHECK(solve_lp(crossed).status == LpStatus::infeasible);

    MilpModel unb;
    const auto a = unb.add_var(0, inf, -1);
    const auto b = unb.add_var(0, inf, 0);
    unb.add_row({{a, 1}, {b, -1}}, RowSense::less_equal, 1);
    CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("equalities, free columns and upper bounds") {
    MilpModel m;
    const auto x = m.add_var(-inf, inf, 1);
    const auto y = m.add_var(0, 3, -2);
    const auto z = m.add_var(-5, 5, 1);
    m.add_row({{x, 1}, {y, 1}, {z, 1}}, RowSense::equal, 2);
    m.add_row({{x, 1}}, RowSense::greater_equal, -1);
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[1] == doctest::Approx(3));
    check_kkt(m, s);
}

TEST_CASE("empty LP") {
    MilpModel m;
    const auto x = m.add_var(1, 2, 3);
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x[x] == 1.0);
    CHECK(s.objective == 3.0);
}

TEST_CASE("degenerate LP terminates") {
    // Several rows meet at the optimum vertex (0, 0).
    MilpModel m;
    const auto x = m.add_var(0, inf, 1);
    const auto y = m.add_var(0, inf, 1);
    for (int k = 1; k <= 8; ++k) {
        m.add_row({{x, double(k)}, {y, -1}}, RowSense::greater_equal, 0);
        m.add_row({{x, -1}, {y, double(k)}}, RowSense::greater_equal, 0);
    }
    m.add_row({{x, 1}, {y, 1}}, RowSense::greater_equal, 0);
    const LpSolution s = solve_lp(m);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(0.0));
    check_kkt(m, s);
}

TEST_CASE("random LPs satisfy KKT") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-5, 5);
    std::uniform_int_distribution<int> size(1, 12);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        MilpModel m;
        const int n = size(rng), rows = size(rng);
        // A known interior point keeps the LP feasible; box bounds keep it bounded.
        std::vector<double> x0;
        for (int j = 0; j < n; ++j) {
            const double lo = std::round(coef(rng));
            m.add_var(lo, lo + 1 + std::abs(std::round(coef(rng))), std::round(coef(rng)));
            x0.push_back(lo + 0.5);
        }
        if (trial % 4 == 0) m.upper[0] = inf, m.objective[0] = std::abs(m.objective[0]);
        for (int i = 0; i < rows; ++i) {
            std::vector<Term> terms;
            double act = 0.0;
            for (int j = 0; j < n; ++j) {
                if (rng() % 2) continue;
                const double c = std::round(coef(rng));
                terms.push_back({std::size_t(j), c});
                act += c * x0[j];
            }
            const int kind = int(rng() % 3);
            const RowSense sense = kind == 0 ? RowSense::less_equal : kind == 1 ? RowSense::greater_equal : RowSense::equal;
            const double rhs = sense == RowSense::equal ? act : sense == RowSense::less_equal ? act + 1 : act - 1;
            m.add_row(terms, sense, rhs);
        }
        const LpSolution s = solve_lp(m);
        CAPTURE(trial);
        check_kkt(m, s);
        ++solved;
    }
    CHECK(solved == 200);
}

TEST_CASE("warm start gives the cold-start optimum") {
    const MilpModel m = textbook();
    const SimplexSolver solver(m);
    const LpSolution first = solver.solve();
    std::vector<double> lo = m.lower, hi = m.upper;
    hi[0] = 1.0;
    const LpSolution warm = solver.solve(lo, hi, &first.basis);
    const LpSolution cold = solver.solve(lo, hi);
    REQUIRE(warm.status == LpStatus::optimal);
    CHECK(warm.objective == doctest::Approx(cold.objective));
    CHECK(warm.objective == doctest::Approx(-2.5));  // x = 1, y = 1.5
}

TEST_CASE("rhs replacement") {
    const MilpModel m = textbook();
    const SimplexSolver solver(m);
    const LpSolution base = solver.solve();
    const double eps = 1e-3;
    const LpSolution bumped = solver.solve_with_rhs(std::vector<double>{4 + eps, 6}, &base.basis);
    REQUIRE(bumped.status == LpStatus::optimal);
    CHECK((bumped.objective - base.objective) / eps == doctest::Approx(base.row_duals[0]).epsilon(1e-6));
}
