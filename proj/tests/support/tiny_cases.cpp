#include "tiny_cases.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace testcases {

Generator unit(int id, int bus, double cost, double p_max, double no_load, double startup, double p_min) {
    Generator g;
    g.id = id;
    g.bus = bus;
    g.energy_cost = cost;
    g.no_load_cost = no_load;
    g.startup_cost = startup;
    g.p_min = p_min;
    g.p_max = p_max;
    g.ramp_hourly = p_max;
    g.ramp_startup = p_max;
    g.ramp_shutdown = p_max;
    g.ramp_10min = p_max;
    return g;
}

SystemCase make_case(int buses, const std::vector<std::vector<double>>& demand, double penalty) {
    SystemCase sc;
    sc.name = "tiny";
    sc.reference_bus = 1;
    for (int b = 1; b <= buses; ++b) {
        sc.buses.push_back({b, "bus" + std::to_string(b)});
    }
    sc.load.horizon = static_cast<int>(demand.front().size());
    sc.load.demand = demand;
    sc.cdr.cap_fraction = 0.3;
    sc.cdr.penalty.assign(static_cast<std::size_t>(buses), penalty);
    for (int b = 1; b <= buses; ++b) {
        for (double d : demand[static_cast<std::size_t>(b - 1)]) {
            if (d > 0) {
                sc.cdr.participating_buses.push_back(b);
                break;
            }
        }
    }
    return sc;
}

void add_line(SystemCase& sc, int id, int from, int to, double susceptance, double rate_normal,
              double rate_emergency) {
    gridsched::Line l;
    l.id = id;
    l.from_bus = from;
    l.to_bus = to;
    l.susceptance = susceptance;
    l.rate_normal = rate_normal;
    l.rate_emergency = rate_emergency;
    sc.lines.push_back(l);
}

SystemCase single_unit() {
    SystemCase sc = make_case(1, {{50.0}});
    sc.generators.push_back(unit(1, 1, 10.0, 100.0, 5.0, 100.0));
    return sc;
}

SystemCase slack_triangle() {
    SystemCase sc = make_case(3, {{0, 0}, {0, 0}, {40, 60}});
    add_line(sc, 1, 1, 2, 500, 500, 600);
    add_line(sc, 2, 2, 3, 500, 500, 600);
    add_line(sc, 3, 1, 3, 500, 500, 600);
    sc.generators.push_back(unit(1, 1, 10.0, 200.0, 5.0, 20.0));
    sc.generators.push_back(unit(2, 2, 12.0, 200.0, 5.0, 20.0));
    return sc;
}

SystemCase binding_line(double penalty) {
    SystemCase sc = make_case(2, {{0}, {100}}, penalty);
    add_line(sc, 1, 1, 2, 100, 60, 80);
    add_line(sc, 2, 1, 2, 100, 60, 80);
    sc.generators.push_back(unit(1, 1, 10.0, 100.0));
    sc.generators.push_back(unit(2, 1, 10.0, 100.0));
    sc.generators.push_back(unit(3, 2, 50.0, 100.0, 20.0, 200.0));
    return sc;
}

SystemCase feasibility_boundary() {
    SystemCase sc = make_case(2, {{0}, {100}});
    add_line(sc, 1, 1, 2, 100, 60, 80);
    add_line(sc, 2, 1, 2, 100, 60, 80);
    sc.generators.push_back(unit(1, 1, 10.0, 100.0));
    sc.generators.push_back(unit(2, 1, 12.0, 100.0));
    return sc;
}

RandomCase random_tiny(std::uint32_t seed) {
    std::mt19937 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto round1 = [](double x) { return std::round(x * 10.0) / 10.0; };

    const bool triangle = pick(0, 1) == 1;
    const int buses = triangle ? 3 : 2;
    const int T = pick(1, 2);
    const int units = pick(1, 2);

    std::vector<std::vector<double>> demand(static_cast<std::size_t>(buses));
    for (auto& row : demand) {
        for (int t = 0; t < T; ++t) row.push_back(pick(0, 2) == 0 ? 0.0 : round1(uniform(5.0, 45.0)));
    }
    RandomCase out;
    out.system = make_case(buses, demand, round1(uniform(0.0, 200.0)));
    SystemCase& sc = out.system;
    sc.name = "random" + std::to_string(seed);

    if (triangle) {
        add_line(sc, 1, 1, 2, round1(uniform(50, 300)), round1(uniform(50, 150)), 0);
        add_line(sc, 2, 2, 3, round1(uniform(50, 300)), round1(uniform(50, 150)), 0);
        add_line(sc, 3, 1, 3, round1(uniform(50, 300)), round1(uniform(50, 150)), 0);
    } else {
        add_line(sc, 1, 1, 2, round1(uniform(50, 300)), round1(uniform(50, 150)), 0);
        add_line(sc, 2, 1, 2, round1(uniform(50, 300)), round1(uniform(50, 150)), 0);
    }
    for (auto& l : sc.lines) l.rate_emergency = round1(l.rate_normal * uniform(1.0, 1.5));

    for (int g = 1; g <= units; ++g) {
        const double p_max = round1(uniform(60, 150));
        Generator gen = unit(g, pick(1, buses), round1(uniform(5, 40)), p_max, round1(uniform(0, 50)),
                             round1(uniform(0, 300)), round1(uniform(0, 0.15) * p_max));
        gen.ramp_10min = round1(p_max * uniform(0.4, 1.0));
        gen.ramp_hourly = round1(p_max * uniform(0.5, 1.0));
        gen.ramp_startup = std::max(gen.p_min, round1(p_max * uniform(0.5, 1.0)));
        gen.ramp_shutdown = std::max(gen.p_min, round1(p_max * uniform(0.3, 1.0)));
        gen.min_up = pick(1, 2);
        gen.min_down = pick(1, 2);
        gen.initial_on = pick(0, 2) == 0;
        sc.generators.push_back(gen);
    }
    // A lone unit cannot carry output under the reserve coverage rows.
    out.formulation.reserve_coverage = units > 1;
    return out;
}

}  // namespace testcases
