#include "gridsched/grid_analysis.hpp"

#include <algorithm>
#include <utility>

namespace gridsched {

std::string_view kind_name(ContingencyKind kind) {
    return kind == ContingencyKind::line ? "line" : "generator";
}

std::vector<int> find_bridges(const SystemCase& sc) {
    const std::size_t n = sc.buses.size();
    if (n == 0) {
        return {};
    }
    // Adjacency carries line positions so that parallel circuits stay distinct.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacent(n);
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        std::size_t a = sc.bus_position(sc.lines[k].from_bus);
        std::size_t b = sc.bus_position(sc.lines[k].to_bus);
        adjacent[a].emplace_back(b, k);
        adjacent[b].emplace_back(a, k);
    }

    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    constexpr std::size_t no_edge = static_cast<std::size_t>(-1);
    std::vector<std::size_t> order(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<int> bridges;

    struct Frame {
        std::size_t bus;
        std::size_t via_line;
        std::size_t next_neighbour;
    };
    std::vector<Frame> stack;
    std::size_t counter = 0;
    const std::size_t root = sc.bus_position(sc.reference_bus);
    order[root] = low[root] = counter++;
    stack.push_back({root, no_edge, 0});

    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next_neighbour < adjacent[top.bus].size()) {
            auto [next, line] = adjacent[top.bus][top.next_neighbour++];
            if (line == top.via_line) {
                continue;
            }
            if (order[next] == unvisited) {
                order[next] = low[next] = counter++;
                stack.push_back({next, line, 0});
            } else {
                low[top.bus] = std::min(low[top.bus], order[next]);
            }
            continue;
        }
        Frame done = top;
        stack.pop_back();
        if (!stack.empty()) {
            std::size_t parent = stack.back().bus;
            low[parent] = std::min(low[parent], low[done.bus]);
            if (low[done.bus] > order[parent]) {
                bridges.push_back(sc.lines[done.via_line].id);
            }
        }
    }

    if (counter != n) {
        throw TopologyError("network is disconnected: " + std::to_string(counter) + " of " +
                            std::to_string(n) + " buses reachable");
    }
    std::sort(bridges.begin(), bridges.end());
    return bridges;
}

ContingencySet build_contingency_set(const SystemCase& sc, bool include_lines, bool include_generators) {
    if (!include_lines && !include_generators) {
        throw TopologyError("contingency set needs line and/or generator outages");
    }
    ContingencySet set;
    set.includes_lines = include_lines;
    set.includes_generators = include_generators;

    if (include_lines) {
        const auto bridges = find_bridges(sc);
        std::vector<int> candidates;
        for (const auto& line : sc.lines) {
            if (!std::binary_search(bridges.begin(), bridges.end(), line.id)) {
                candidates.push_back(line.id);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        if (candidates.empty()) {
            throw TopologyError("every line is radial; no line contingencies exist");
        }
        const double p = 1.0 / static_cast<double>(candidates.size());
        for (int id : candidates) {
            set.contingencies.push_back({ContingencyKind::line, id, p});
        }
    }
    if (include_generators) {
        if (sc.generators.empty()) {
            throw TopologyError("no generators; generator contingencies are undefined");
        }
        const double p = 1.0 / static_cast<double>(sc.generators.size());
        std::vector<int> ids;
        for (const auto& g : sc.generators) {
            ids.push_back(g.id);
        }
        std::sort(ids.begin(), ids.end());
        for (int id : ids) {
            set.contingencies.push_back({ContingencyKind::generator, id, p});
        }
    }
    return set;
}

}  // namespace gridsched
