#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "gridsched/case_model.hpp"

namespace gridsched {

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ContingencyKind { line, generator };

std::string_view kind_name(ContingencyKind kind);

struct Contingency {
    ContingencyKind kind = ContingencyKind::line;
    int element_id = 0;
    double probability = 0.0;

    bool operator==(const Contingency&) const = default;
};

/// Ordered outage scenarios: lines by id, then generators by id.
struct ContingencySet {
    std::vector<Contingency> contingencies;
    bool includes_lines = false;
    bool includes_generators = false;

    std::size_t size() const { return contingencies.size(); }
    bool empty() const { return contingencies.empty(); }
    const Contingency& operator[](std::size_t i) const { return contingencies[i]; }
    auto begin() const { return contingencies.begin(); }
    auto end() const { return contingencies.end(); }

    bool operator==(const ContingencySet&) const = default;
};

/// Ids of the lines whose removal disconnects the bus graph. Parallel
/// circuits are never bridges. Throws TopologyError when the input graph
/// is already disconnected.
std::vector<int> find_bridges(const SystemCase& system);

/// One outage per non-radial line (probability 1/|non-radial|) and/or one
/// per generator (probability 1/|G|).
ContingencySet build_contingency_set(const SystemCase& system, bool include_lines, bool include_generators);

}  // namespace gridsched
