#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridsched {

/// Raised by the case parser. The message names the offending field or
/// the line/column of a syntax error.
class CaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bus {
    int id = 0;
    std::string name;

    bool operator==(const Bus&) const = default;
};

struct Generator {
    int id = 0;
    int bus = 0;
    double energy_cost = 0.0;   // $/MWh
    double no_load_cost = 0.0;  // $/h while committed
    double startup_cost = 0.0;  // $ per start
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp_hourly = 0.0;
    double ramp_startup = 0.0;
    double ramp_shutdown = 0.0;
    double ramp_10min = 0.0;
    int min_up = 1;
    int min_down = 1;
    bool initial_on = false;

    bool operator==(const Generator&) const = default;
};

/// Positive flow runs from `from_bus` to `to_bus`.
struct Line {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double susceptance = 0.0;  // MW/rad
    double rate_normal = 0.0;
    double rate_emergency = 0.0;

    bool operator==(const Line&) const = default;
};

struct LoadProfile {
    int horizon = 0;
    // demand[bus position][hour - 1], MW
    std::vector<std::vector<double>> demand;

    bool operator==(const LoadProfile&) const = default;
};

struct CdrConfig {
    double cap_fraction = 0.3;
    std::vector<double> penalty;          // $/MWh, aligned with SystemCase::buses
    std::vector<int> participating_buses; // bus ids, ascending

    bool operator==(const CdrConfig&) const = default;
};

/// A complete static problem instance. Buses are kept sorted by id, and
/// every per-bus vector (load rows, CDR penalties) follows that order.
struct SystemCase {
    std::string name;
    int reference_bus = 0;
    std::vector<Bus> buses;
    std::vector<Generator> generators;
    std::vector<Line> lines;
    LoadProfile load;
    CdrConfig cdr;

    int horizon() const { return load.horizon; }

    /// Position of a bus id in `buses`; throws CaseError if absent.
    std::size_t bus_position(int bus_id) const;
    bool has_bus(int bus_id) const;
    std::size_t generator_position(int gen_id) const;
    std::size_t line_position(int line_id) const;

    bool participates(std::size_t bus_pos) const;

    double demand(std::size_t bus_pos, int hour) const { return load.demand[bus_pos][hour - 1]; }
    double hourly_total(int hour) const;
    double peak_demand() const;
    double total_capacity() const;

    bool operator==(const SystemCase&) const = default;
};

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string field;
    std::string message;
};

/// Parses and validates a case document. Throws CaseError on syntax
/// errors, dangling references, duplicate ids and invariant violations.
SystemCase parse_case(std::string_view text);
SystemCase load_case_file(const std::string& path);

/// Canonical JSON text for a case. Reparsing yields an equal SystemCase.
std::string serialize_case(const SystemCase& system);

/// Multiplies every nodal demand by `factor` (> 0).
SystemCase scale_loads(const SystemCase& system, double factor);

/// All invariant checks; an empty result means the case is usable. A
/// capacity shortfall against peak demand is reported as a warning.
std::vector<Diagnostic> validate_case(const SystemCase& system);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Number of buses reachable from `start_bus_pos` over in-service lines.
/// `skip_line_pos` removes one line from the graph (npos keeps all).
std::size_t reachable_bus_count(const SystemCase& system, std::size_t start_bus_pos,
                                std::size_t skip_line_pos = static_cast<std::size_t>(-1));

}  // namespace gridsched
