#include "gridsched/case_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gridsched {

using nlohmann::json;

namespace {

template <typename T, typename Id>
std::size_t position_by_id(const std::vector<T>& items, Id id_of, int id, const char* what) {
    auto it = std::lower_bound(items.begin(), items.end(), id,
                               [&](const T& item, int key) { return id_of(item) < key; });
    if (it == items.end() || id_of(*it) != id) {
        throw CaseError("unknown " + std::string(what) + " " + std::to_string(id));
    }
    return static_cast<std::size_t>(it - items.begin());
}

// Byte offset -> "line L, column C" for parser diagnostics.
std::string locate(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& member(const json& object, const char* key, const std::string& where) {
    if (!object.is_object()) {
        throw CaseError(where + ": expected an object");
    }
    auto it = object.find(key);
    if (it == object.end()) {
        throw CaseError(where + "." + key + ": missing field");
    }
    return *it;
}

double number(const json& object, const char* key, const std::string& where) {
    const json& value = member(object, key, where);
    if (!value.is_number()) {
        throw CaseError(where + "." + key + ": expected a number");
    }
    double out = value.get<double>();
    if (!std::isfinite(out)) {
        throw CaseError(where + "." + key + ": must be finite");
    }
    return out;
}

int integer(const json& object, const char* key, const std::string& where) {
    const json& value = member(object, key, where);
    if (!value.is_number_integer()) {
        throw CaseError(where + "." + key + ": expected an integer");
    }
    return value.get<int>();
}

int parse_bus_key(const std::string& key, const std::string& where) {
    std::size_t consumed = 0;
    int id = 0;
    try {
        id = std::stoi(key, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != key.size() || key.empty()) {
        throw CaseError(where + ": key \"" + key + "\" is not a bus id");
    }
    return id;
}

const json& array_member(const json& object, const char* key, const std::string& where) {
    const json& value = member(object, key, where);
    if (!value.is_array()) {
        throw CaseError(where + "." + key + ": expected an array");
    }
    return value;
}

std::string indexed(const char* section, std::size_t i) {
    return std::string(section) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::size_t SystemCase::bus_position(int bus_id) const {
    return position_by_id(buses, [](const Bus& b) { return b.id; }, bus_id, "bus");
}

bool SystemCase::has_bus(int bus_id) const {
    auto it = std::lower_bound(buses.begin(), buses.end(), bus_id,
                               [](const Bus& b, int key) { return b.id < key; });
    return it != buses.end() && it->id == bus_id;
}

std::size_t SystemCase::generator_position(int gen_id) const {
    return position_by_id(generators, [](const Generator& g) { return g.id; }, gen_id, "generator");
}

std::size_t SystemCase::line_position(int line_id) const {
    return position_by_id(lines, [](const Line& l) { return l.id; }, line_id, "line");
}

bool SystemCase::participates(std::size_t bus_pos) const {
    return std::binary_search(cdr.participating_buses.begin(), cdr.participating_buses.end(),
                              buses[bus_pos].id);
}

double SystemCase::hourly_total(int hour) const {
    double total = 0.0;
    for (const auto& row : load.demand) {
        total += row[hour - 1];
    }
    return total;
}

double SystemCase::peak_demand() const {
    double peak = 0.0;
    for (int t = 1; t <= load.horizon; ++t) {
        peak = std::max(peak, hourly_total(t));
    }
    return peak;
}

double SystemCase::total_capacity() const {
    double total = 0.0;
    for (const auto& g : generators) {
        total += g.p_max;
    }
    return total;
}

SystemCase parse_case(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        auto pos = what.find("syntax error");
        throw CaseError("syntax error at " + locate(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                        (pos == std::string::npos ? what : what.substr(pos)));
    }
    if (!doc.is_object()) {
        throw CaseError("document: expected a JSON object");
    }

    SystemCase sc;
    const std::string root = "document";
    if (auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) {
            throw CaseError("name: expected a string");
        }
        sc.name = it->get<std::string>();
    }
    sc.reference_bus = integer(doc, "reference_bus", root);
    sc.load.horizon = integer(doc, "horizon", root);
    if (sc.load.horizon < 1) {
        throw CaseError("horizon: must be at least 1");
    }

    const json& buses = array_member(doc, "buses", root);
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const std::string where = indexed("buses", i);
        Bus b;
        b.id = integer(buses[i], "id", where);
        if (auto it = buses[i].find("name"); it != buses[i].end() && it->is_string()) {
            b.name = it->get<std::string>();
        }
        sc.buses.push_back(std::move(b));
    }
    std::sort(sc.buses.begin(), sc.buses.end(), [](const Bus& a, const Bus& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < sc.buses.size(); ++i) {
        if (sc.buses[i].id == sc.buses[i - 1].id) {
            throw CaseError("buses: duplicate id " + std::to_string(sc.buses[i].id));
        }
    }
    if (sc.buses.empty()) {
        throw CaseError("buses: at least one bus is required");
    }

    auto require_bus = [&](int id, const std::string& where) {
        if (!sc.has_bus(id)) {
            throw CaseError(where + ": unknown bus " + std::to_string(id));
        }
    };
    require_bus(sc.reference_bus, "reference_bus");

    const json& gens = array_member(doc, "generators", root);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string where = indexed("generators", i);
        const json& j = gens[i];
        Generator g;
        g.id = integer(j, "id", where);
        g.bus = integer(j, "bus", where);
        require_bus(g.bus, where + ".bus");
        g.energy_cost = number(j, "energy_cost", where);
        g.no_load_cost = number(j, "no_load_cost", where);
        g.startup_cost = number(j, "startup_cost", where);
        g.p_min = number(j, "p_min", where);
        g.p_max = number(j, "p_max", where);
        g.ramp_hourly = number(j, "ramp_hourly", where);
        g.ramp_startup = number(j, "ramp_startup", where);
        g.ramp_shutdown = number(j, "ramp_shutdown", where);
        g.ramp_10min = number(j, "ramp_10min", where);
        g.min_up = integer(j, "min_up", where);
        g.min_down = integer(j, "min_down", where);
        if (auto it = j.find("initial_on"); it != j.end()) {
            if (!it->is_boolean()) {
                throw CaseError(where + ".initial_on: expected a boolean");
            }
            g.initial_on = it->get<bool>();
        }
        sc.generators.push_back(g);
    }
    std::sort(sc.generators.begin(), sc.generators.end(),
              [](const Generator& a, const Generator& b) { return a.id < b.id; });

    const json& lines = array_member(doc, "lines", root);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = indexed("lines", i);
        const json& j = lines[i];
        Line l;
        l.id = integer(j, "id", where);
        l.from_bus = integer(j, "from", where);
        require_bus(l.from_bus, where + ".from");
        l.to_bus = integer(j, "to", where);
        require_bus(l.to_bus, where + ".to");
        l.susceptance = number(j, "susceptance", where);
        l.rate_normal = number(j, "rate_normal", where);
        l.rate_emergency = number(j, "rate_emergency", where);
        sc.lines.push_back(l);
    }
    std::sort(sc.lines.begin(), sc.lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });

    const std::size_t n_bus = sc.buses.size();
    const auto horizon = static_cast<std::size_t>(sc.load.horizon);
    sc.load.demand.assign(n_bus, std::vector<double>(horizon, 0.0));
    const json& load = member(doc, "load", root);
    if (!load.is_object()) {
        throw CaseError("load: expected an object keyed by bus id");
    }
    for (const auto& [key, series] : load.items()) {
        const std::string where = "load." + key;
        int id = parse_bus_key(key, where);
        require_bus(id, where);
        if (!series.is_array() || series.size() != horizon) {
            throw CaseError(where + ": expected " + std::to_string(horizon) + " hourly values");
        }
        auto& row = sc.load.demand[sc.bus_position(id)];
        for (std::size_t t = 0; t < horizon; ++t) {
            if (!series[t].is_number()) {
                throw CaseError(where + "[" + std::to_string(t) + "]: expected a number");
            }
            row[t] = series[t].get<double>();
        }
    }

    std::optional<double> default_penalty;
    if (auto it = doc.find("default_penalty"); it != doc.end()) {
        default_penalty = number(doc, "default_penalty", root);
    }
    sc.cdr.penalty.assign(n_bus, 0.0);
    std::vector<bool> has_penalty(n_bus, false);
    bool explicit_participants = false;
    if (auto it = doc.find("cdr"); it != doc.end()) {
        const json& cdr = *it;
        if (!cdr.is_object()) {
            throw CaseError("cdr: expected an object");
        }
        if (cdr.contains("cap_fraction")) {
            sc.cdr.cap_fraction = number(cdr, "cap_fraction", "cdr");
        }
        if (auto p = cdr.find("penalty"); p != cdr.end()) {
            if (!p->is_object()) {
                throw CaseError("cdr.penalty: expected an object keyed by bus id");
            }
            for (const auto& [key, value] : p->items()) {
                const std::string where = "cdr.penalty." + key;
                int id = parse_bus_key(key, where);
                require_bus(id, where);
                if (!value.is_number()) {
                    throw CaseError(where + ": expected a number");
                }
                std::size_t pos = sc.bus_position(id);
                sc.cdr.penalty[pos] = value.get<double>();
                has_penalty[pos] = true;
            }
        }
        if (auto p = cdr.find("participating_buses"); p != cdr.end()) {
            if (!p->is_array()) {
                throw CaseError("cdr.participating_buses: expected an array");
            }
            explicit_participants = true;
            for (std::size_t i = 0; i < p->size(); ++i) {
                const std::string where = "cdr.participating_buses[" + std::to_string(i) + "]";
                if (!(*p)[i].is_number_integer()) {
                    throw CaseError(where + ": expected an integer");
                }
                int id = (*p)[i].get<int>();
                require_bus(id, where);
                sc.cdr.participating_buses.push_back(id);
            }
        }
    }
    for (std::size_t pos = 0; pos < n_bus; ++pos) {
        if (has_penalty[pos]) {
            continue;
        }
        if (!default_penalty) {
            throw CaseError("cdr.penalty: bus " + std::to_string(sc.buses[pos].id) +
                            " has no penalty and no default_penalty is given");
        }
        sc.cdr.penalty[pos] = *default_penalty;
    }
    if (explicit_participants) {
        auto& ids = sc.cdr.participating_buses;
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
            throw CaseError("cdr.participating_buses: duplicate bus id");
        }
    } else {
        // Every bus that carries load in some hour.
        for (std::size_t pos = 0; pos < n_bus; ++pos) {
            const auto& row = sc.load.demand[pos];
            if (std::any_of(row.begin(), row.end(), [](double d) { return d > 0.0; })) {
                sc.cdr.participating_buses.push_back(sc.buses[pos].id);
            }
        }
    }

    auto diagnostics = validate_case(sc);
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::error) {
            throw CaseError(d.field + ": " + d.message);
        }
    }
    return sc;
}

SystemCase load_case_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CaseError("cannot open case file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case(buffer.str());
}

std::string serialize_case(const SystemCase& sc) {
    json doc = json::object();
    doc["name"] = sc.name;
    doc["reference_bus"] = sc.reference_bus;
    doc["horizon"] = sc.load.horizon;
    json buses = json::array();
    for (const auto& b : sc.buses) {
        buses.push_back({{"id", b.id}, {"name", b.name}});
    }
    doc["buses"] = std::move(buses);
    json gens = json::array();
    for (const auto& g : sc.generators) {
        gens.push_back({{"id", g.id},
                        {"bus", g.bus},
                        {"energy_cost", g.energy_cost},
                        {"no_load_cost", g.no_load_cost},
                        {"startup_cost", g.startup_cost},
                        {"p_min", g.p_min},
                        {"p_max", g.p_max},
                        {"ramp_hourly", g.ramp_hourly},
                        {"ramp_startup", g.ramp_startup},
                        {"ramp_shutdown", g.ramp_shutdown},
                        {"ramp_10min", g.ramp_10min},
                        {"min_up", g.min_up},
                        {"min_down", g.min_down},
                        {"initial_on", g.initial_on}});
    }
    doc["generators"] = std::move(gens);
    json lines = json::array();
    for (const auto& l : sc.lines) {
        lines.push_back({{"id", l.id},
                         {"from", l.from_bus},
                         {"to", l.to_bus},
                         {"susceptance", l.susceptance},
                         {"rate_normal", l.rate_normal},
                         {"rate_emergency", l.rate_emergency}});
    }
    doc["lines"] = std::move(lines);
    json load = json::object();
    json penalty = json::object();
    for (std::size_t pos = 0; pos < sc.buses.size(); ++pos) {
        const auto& row = sc.load.demand[pos];
        if (std::any_of(row.begin(), row.end(), [](double d) { return d != 0.0; })) {
            load[std::to_string(sc.buses[pos].id)] = row;
        }
        penalty[std::to_string(sc.buses[pos].id)] = sc.cdr.penalty[pos];
    }
    doc["load"] = std::move(load);
    doc["cdr"] = {{"cap_fraction", sc.cdr.cap_fraction},
                  {"penalty", std::move(penalty)},
                  {"participating_buses", sc.cdr.participating_buses}};
    return doc.dump(2) + "\n";
}

SystemCase scale_loads(const SystemCase& sc, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw CaseError("load factor must be positive, got " + std::to_string(factor));
    }
    SystemCase scaled = sc;
    for (auto& row : scaled.load.demand) {
        for (double& d : row) {
            d *= factor;
        }
    }
    return scaled;
}

std::size_t reachable_bus_count(const SystemCase& sc, std::size_t start, std::size_t skip_line) {
    const std::size_t n = sc.buses.size();
    std::vector<std::vector<std::size_t>> adjacent(n);
    for (std::size_t k = 0; k < sc.lines.size(); ++k) {
        if (k == skip_line) {
            continue;
        }
        std::size_t a = sc.bus_position(sc.lines[k].from_bus);
        std::size_t b = sc.bus_position(sc.lines[k].to_bus);
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    }
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        std::size_t bus = queue.front();
        queue.pop_front();
        for (std::size_t next : adjacent[bus]) {
            if (!seen[next]) {
                seen[next] = true;
                ++count;
                queue.push_back(next);
            }
        }
    }
    return count;
}

std::vector<Diagnostic> validate_case(const SystemCase& sc) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string field, std::string message) {
        out.push_back({Severity::error, std::move(field), std::move(message)});
    };
    auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };

    if (sc.buses.empty()) {
        error("buses", "at least one bus is required");
        return out;
    }
    bool buses_ok = true;
    for (std::size_t i = 0; i < sc.buses.size(); ++i) {
        if (sc.buses[i].id < 1) {
            error(indexed("buses", i) + ".id", "bus ids must be >= 1");
            buses_ok = false;
        }
        if (i > 0 && sc.buses[i].id <= sc.buses[i - 1].id) {
            error(indexed("buses", i) + ".id",
                  sc.buses[i].id == sc.buses[i - 1].id ? "duplicate id " + std::to_string(sc.buses[i].id)
                                                       : "buses must be sorted by id");
            buses_ok = false;
        }
    }
    if (!buses_ok) {
        return out;
    }
    if (!sc.has_bus(sc.reference_bus)) {
        error("reference_bus", "unknown bus " + std::to_string(sc.reference_bus));
    }

    std::set<int> gen_ids;
    for (std::size_t i = 0; i < sc.generators.size(); ++i) {
        const auto& g = sc.generators[i];
        const std::string where = indexed("generators", i);
        if (!gen_ids.insert(g.id).second) {
            error(where + ".id", "duplicate id " + std::to_string(g.id));
        }
        if (!sc.has_bus(g.bus)) {
            error(where + ".bus", "unknown bus " + std::to_string(g.bus));
        }
        if (!finite_nonneg(g.p_min)) {
            error(where + ".p_min", "must be >= 0");
        }
        if (!(g.p_min <= g.p_max) || !std::isfinite(g.p_max)) {
            error(where + ".p_max", "p_min must not exceed p_max");
        }
        const std::pair<const char*, double> ramps[] = {{"ramp_hourly", g.ramp_hourly},
                                                        {"ramp_startup", g.ramp_startup},
                                                        {"ramp_shutdown", g.ramp_shutdown},
                                                        {"ramp_10min", g.ramp_10min},
                                                        {"energy_cost", g.energy_cost},
                                                        {"no_load_cost", g.no_load_cost},
                                                        {"startup_cost", g.startup_cost}};
        for (const auto& [field, value] : ramps) {
            if (!finite_nonneg(value)) {
                error(where + "." + field, "must be >= 0");
            }
        }
        if (g.min_up < 1) {
            error(where + ".min_up", "must be >= 1");
        }
        if (g.min_down < 1) {
            error(where + ".min_down", "must be >= 1");
        }
    }

    std::set<int> line_ids;
    bool endpoints_ok = true;
    for (std::size_t i = 0; i < sc.lines.size(); ++i) {
        const auto& l = sc.lines[i];
        const std::string where = indexed("lines", i);
        if (!line_ids.insert(l.id).second) {
            error(where + ".id", "duplicate id " + std::to_string(l.id));
        }
        if (!sc.has_bus(l.from_bus)) {
            error(where + ".from", "unknown bus " + std::to_string(l.from_bus));
            endpoints_ok = false;
        }
        if (!sc.has_bus(l.to_bus)) {
            error(where + ".to", "unknown bus " + std::to_string(l.to_bus));
            endpoints_ok = false;
        }
        if (l.from_bus == l.to_bus) {
            error(where + ".to", "line endpoints must differ");
        }
        if (!(l.susceptance > 0.0) || !std::isfinite(l.susceptance)) {
            error(where + ".susceptance", "must be > 0");
        }
        if (!(l.rate_normal > 0.0)) {
            error(where + ".rate_normal", "must be > 0");
        }
        if (!(l.rate_normal <= l.rate_emergency) || !std::isfinite(l.rate_emergency)) {
            error(where + ".rate_emergency", "must be >= rate_normal");
        }
    }

    if (sc.load.horizon < 1) {
        error("horizon", "must be at least 1");
    } else if (sc.load.demand.size() != sc.buses.size()) {
        error("load", "expected one demand row per bus");
    } else {
        for (std::size_t pos = 0; pos < sc.buses.size(); ++pos) {
            const auto& row = sc.load.demand[pos];
            const std::string where = "load." + std::to_string(sc.buses[pos].id);
            if (row.size() != static_cast<std::size_t>(sc.load.horizon)) {
                error(where, "expected " + std::to_string(sc.load.horizon) + " hourly values");
                continue;
            }
            for (std::size_t t = 0; t < row.size(); ++t) {
                if (!finite_nonneg(row[t])) {
                    error(where + "[" + std::to_string(t) + "]", "demand must be >= 0");
                }
            }
        }
    }

    if (!(sc.cdr.cap_fraction >= 0.0 && sc.cdr.cap_fraction <= 1.0)) {
        error("cdr.cap_fraction", "must lie in [0, 1]");
    }
    if (sc.cdr.penalty.size() != sc.buses.size()) {
        error("cdr.penalty", "expected one penalty per bus");
    } else {
        for (std::size_t pos = 0; pos < sc.buses.size(); ++pos) {
            if (!finite_nonneg(sc.cdr.penalty[pos])) {
                error("cdr.penalty." + std::to_string(sc.buses[pos].id), "must be >= 0");
            }
        }
    }
    for (std::size_t i = 0; i < sc.cdr.participating_buses.size(); ++i) {
        int id = sc.cdr.participating_buses[i];
        const std::string where = "cdr.participating_buses[" + std::to_string(i) + "]";
        if (!sc.has_bus(id)) {
            error(where, "unknown bus " + std::to_string(id));
        }
        if (i > 0 && id <= sc.cdr.participating_buses[i - 1]) {
            error(where, "participating buses must be unique and ascending");
        }
    }

    if (endpoints_ok && sc.has_bus(sc.reference_bus)) {
        std::size_t reached = reachable_bus_count(sc, sc.bus_position(sc.reference_bus));
        if (reached != sc.buses.size()) {
            error("lines", "network is disconnected: " + std::to_string(reached) + " of " +
                               std::to_string(sc.buses.size()) + " buses reachable from the reference bus");
        }
    }

    if (!has_errors(out) && sc.total_capacity() < sc.peak_demand()) {
        out.push_back({Severity::warning, "generators",
                       "total capacity " + std::to_string(sc.total_capacity()) + " MW is below peak demand " +
                           std::to_string(sc.peak_demand()) + " MW"});
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

}  // namespace gridsched
