#include "gridsched/schedule_io.hpp"

#include <json.hpp>

namespace gridsched {

using nlohmann::json;

namespace {

json series_json(const HourlySeries& s) {
    json rows = json::array();
    for (const auto& row : s) {
        json r = json::array();
        for (double x : row) r.push_back(x == 0.0 ? 0.0 : x);  // no "-0.0" in output
        rows.push_back(std::move(r));
    }
    return rows;
}

HourlySeries series_from(const json& doc, const char* key, std::size_t rows, int T) {
    if (!doc.contains(key)) throw ShapeError(std::string("missing field '") + key + "'");
    HourlySeries s;
    try {
        s = doc.at(key).get<HourlySeries>();
    } catch (const json::exception&) {
        throw ShapeError(std::string("field '") + key + "' must be an array of number arrays");
    }
    if (s.size() != rows) {
        throw ShapeError(std::string("field '") + key + "': expected " + std::to_string(rows) + " rows");
    }
    for (const auto& row : s) {
        if (row.size() != static_cast<std::size_t>(T)) {
            throw ShapeError(std::string("field '") + key + "': expected " + std::to_string(T) + " hours per row");
        }
    }
    return s;
}

template <typename Items>
json ids_of(const Items& items) {
    json ids = json::array();
    for (const auto& item : items) ids.push_back(item.id);
    return ids;
}

template <typename Items>
void expect_ids(const json& doc, const char* key, const Items& items) {
    if (!doc.contains(key)) return;
    if (doc.at(key) != ids_of(items)) {
        throw ShapeError(std::string("'") + key + "' ids do not match the case");
    }
}

}  // namespace

std::string write_schedule_json(const SystemCase& sc, const ContingencySet& ctgs, const ScheduleSolution& s) {
    json doc;
    doc["variant"] = std::string(variant_name(s.variant));
    doc["objective"] = s.objective;
    doc["achieved_gap"] = s.achieved_gap ? json(*s.achieved_gap) : json(nullptr);
    doc["generators"] = ids_of(sc.generators);
    doc["lines"] = ids_of(sc.lines);
    doc["buses"] = ids_of(sc.buses);
    doc["u"] = series_json(s.u);
    doc["v"] = series_json(s.v);
    doc["P"] = series_json(s.P);
    doc["r"] = series_json(s.r);
    doc["flow"] = series_json(s.flow);
    doc["angle"] = series_json(s.angle);
    json posts = json::array();
    for (std::size_t c = 0; c < s.contingency.size(); ++c) {
        const auto& pc = s.contingency[c];
        json item;
        if (c < ctgs.size()) {
            item["kind"] = std::string(kind_name(ctgs[c].kind));
            item["element"] = ctgs[c].element_id;
        }
        item["P"] = series_json(pc.P);
        item["flow"] = series_json(pc.flow);
        item["angle"] = series_json(pc.angle);
        if (!pc.cdr.empty()) item["cdr"] = series_json(pc.cdr);
        posts.push_back(std::move(item));
    }
    doc["contingency"] = std::move(posts);
    return doc.dump(2) + "\n";
}

ScheduleSolution read_schedule_json(std::string_view text, const SystemCase& sc, const ContingencySet& ctgs) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ShapeError(std::string("solution file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ShapeError("solution file must be a JSON object");

    ScheduleSolution s;
    try {
        s.variant = parse_variant(doc.at("variant").get<std::string>());
        s.objective = doc.at("objective").get<double>();
        if (doc.contains("achieved_gap") && !doc.at("achieved_gap").is_null()) {
            s.achieved_gap = doc.at("achieved_gap").get<double>();
        }
    } catch (const json::exception& e) {
        throw ShapeError(std::string("solution header: ") + e.what());
    } catch (const FormulationError& e) {
        throw ShapeError(e.what());
    }
    expect_ids(doc, "generators", sc.generators);
    expect_ids(doc, "lines", sc.lines);
    expect_ids(doc, "buses", sc.buses);

    const int T = sc.horizon();
    const std::size_t G = sc.generators.size(), K = sc.lines.size(), N = sc.buses.size();
    s.u = series_from(doc, "u", G, T);
    s.v = series_from(doc, "v", G, T);
    s.P = series_from(doc, "P", G, T);
    s.r = series_from(doc, "r", G, T);
    s.flow = series_from(doc, "flow", K, T);
    s.angle = series_from(doc, "angle", N, T);

    const json posts = doc.value("contingency", json::array());
    if (!posts.is_array() || posts.size() != ctgs.size()) {
        throw ShapeError("'contingency' must list " + std::to_string(ctgs.size()) + " entries");
    }
    for (std::size_t c = 0; c < ctgs.size(); ++c) {
        const json& item = posts[c];
        if (item.contains("element") && item.at("element") != ctgs[c].element_id) {
            throw ShapeError("contingency " + std::to_string(c) + " does not match the contingency set");
        }
        PostContingency pc;
        pc.P = series_from(item, "P", G, T);
        pc.flow = series_from(item, "flow", K, T);
        pc.angle = series_from(item, "angle", N, T);
        if (item.contains("cdr")) pc.cdr = series_from(item, "cdr", N, T);
        s.contingency.push_back(std::move(pc));
    }
    return s;
}

}  // namespace gridsched
