#include "mps_reader.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace testmps {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double number(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("bad number " + s);
    return v;
}

}  // namespace

MpsProblem read_mps(const std::string& text) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    MpsProblem p;
    std::unordered_map<std::string, std::size_t> row_at;
    std::unordered_map<std::string, std::size_t> col_at;
    std::string section;
    bool integer_block = false;
    bool saw_end = false;

    auto column = [&](const std::string& name) {
        auto it = col_at.find(name);
        if (it != col_at.end()) return it->second;
        const std::size_t j = p.columns.size();
        col_at.emplace(name, j);
        p.columns.push_back(name);
        p.integer.push_back(integer_block);
        p.cost.push_back(0.0);
        p.lower.push_back(0.0);
        p.upper.push_back(inf);
        return j;
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        const auto tok = tokens(line);
        if (tok.empty()) continue;
        if (line[0] != ' ') {
            section = tok[0];
            if (section == "NAME") p.name = tok.size() > 1 ? tok[1] : "";
            if (section == "ENDATA") saw_end = true;
            continue;
        }
        if (section == "ROWS") {
            if (tok.size() != 2) throw std::runtime_error("ROWS: " + line);
            if (tok[0] == "N") {
                if (!p.objective_row.empty()) throw std::runtime_error("second objective row");
                p.objective_row = tok[1];
            } else {
                row_at.emplace(tok[1], p.rows.size());
                p.rows.push_back({tok[1], tok[0][0], 0.0});
            }
        } else if (section == "COLUMNS") {
            if (tok.size() == 3 && tok[1] == "'MARKER'") {
                if (tok[2] == "'INTORG'") integer_block = true;
                else if (tok[2] == "'INTEND'") integer_block = false;
                else throw std::runtime_error("bad marker " + line);
                continue;
            }
            if (tok.size() != 3 && tok.size() != 5) throw std::runtime_error("COLUMNS: " + line);
            const std::size_t j = column(tok[0]);
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                const double v = number(tok[k + 1]);
                if (tok[k] == p.objective_row) {
                    p.cost[j] = v;
                } else {
                    auto it = row_at.find(tok[k]);
                    if (it == row_at.end()) throw std::runtime_error("unknown row " + tok[k]);
                    p.matrix[{it->second, j}] = v;
                }
            }
        } else if (section == "RHS") {
            if (tok.size() != 3 && tok.size() != 5) throw std::runtime_error("RHS: " + line);
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                auto it = row_at.find(tok[k]);
                if (it == row_at.end()) throw std::runtime_error("unknown row " + tok[k]);
                p.rows[it->second].rhs = number(tok[k + 1]);
            }
        } else if (section == "BOUNDS") {
            if (tok.size() < 3) throw std::runtime_error("BOUNDS: " + line);
            auto it = col_at.find(tok[2]);
            if (it == col_at.end()) throw std::runtime_error("unknown column " + tok[2]);
            const std::size_t j = it->second;
            const std::string& kind = tok[0];
            auto value = [&] {
                if (tok.size() != 4) throw std::runtime_error("missing bound value: " + line);
                return number(tok[3]);
            };
            if (kind == "UP") p.upper[j] = value();
            else if (kind == "LO") p.lower[j] = value();
            else if (kind == "FX") p.lower[j] = p.upper[j] = value();
            else if (kind == "FR") p.lower[j] = -inf, p.upper[j] = inf;
            else if (kind == "MI") p.lower[j] = -inf;
            else if (kind == "PL") p.upper[j] = inf;
            else if (kind == "BV") p.lower[j] = 0.0, p.upper[j] = 1.0, p.integer[j] = true;
            else throw std::runtime_error("bound type " + kind);
        } else {
            throw std::runtime_error("data outside a section: " + line);
        }
    }
    if (!saw_end) throw std::runtime_error("missing ENDATA");
    return p;
}

}  // namespace testmps
