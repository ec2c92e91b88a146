#include "shortcalc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <openssl/evp.h>

namespace shortcalc {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Complex entry_from_json(const Json& e, const std::string& where) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    throw ParseError(where + ": entry must be a number or [re, im]");
}

ComplexMatrix read_matrix(const Json& j, const std::string& field, bool allow_no_columns) {
    if (!j.is_array() || j.empty()) throw ParseError("field '" + field + "': expected a non-empty list of rows");
    const auto rows = static_cast<Index>(j.size());
    if (!j[0].is_array()) throw ParseError("field '" + field + "': row 1 is not a list");
    const auto cols = static_cast<Index>(j[0].size());
    if (cols == 0 && !allow_no_columns) throw ParseError("field '" + field + "': rows are empty");
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string where = "field '" + field + "' row " + std::to_string(i + 1);
        if (!row.is_array()) throw ParseError(where + ": not a list");
        if (static_cast<Index>(row.size()) != cols) {
            throw ParseError(where + ": has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(cols));
        }
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = entry_from_json(row[static_cast<std::size_t>(c)],
                                      where + " column " + std::to_string(c + 1));
        }
    }
    if (!all_finite(m)) throw ParseError("field '" + field + "': non-finite entry");
    return m;
}

Tolerance read_tolerance(const Json& j) {
    if (!j.is_object()) throw ParseError("field 'tolerance': expected an object");
    Tolerance tol;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw ParseError("field 'tolerance." + key + "': expected a number");
        const double v = value.get<double>();
        if (key == "rank_rel") {
            tol.rank_rel = v;
        } else if (key == "cmp_abs") {
            tol.cmp_abs = v;
        } else if (key == "cmp_rel") {
            tol.cmp_rel = v;
        } else {
            throw ParseError("field 'tolerance': unknown key '" + key + "'");
        }
    }
    try {
        tol.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("field 'tolerance': ") + e.what());
    }
    return tol;
}

std::string number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

bool is_flat_array(const Json& j) {
    if (!j.is_array()) return false;
    for (const Json& e : j) {
        if (is_scalar(e)) continue;
        if (!e.is_array()) return false;
        for (const Json& x : e) {
            if (!is_scalar(x)) return false;
        }
    }
    return true;
}

void emit(const Json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    const std::string inner(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(key).dump() + ": ";
                emit(value, out, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (is_flat_array(j)) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    emit(j[i], out, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                emit(j[i], out, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += number(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

bool ProblemFile::has(const std::string& id) const {
    return matrices.count(id) != 0 || subspaces.count(id) != 0;
}

const ComplexMatrix& ProblemFile::matrix(const std::string& id) const {
    const auto it = matrices.find(id);
    if (it == matrices.end()) {
        if (subspaces.count(id)) throw UsageError("'" + id + "' is a subspace, a matrix is required");
        throw UsageError("unknown identifier '" + id + "'");
    }
    return it->second;
}

Subspace ProblemFile::subspace(const std::string& id, const Tolerance& tol) const {
    return Subspace::span(raw(id), tol);
}

const ComplexMatrix& ProblemFile::raw(const std::string& id) const {
    if (const auto it = subspaces.find(id); it != subspaces.end()) return it->second;
    if (const auto it = matrices.find(id); it != matrices.end()) return it->second;
    throw UsageError("unknown identifier '" + id + "'");
}

ProblemFile parse_problem_text(const std::string& text, const std::string& source) {
    std::vector<std::set<std::string>> seen;
    const Json::parser_callback_t reject_duplicates = [&](int, Json::parse_event_t event,
                                                          Json& parsed) {
        if (event == Json::parse_event_t::object_start) {
            seen.emplace_back();
        } else if (event == Json::parse_event_t::object_end) {
            seen.pop_back();
        } else if (event == Json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!seen.back().insert(key).second) {
                throw ParseError(source + ": duplicate identifier '" + key + "'");
            }
        }
        return true;
    };
    Json doc;
    try {
        doc = Json::parse(text, reject_duplicates);
    } catch (const Json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(source + ": top level must be an object");

    ProblemFile pf;
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "tolerance") {
                pf.tolerance = read_tolerance(value);
            } else if (key == "seed") {
                if (!value.is_number_unsigned()) throw ParseError("field 'seed': expected a nonnegative integer");
                pf.seed = value.get<std::uint64_t>();
            } else if (value.is_object()) {
                if (value.size() != 1 || !value.contains("span")) {
                    throw ParseError("field '" + key + "': a subspace is {\"span\": matrix}");
                }
                pf.subspaces[key] = read_matrix(value["span"], key + ".span", true);
            } else {
                pf.matrices[key] = read_matrix(value, key, false);
            }
        } catch (const ParseError& e) {
            throw ParseError(source + ": " + e.what());
        }
    }
    return pf;
}

ProblemFile parse_problem(const std::string& path) { return parse_problem_text(read_file(path), path); }

ComplexMatrix parse_csv_text(const std::string& text, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || cell.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v)) {
                throw ParseError(source + ": line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            row.push_back(v);
        }
        if (!line.empty() && line.back() == ',') {
            throw ParseError(source + ": line " + std::to_string(lineno) + ": trailing comma");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(source + ": line " + std::to_string(lineno) + ": has " +
                             std::to_string(row.size()) + " entries, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(source + ": no data rows");
    ComplexMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return m;
}

ComplexMatrix parse_csv(const std::string& path) { return parse_csv_text(read_file(path), path); }

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            const Complex z = m(i, j);
            if (z.imag() == 0.0) {
                row.push_back(z.real());
            } else {
                row.push_back(Json::array({z.real(), z.imag()}));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json subspace_to_json(const Subspace& s) {
    Json j = Json::object();
    j["span"] = matrix_to_json(s.basis());
    j["dim"] = s.dim();
    return j;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) { return read_matrix(j, field, false); }

std::string serialize_problem(const ProblemFile& problem) {
    std::map<std::string, Json> entries;
    for (const auto& [id, m] : problem.matrices) entries[id] = matrix_to_json(m);
    for (const auto& [id, m] : problem.subspaces) entries[id] = Json{{"span", matrix_to_json(m)}};
    if (problem.seed) entries["seed"] = *problem.seed;
    if (problem.tolerance) {
        entries["tolerance"] = Json{{"rank_rel", problem.tolerance->rank_rel},
                                    {"cmp_abs", problem.tolerance->cmp_abs},
                                    {"cmp_rel", problem.tolerance->cmp_rel}};
    }
    Json doc = Json::object();
    for (auto& [id, value] : entries) doc[id] = std::move(value);
    return emit_json(doc) + "\n";
}

std::string emit_json(const Json& j) {
    std::string out;
    emit(j, out, 0);
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

}  // namespace shortcalc
