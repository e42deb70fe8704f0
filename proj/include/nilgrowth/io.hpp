#ifndef NILGROWTH_IO_HPP
#define NILGROWTH_IO_HPP

// Flat-file plumbing for the command-line tool: bit-stable CSV/JSON
// rendering, atomic writes (temp file + rename), and the Lie-algebra file
// format. Counts are printed as exact integers; logs and estimates are
// printed at 15 significant digits ("%.15g", ties resolved round-half-even
// by IEEE-754 default rounding), so identical runs yield identical bytes.

#include "nilgrowth/balls.hpp"
#include "nilgrowth/growth_profile.hpp"
#include "nilgrowth/heisenberg.hpp"
#include "nilgrowth/lie_algebra.hpp"
#include "nilgrowth/rational.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilgrowth {

// ---------------------------------------------------------------------------
// Scalar rendering.

inline std::string render_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

namespace detail {

inline long long to_int64(const BigInt& v, const char* what) {
    static const BigInt lo(std::numeric_limits<long long>::min());
    static const BigInt hi(std::numeric_limits<long long>::max());
    if (v < lo || v > hi) throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
    return v.convert_to<long long>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Atomic file output: write a sibling temp file, then rename over the target
// so partially written files are never observed under the final name.

inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp + " failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// CSV tables. Fields never contain commas, quotes, or newlines, so the
// grammar is plain comma-separated lines; parse(to_string(t)) == t exactly.

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const {
        std::string out;
        auto line = [&out](const std::vector<std::string>& fields) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) out += ',';
                out += fields[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& row : rows) line(row);
        return out;
    }

    bool operator==(const CsvTable& other) const { return header == other.header && rows == other.rows; }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

inline CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_csv_line(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) throw std::invalid_argument("CSV document has no header line");
    return table;
}

// ---------------------------------------------------------------------------
// Growth series <-> CSV. Header m,ball,sphere; one row per completed radius,
// exact integers. A run the budget cut short ends with the marker row
// "<m>,," naming the first radius that was not completed.

inline CsvTable growth_to_csv(const GrowthSeries& series) {
    CsvTable table;
    table.header = {"m", "ball", "sphere"};
    for (const auto& rec : series.records) {
        table.rows.push_back({std::to_string(rec.m), std::to_string(rec.ball), std::to_string(rec.sphere)});
    }
    if (series.overflow) {
        table.rows.push_back({std::to_string(series.max_radius() + 1), "", ""});
    }
    return table;
}

inline unsigned long long parse_count(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("malformed count field: \"" + text + "\"");
    }
    return std::stoull(text);
}

inline GrowthSeries growth_from_csv(const CsvTable& table) {
    if (table.header != std::vector<std::string>{"m", "ball", "sphere"}) {
        throw std::invalid_argument("not a growth table: unexpected header");
    }
    GrowthSeries series;
    for (const auto& row : table.rows) {
        if (row.size() != 3) throw std::invalid_argument("growth rows carry exactly three fields");
        if (row[1].empty() && row[2].empty()) {
            series.overflow = true;
            break;
        }
        GrowthRecord rec;
        rec.m = static_cast<int>(parse_count(row[0]));
        rec.ball = parse_count(row[1]);
        rec.sphere = parse_count(row[2]);
        series.records.push_back(rec);
    }
    return series;
}

// ---------------------------------------------------------------------------
// Deviation report -> CSV (m,log_ball,profile,residual at 15 digits). An
// overflowed comparison ends with the marker row "<m>,,,".

inline CsvTable deviation_to_csv(const DeviationReport& report, bool overflow, int next_m) {
    CsvTable table;
    table.header = {"m", "log_ball", "profile", "residual"};
    for (const auto& row : report.rows) {
        table.rows.push_back({std::to_string(row.m), render_real(row.log_ball), render_real(row.profile),
                              render_real(row.residual)});
    }
    if (overflow) table.rows.push_back({std::to_string(next_m), "", "", ""});
    return table;
}

// ---------------------------------------------------------------------------
// Heisenberg diagnostics -> CSV matrices.

inline CsvTable collapsing_to_csv(const std::vector<CollapsingResult>& cells) {
    CsvTable table;
    table.header = {"i", "j", "m", "required", "equal", "lhs", "rhs", "witness_u", "witness_v", "witness_w"};
    for (const auto& c : cells) {
        std::vector<std::string> row = {std::to_string(c.i),
                                        std::to_string(c.j),
                                        std::to_string(c.m),
                                        c.required ? "1" : "0",
                                        c.equal ? "1" : "0",
                                        std::to_string(c.lhs_cardinality),
                                        std::to_string(c.rhs_cardinality),
                                        "",
                                        "",
                                        ""};
        if (c.witness) {
            row[7] = std::to_string((*c.witness)[0]);
            row[8] = std::to_string((*c.witness)[1]);
            row[9] = std::to_string((*c.witness)[2]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline CsvTable prop16_to_csv(const std::vector<Prop16Row>& rows) {
    CsvTable table;
    table.header = {"n",       "a_n",   "k",     "s_cardinality", "power_cardinality", "completed_power",
                    "partial", "ratio", "s_normalized", "power_normalized"};
    for (const auto& r : rows) {
        table.rows.push_back({std::to_string(r.n), std::to_string(r.a_n), std::to_string(r.k),
                              std::to_string(r.s_cardinality), std::to_string(r.power_cardinality),
                              std::to_string(r.completed_power), r.partial ? "1" : "0", r.ratio.str(),
                              render_real(r.s_normalized), render_real(r.power_normalized)});
    }
    return table;
}

// One row per scale of the diagonal cc refinement; `exact` is the estimate
// as an exact rational, `estimate` its 15-digit decimal rendering.
inline CsvTable cc_to_csv(const std::vector<std::pair<long long, Rational>>& rows, bool overflow,
                          long long next_scale) {
    CsvTable table;
    table.header = {"scale", "estimate", "exact"};
    for (const auto& [scale, value] : rows) {
        table.rows.push_back({std::to_string(scale), render_real(value.to_double()), value.str()});
    }
    if (overflow) table.rows.push_back({std::to_string(next_scale), "", ""});
    return table;
}

// ---------------------------------------------------------------------------
// Growth profile -> JSON: the polynomial and its envelope as
// [degree, numerator, denominator] triples, symbolic breakpoints, and the
// log-log slope sequence.

inline nlohmann::ordered_json profile_to_json(const GrowthPolynomial& poly, const PiecewiseMonomial& env,
                                              const LogLogProfile& profile) {
    nlohmann::ordered_json out;
    out["polynomial"] = nlohmann::ordered_json::array();
    for (const auto& [deg, coeff] : poly.terms) {
        out["polynomial"].push_back({deg, detail::to_int64(coeff.num(), "polynomial coefficient"),
                                     detail::to_int64(coeff.den(), "polynomial coefficient")});
    }
    out["envelope"] = nlohmann::ordered_json::array();
    for (const auto& piece : env.pieces) {
        out["envelope"].push_back({piece.degree, detail::to_int64(piece.coefficient.num(), "envelope coefficient"),
                                   detail::to_int64(piece.coefficient.den(), "envelope coefficient")});
    }
    out["breakpoints"] = nlohmann::ordered_json::array();
    for (const auto& b : env.breakpoints) {
        nlohmann::ordered_json entry;
        entry["ratio"] = {detail::to_int64(b.ratio.num(), "breakpoint ratio"),
                          detail::to_int64(b.ratio.den(), "breakpoint ratio")};
        entry["root"] = b.root;
        entry["radius"] = render_real(b.value());
        out["breakpoints"].push_back(std::move(entry));
    }
    out["slopes"] = profile.slopes;
    return out;
}

// ---------------------------------------------------------------------------
// Lie-algebra file format: a JSON document
//
//   { "dim": 3,
//     "labels": ["x", "y", "z"],            // optional
//     "brackets": [[1, 2, [[3, 1, 1]]]] }   // [e_i, e_j] = sum c/d * e_k
//
// with 1-based indices, i < j only (antisymmetry is implied), and omitted
// brackets zero. Coefficients are (k, numerator, denominator) triples.

inline LieAlgebra lie_algebra_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer()) {
        throw std::invalid_argument("Lie-algebra document needs an integer \"dim\" field");
    }
    const int dim = doc["dim"].get<int>();
    if (dim < 1) throw std::invalid_argument("Lie-algebra dimension must be positive");
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        if (!doc["labels"].is_array() || static_cast<int>(doc["labels"].size()) != dim) {
            throw std::invalid_argument("\"labels\" must list exactly dim names");
        }
        for (const auto& l : doc["labels"]) labels.push_back(l.get<std::string>());
    }
    std::vector<BracketEntry> brackets;
    if (doc.contains("brackets")) {
        if (!doc["brackets"].is_array()) throw std::invalid_argument("\"brackets\" must be an array");
        for (const auto& entry : doc["brackets"]) {
            if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
                !entry[1].is_number_integer() || !entry[2].is_array()) {
                throw std::invalid_argument("malformed bracket triple: expected [i, j, [[k, num, den], ...]]");
            }
            const int i = entry[0].get<int>();
            const int j = entry[1].get<int>();
            if (i < 1 || j < 1 || i > dim || j > dim || i >= j) {
                throw std::invalid_argument("malformed bracket triple: indices must satisfy 1 <= i < j <= dim");
            }
            RationalVector coords(static_cast<std::size_t>(dim));
            for (const auto& term : entry[2]) {
                if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer() ||
                    !term[1].is_number_integer() || !term[2].is_number_integer()) {
                    throw std::invalid_argument("malformed bracket coefficient: expected [k, num, den]");
                }
                const int k = term[0].get<int>();
                if (k < 1 || k > dim) throw std::invalid_argument("malformed bracket coefficient: index out of range");
                const long long den = term[2].get<long long>();
                if (den == 0) throw std::invalid_argument("malformed bracket coefficient: zero denominator");
                coords[static_cast<std::size_t>(k - 1)] =
                    coords[static_cast<std::size_t>(k - 1)] + Rational(BigInt(term[1].get<long long>()), BigInt(den));
            }
            brackets.emplace_back(i - 1, j - 1, std::move(coords));
        }
    }
    return validated(make_lie_algebra(dim, std::move(brackets), std::move(labels)));
}

inline nlohmann::ordered_json lie_algebra_to_json(const LieAlgebra& algebra) {
    nlohmann::ordered_json out;
    out["dim"] = algebra.dim();
    out["labels"] = algebra.labels;
    out["brackets"] = nlohmann::ordered_json::array();
    for (int i = 0; i < algebra.dim(); ++i) {
        for (int j = i + 1; j < algebra.dim(); ++j) {
            const RationalVector& v = algebra.ops.bracket(i, j);
            nlohmann::ordered_json terms = nlohmann::ordered_json::array();
            for (int k = 0; k < algebra.dim(); ++k) {
                const Rational& c = v[static_cast<std::size_t>(k)];
                if (c.is_zero()) continue;
                terms.push_back({k + 1, detail::to_int64(c.num(), "bracket coefficient"),
                                 detail::to_int64(c.den(), "bracket coefficient")});
            }
            if (!terms.empty()) out["brackets"].push_back({i + 1, j + 1, std::move(terms)});
        }
    }
    return out;
}

inline LieAlgebra load_lie_algebra(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + " is not valid JSON: " + e.what());
    }
    return lie_algebra_from_json(doc);
}

}  // namespace nilgrowth

#endif  // NILGROWTH_IO_HPP
