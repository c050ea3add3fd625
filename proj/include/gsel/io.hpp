#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsel/dataset.hpp"
#include "gsel/graph.hpp"
#include "gsel/interact.hpp"

namespace gsel::io {

// Anything wrong with an input file: unreadable, ragged, or non-numeric.
struct TableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A delimited numeric table. names is empty when the file has no header
// row, otherwise it holds one name per column.
struct Table {
    engine::Matrix x;
    std::vector<std::string> names;

    bool has_header() const { return !names.empty(); }
};

namespace detail {

inline bool parse_cell(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + cell.size() && std::isfinite(out);
}

inline std::vector<std::string> split_fields(const std::string& line,
                                             bool comma) {
    std::vector<std::string> out;
    if (comma) {
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            std::string cell = line.substr(
                start, pos == std::string::npos ? pos : pos - start);
            const auto a = cell.find_first_not_of(" \t");
            const auto b = cell.find_last_not_of(" \t");
            out.push_back(a == std::string::npos
                              ? std::string()
                              : cell.substr(a, b - a + 1));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    } else {
        std::istringstream ss(line);
        std::string cell;
        while (ss >> cell) out.push_back(std::move(cell));
    }
    return out;
}

}  // namespace detail

// Reads a rectangular numeric table: comma-separated when the first
// non-blank line contains a comma, whitespace-separated otherwise. A first
// row with any non-numeric cell is taken as a header. Diagnostics carry
// `what` (normally the file name) plus 1-based line and column numbers.
inline Table read_table(std::istream& in, const std::string& what) {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::size_t ncols = 0;
    bool comma = false;
    bool first_content = true;

    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        if (first_content) comma = line.find(',') != std::string::npos;
        auto fields = detail::split_fields(line, comma);

        if (first_content) {
            first_content = false;
            ncols = fields.size();
            bool all_numeric = true;
            double v;
            for (const auto& f : fields)
                if (!detail::parse_cell(f, v)) {
                    all_numeric = false;
                    break;
                }
            if (!all_numeric) {
                names = std::move(fields);
                continue;
            }
        }

        if (fields.size() != ncols)
            throw TableError(what + ": line " + std::to_string(lineno) +
                             ": found " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(ncols));
        std::vector<double> row(ncols);
        for (std::size_t c = 0; c < ncols; ++c)
            if (!detail::parse_cell(fields[c], row[c]))
                throw TableError(what + ": line " + std::to_string(lineno) +
                                 ", column " + std::to_string(c + 1) +
                                 ": cannot parse '" + fields[c] +
                                 "' as a finite number");
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw TableError(what + ": no data rows");
    Table t;
    t.names = std::move(names);
    t.x = engine::Matrix(rows.size(), ncols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < ncols; ++j) t.x.at(i, j) = rows[i][j];
    return t;
}

inline Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableError(path + ": cannot open file");
    return read_table(in, path);
}

// A table split into response and covariates. Covariate column j of data.x
// sits at table column j + (j >= response_col), so reported covariate
// indices count over the table minus the response.
struct ResponseSplit {
    engine::Dataset data;
    std::size_t response_col = 0;
    std::vector<std::string> names;  // covariate names, empty without header
};

// spec: "" = last column, otherwise a 1-based column number or (with a
// header) a column name.
inline ResponseSplit split_response(const Table& t, const std::string& spec) {
    const std::size_t k = t.x.k;
    if (k < 2)
        throw TableError("need at least two columns to split off a response");

    std::size_t col = k - 1;
    if (!spec.empty()) {
        bool digits = !spec.empty();
        for (char ch : spec)
            if (!std::isdigit(static_cast<unsigned char>(ch))) digits = false;
        if (digits) {
            const unsigned long long v = std::stoull(spec);
            if (v < 1 || v > k)
                throw TableError("response column " + spec +
                                 " out of range 1.." + std::to_string(k));
            col = static_cast<std::size_t>(v - 1);
        } else {
            if (!t.has_header())
                throw TableError("response named '" + spec +
                                 "' but the file has no header row");
            auto it = std::find(t.names.begin(), t.names.end(), spec);
            if (it == t.names.end())
                throw TableError("no column named '" + spec + "'");
            col = static_cast<std::size_t>(it - t.names.begin());
        }
    }

    ResponseSplit out;
    out.response_col = col;
    const std::size_t n = t.x.n;
    out.data.y.assign(t.x.col(col), t.x.col(col) + n);
    out.data.x = engine::Matrix(n, k - 1);
    for (std::size_t j = 0, dst = 0; j < k; ++j) {
        if (j == col) continue;
        const double* src = t.x.col(j);
        std::copy(src, src + n, out.data.x.col(dst));
        if (t.has_header()) out.names.push_back(t.names[j]);
        ++dst;
    }
    return out;
}

// P-values print with 7 significant digits, in scientific form below 1e-3
// so tiny values keep their leading digits and in fixed form above it.
inline std::string fmt_pvalue(double p) {
    char buf[48];
    if (p < 1e-3)
        std::snprintf(buf, sizeof buf, "%.6e", p);
    else
        std::snprintf(buf, sizeof buf, "%.7f", p);
    return buf;
}

inline std::string fmt_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

// Lossless double formatting for matrices meant to be read back.
inline std::string fmt_exact(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_matrix(std::ostream& out, const engine::Matrix& x) {
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t j = 0; j < x.k; ++j) {
            if (j) out << ' ';
            out << fmt_exact(x.at(i, j));
        }
        out << '\n';
    }
}

// One line per edge: "i j p_ij p_ji", 1-based, NA for a direction that did
// not select.
inline void write_edge_list(std::ostream& out, const graph::EdgeList& el) {
    for (const auto& e : el.edges) {
        out << (e.i + 1) << ' ' << (e.j + 1) << ' ';
        if (std::isnan(e.p_forward))
            out << "NA";
        else
            out << fmt_pvalue(e.p_forward);
        out << ' ';
        if (std::isnan(e.p_backward))
            out << "NA";
        else
            out << fmt_pvalue(e.p_backward);
        out << '\n';
    }
}

// One line per product column listing the 1-based base columns whose
// product it is, in the order the expansion writes them.
inline void write_decode_table(std::ostream& out,
                               const expand::MonomialTable& table) {
    for (const auto& mono : table.monomials) {
        for (std::size_t t = 0; t < mono.size(); ++t) {
            if (t) out << ' ';
            out << (mono[t] + 1);
        }
        out << '\n';
    }
}

}  // namespace gsel::io
