#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbc {

/// Dense gene-by-condition expression matrix. Immutable after construction.
struct ExpressionMatrix {
    std::vector<double> values;  // row-major, n_genes x n_conditions
    std::vector<std::string> gene_labels;
    std::vector<std::string> condition_labels;
    std::size_t n_genes = 0;
    std::size_t n_conditions = 0;

    double at(std::size_t i, std::size_t j) const { return values[i * n_conditions + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * n_conditions + j]; }
};

/// Row/column index sets of a candidate bicluster. Indices strictly increasing.
struct BiclusterIndex {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

inline void validate_index(const ExpressionMatrix& m, const BiclusterIndex& idx) {
    auto check = [](const std::vector<std::size_t>& v, std::size_t bound, const char* axis) {
        if (v.empty()) throw std::invalid_argument(std::string("empty ") + axis + " index set");
        for (std::size_t p = 0; p < v.size(); ++p) {
            if (v[p] >= bound) throw std::out_of_range(std::string(axis) + " index out of range");
            if (p > 0 && v[p] <= v[p - 1])
                throw std::invalid_argument(std::string(axis) + " indices not strictly increasing");
        }
    };
    check(idx.rows, m.n_genes, "row");
    check(idx.cols, m.n_conditions, "column");
}

struct MissingPolicy {
    std::optional<double> sentinel;  // entry is missing iff it equals this exactly
    std::uint64_t seed = 0;
};

enum class MatrixFormat {
    PlainNumeric,     // whitespace-separated rows, no labels (Yeast matrix layout)
    LabeledDelimited  // header row of condition labels, first column gene labels, comma or tab
};

namespace detail {

inline double parse_number(const std::string& tok, const char* context) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("non-numeric token '") + tok + "' in " + context);
    }
    if (pos != tok.size())
        throw std::runtime_error(std::string("non-numeric token '") + tok + "' in " + context);
    return v;
}

inline std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

inline void check_labels_unique(const std::vector<std::string>& labels, const char* axis) {
    std::vector<std::string> sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::runtime_error(std::string("duplicate ") + axis + " label");
}

// Replaces sentinel entries with uniform draws from the observed per-column range.
// Deterministic: row-major scan, one draw per missing cell.
inline void impute_missing(ExpressionMatrix& m, const MissingPolicy& policy) {
    if (!policy.sentinel) return;
    const double s = *policy.sentinel;
    std::vector<double> lo(m.n_conditions, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m.n_conditions, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> observed(m.n_conditions, 0);
    for (std::size_t i = 0; i < m.n_genes; ++i)
        for (std::size_t j = 0; j < m.n_conditions; ++j) {
            double v = m.at(i, j);
            if (v == s) continue;
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
            ++observed[j];
        }
    for (std::size_t j = 0; j < m.n_conditions; ++j)
        if (observed[j] == 0)
            throw std::runtime_error("column " + std::to_string(j) + " entirely missing");
    std::mt19937_64 rng(policy.seed);
    for (std::size_t i = 0; i < m.n_genes; ++i)
        for (std::size_t j = 0; j < m.n_conditions; ++j)
            if (m.at(i, j) == s) {
                std::uniform_real_distribution<double> dist(lo[j], hi[j]);
                m.at(i, j) = dist(rng);
            }
}

inline void check_finite(const ExpressionMatrix& m) {
    for (double v : m.values)
        if (!std::isfinite(v)) throw std::runtime_error("non-finite entry in matrix");
}

}  // namespace detail

inline ExpressionMatrix load_matrix(std::istream& in, MatrixFormat format,
                                    const MissingPolicy& policy = {}) {
    ExpressionMatrix m;
    std::string line;
    if (format == MatrixFormat::PlainNumeric) {
        while (std::getline(in, line)) {
            std::istringstream ss(line);
            std::vector<double> row;
            std::string tok;
            while (ss >> tok) row.push_back(detail::parse_number(tok, "plain-numeric row"));
            if (row.empty()) continue;
            if (m.n_conditions == 0)
                m.n_conditions = row.size();
            else if (row.size() != m.n_conditions)
                throw std::runtime_error("ragged row at line " + std::to_string(m.n_genes + 1));
            m.values.insert(m.values.end(), row.begin(), row.end());
            ++m.n_genes;
        }
        for (std::size_t i = 0; i < m.n_genes; ++i) m.gene_labels.push_back("G" + std::to_string(i));
        for (std::size_t j = 0; j < m.n_conditions; ++j)
            m.condition_labels.push_back("C" + std::to_string(j));
    } else {
        std::vector<std::vector<std::string>> rows;
        char delim = ',';
        bool first = true;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (first) {
                delim = line.find('\t') != std::string::npos ? '\t' : ',';
                first = false;
            }
            rows.push_back(detail::split(line, delim));
        }
        if (rows.size() < 2) throw std::runtime_error("labeled matrix needs a header and data rows");
        std::size_t data_width = rows[1].size();  // gene label + M values
        if (data_width < 2) throw std::runtime_error("labeled matrix has no value columns");
        std::size_t ncond = data_width - 1;
        // header may or may not carry a corner label
        const auto& header = rows[0];
        std::size_t header_off;
        if (header.size() == ncond)
            header_off = 0;
        else if (header.size() == ncond + 1)
            header_off = 1;
        else
            throw std::runtime_error("header width does not match data rows");
        m.condition_labels.assign(header.begin() + static_cast<std::ptrdiff_t>(header_off),
                                  header.end());
        m.n_conditions = ncond;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() != data_width)
                throw std::runtime_error("ragged row at line " + std::to_string(r + 1));
            m.gene_labels.push_back(rows[r][0]);
            for (std::size_t j = 1; j < data_width; ++j)
                m.values.push_back(detail::parse_number(rows[r][j], "labeled row"));
            ++m.n_genes;
        }
    }
    if (m.n_genes < 2 || m.n_conditions < 2)
        throw std::runtime_error("matrix must have at least 2 rows and 2 columns");
    detail::check_labels_unique(m.gene_labels, "gene");
    detail::check_labels_unique(m.condition_labels, "condition");
    detail::impute_missing(m, policy);
    detail::check_finite(m);
    return m;
}

inline ExpressionMatrix load_matrix(const std::string& path, MatrixFormat format,
                                    const MissingPolicy& policy = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_matrix(in, format, policy);
}

/// Writes a labeled CSV that load_matrix(LabeledDelimited) reads back identically.
inline void save_matrix(const ExpressionMatrix& m, std::ostream& out) {
    out << "gene";
    for (const auto& c : m.condition_labels) out << ',' << c;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < m.n_genes; ++i) {
        out << m.gene_labels[i];
        for (std::size_t j = 0; j < m.n_conditions; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

inline void save_matrix(const ExpressionMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_matrix(m, out);
}

/// Extracts the |I| x |J| submatrix, preserving relative order and labels.
inline ExpressionMatrix submatrix(const ExpressionMatrix& m, const BiclusterIndex& idx) {
    validate_index(m, idx);
    ExpressionMatrix out;
    out.n_genes = idx.rows.size();
    out.n_conditions = idx.cols.size();
    out.values.reserve(out.n_genes * out.n_conditions);
    for (std::size_t i : idx.rows) {
        out.gene_labels.push_back(m.gene_labels[i]);
        for (std::size_t j : idx.cols) out.values.push_back(m.at(i, j));
    }
    for (std::size_t j : idx.cols) out.condition_labels.push_back(m.condition_labels[j]);
    return out;
}

}  // namespace fbc
