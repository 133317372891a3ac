#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fbc/matrix.hpp"

namespace fbc {

enum class Orientation { GenesAsUniverse, ConditionsAsUniverse };

/// Fuzzy partition matrix of rank-based memberships in (0, 1].
/// GenesAsUniverse ranks within each column, ConditionsAsUniverse within each row.
struct PartitionMatrix {
    std::vector<double> memberships;  // row-major, n_rows x n_cols
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    Orientation orientation = Orientation::GenesAsUniverse;

    double at(std::size_t i, std::size_t j) const { return memberships[i * n_cols + j]; }
    double& at(std::size_t i, std::size_t j) { return memberships[i * n_cols + j]; }
};

/// Counting-measure membership: the fraction of universe elements a value
/// weakly dominates within its slice. Ties count inclusively, so the maximal
/// element of every slice has membership exactly 1.
inline PartitionMatrix build_partition(const ExpressionMatrix& m, Orientation orientation) {
    PartitionMatrix p;
    p.n_rows = m.n_genes;
    p.n_cols = m.n_conditions;
    p.orientation = orientation;
    p.memberships.resize(p.n_rows * p.n_cols);
    if (orientation == Orientation::GenesAsUniverse) {
        std::vector<double> col(m.n_genes);
        const double n = static_cast<double>(m.n_genes);
        for (std::size_t j = 0; j < m.n_conditions; ++j) {
            for (std::size_t i = 0; i < m.n_genes; ++i) col[i] = m.at(i, j);
            std::vector<double> sorted(col);
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < m.n_genes; ++i) {
                auto ub = std::upper_bound(sorted.begin(), sorted.end(), col[i]);
                p.at(i, j) = static_cast<double>(ub - sorted.begin()) / n;
            }
        }
    } else {
        std::vector<double> row(m.n_conditions);
        const double n = static_cast<double>(m.n_conditions);
        for (std::size_t i = 0; i < m.n_genes; ++i) {
            for (std::size_t j = 0; j < m.n_conditions; ++j) row[j] = m.at(i, j);
            std::vector<double> sorted(row);
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t j = 0; j < m.n_conditions; ++j) {
                auto ub = std::upper_bound(sorted.begin(), sorted.end(), row[j]);
                p.at(i, j) = static_cast<double>(ub - sorted.begin()) / n;
            }
        }
    }
    return p;
}

/// Absolute membership differences against a reference gene's row.
/// Small deltas mean high similarity to the reference.
struct DeltaMatrix {
    std::vector<double> deltas;  // row-major, n_rows x n_cols
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::size_t reference_gene = 0;

    double at(std::size_t i, std::size_t j) const { return deltas[i * n_cols + j]; }
    double& at(std::size_t i, std::size_t j) { return deltas[i * n_cols + j]; }
};

inline DeltaMatrix delta_matrix(const PartitionMatrix& u_g, std::size_t g_star) {
    if (u_g.orientation != Orientation::GenesAsUniverse)
        throw std::invalid_argument("delta_matrix requires genes-as-universe memberships");
    if (g_star >= u_g.n_rows) throw std::out_of_range("reference gene out of range");
    DeltaMatrix d;
    d.n_rows = u_g.n_rows;
    d.n_cols = u_g.n_cols;
    d.reference_gene = g_star;
    d.deltas.resize(d.n_rows * d.n_cols);
    for (std::size_t i = 0; i < d.n_rows; ++i)
        for (std::size_t j = 0; j < d.n_cols; ++j)
            d.at(i, j) = std::fabs(u_g.at(i, j) - u_g.at(g_star, j));
    return d;
}

}  // namespace fbc
