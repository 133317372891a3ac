#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fbc/matrix.hpp"

namespace fbc {

struct BiclusterMetrics {
    double var = 0.0;
    double mfd = 0.0;
    double msr = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// Sum of squared deviations from the grand mean; zero for a constant block.
inline double var_index(const ExpressionMatrix& sub) {
    const std::size_t n = sub.n_genes * sub.n_conditions;
    double mean = 0.0;
    for (double v : sub.values) mean += v;
    mean /= static_cast<double>(n);
    double sum = 0.0;
    for (double v : sub.values) sum += (v - mean) * (v - mean);
    return sum;
}

/// Per-row trend angles in degrees: first differences between adjacent
/// selected columns, scaled by (cols-1)/row-range, arctan-transformed.
/// A constant row maps to all-zero angles (pseudo-inverse of a zero scale).
inline std::vector<std::vector<double>> angle_matrix(const ExpressionMatrix& sub) {
    if (sub.n_conditions < 2) throw std::invalid_argument("angle_matrix needs at least 2 columns");
    const std::size_t t = sub.n_conditions - 1;
    std::vector<std::vector<double>> theta(sub.n_genes, std::vector<double>(t));
    for (std::size_t i = 0; i < sub.n_genes; ++i) {
        double lo = sub.at(i, 0), hi = lo;
        for (std::size_t j = 1; j < sub.n_conditions; ++j) {
            lo = std::min(lo, sub.at(i, j));
            hi = std::max(hi, sub.at(i, j));
        }
        const double scale = (hi - lo) / static_cast<double>(t);
        const double inv = scale == 0.0 ? 0.0 : 1.0 / scale;
        for (std::size_t j = 0; j < t; ++j) {
            const double diff = sub.at(i, j + 1) - sub.at(i, j);
            theta[i][j] = 180.0 * std::atan(inv * diff) / std::numbers::pi;
        }
    }
    return theta;
}

/// RMS dispersion of trend angles around the per-transition mean angle.
/// Zero exactly when all rows share the same trend per transition.
inline double mfd_index(const ExpressionMatrix& sub) {
    const auto theta = angle_matrix(sub);
    const std::size_t n = sub.n_genes;
    const std::size_t t = sub.n_conditions - 1;
    double sum = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += theta[i][j];
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) sum += (theta[i][j] - mean) * (theta[i][j] - mean);
    }
    return std::sqrt(sum / static_cast<double>(n * t));
}

/// Cheng-Church mean squared residue against the additive row+column model.
inline double msr_index(const ExpressionMatrix& sub) {
    const std::size_t n = sub.n_genes, m = sub.n_conditions;
    std::vector<double> row_mean(n, 0.0), col_mean(m, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double v = sub.at(i, j);
            row_mean[i] += v;
            col_mean[j] += v;
            grand += v;
        }
    for (double& v : row_mean) v /= static_cast<double>(m);
    for (double& v : col_mean) v /= static_cast<double>(n);
    grand /= static_cast<double>(n * m);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double r = sub.at(i, j) - row_mean[i] - col_mean[j] + grand;
            sum += r * r;
        }
    return sum / static_cast<double>(n * m);
}

inline BiclusterMetrics evaluate_metrics(const ExpressionMatrix& sub) {
    BiclusterMetrics mm;
    mm.rows = sub.n_genes;
    mm.cols = sub.n_conditions;
    mm.var = var_index(sub);
    mm.mfd = sub.n_conditions >= 2 ? mfd_index(sub) : 0.0;
    mm.msr = msr_index(sub);
    return mm;
}

}  // namespace fbc
