#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbc/partition.hpp"

namespace fbc {

/// Similarity of every gene to gene i under condition j: 1 - |mu_kj - mu_ij|.
struct SimilaritySlice {
    std::vector<double> values;  // length N, self-similarity is 1
};

inline SimilaritySlice similarity_slice(const PartitionMatrix& u_g, std::size_t j,
                                        std::size_t i) {
    if (u_g.orientation != Orientation::GenesAsUniverse)
        throw std::invalid_argument("similarity_slice requires genes-as-universe memberships");
    if (j >= u_g.n_cols || i >= u_g.n_rows) throw std::out_of_range("slice index out of range");
    SimilaritySlice s;
    s.values.resize(u_g.n_rows);
    const double mu_i = u_g.at(i, j);
    for (std::size_t k = 0; k < u_g.n_rows; ++k)
        s.values[k] = 1.0 - std::fabs(u_g.at(k, j) - mu_i);
    return s;
}

/// Two-cluster fuzzy memberships against the fixed prototypes
/// (max of slice, min of slice). Returns (phi_k1, phi_k2) per element,
/// normalized to sum 1, with the zero-distance and equal-prototype
/// conventions applied.
inline std::vector<std::pair<double, double>> fcm_membership(const SimilaritySlice& slice,
                                                             double fuzziness) {
    if (fuzziness <= 1.0) throw std::invalid_argument("fuzziness must exceed 1");
    const auto [lo_it, hi_it] = std::minmax_element(slice.values.begin(), slice.values.end());
    const double v1 = *hi_it;  // prototype 1: max
    const double v2 = *lo_it;  // prototype 2: min
    std::vector<std::pair<double, double>> out(slice.values.size());
    const double expo = -2.0 / (fuzziness - 1.0);
    for (std::size_t k = 0; k < slice.values.size(); ++k) {
        if (v1 == v2) {
            out[k] = {1.0, 0.0};
            continue;
        }
        const double d1 = std::fabs(slice.values[k] - v1);
        const double d2 = std::fabs(slice.values[k] - v2);
        if (d1 == 0.0) {
            out[k] = {1.0, 0.0};
        } else if (d2 == 0.0) {
            out[k] = {0.0, 1.0};
        } else {
            const double w1 = std::pow(d1, expo);
            const double w2 = std::pow(d2, expo);
            out[k] = {w1 / (w1 + w2), w2 / (w1 + w2)};
        }
    }
    return out;
}

/// Reference suitability of one gene: mean over conditions of the average
/// similarity among genes the FCM step accepts as close.
struct ReferenceScore {
    std::size_t gene = 0;
    double varpi = 0.0;
    std::vector<std::size_t> accepted_counts;  // per condition
};

namespace detail {

// phi_k1 > 0.5 under the fixed max/min prototypes, without evaluating the
// membership itself: for any fuzziness > 1 this is exactly d1 < d2, with the
// singular and degenerate conventions of fcm_membership.
inline bool accepts(double s, double v1, double v2) {
    if (v1 == v2) return true;
    const double d1 = std::fabs(s - v1);
    const double d2 = std::fabs(s - v2);
    if (d1 == 0.0) return true;
    if (d2 == 0.0) return false;
    return d1 < d2;
}

}  // namespace detail

/// Scores every gene and sorts descending by varpi (ties: lower gene index first).
inline std::vector<ReferenceScore> reference_scores(const PartitionMatrix& u_g,
                                                    double fuzziness = 2.0) {
    if (u_g.orientation != Orientation::GenesAsUniverse)
        throw std::invalid_argument("reference_scores requires genes-as-universe memberships");
    if (fuzziness <= 1.0) throw std::invalid_argument("fuzziness must exceed 1");
    const std::size_t n = u_g.n_rows;
    const std::size_t m = u_g.n_cols;
    std::vector<ReferenceScore> scores(n);
    std::vector<double> slice(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i].gene = i;
        scores[i].accepted_counts.assign(m, 0);
        double sum_over_conditions = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double mu_i = u_g.at(i, j);
            double v2 = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                slice[k] = 1.0 - std::fabs(u_g.at(k, j) - mu_i);
                v2 = std::min(v2, slice[k]);
            }
            const double v1 = 1.0;  // self-similarity makes the max prototype 1
            double accepted_sum = 0.0;
            std::size_t accepted = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (detail::accepts(slice[k], v1, v2)) {
                    accepted_sum += slice[k];
                    ++accepted;
                }
            scores[i].accepted_counts[j] = accepted;
            sum_over_conditions += accepted > 0 ? accepted_sum / static_cast<double>(accepted) : 0.0;
        }
        scores[i].varpi = sum_over_conditions / static_cast<double>(m);
    }
    std::stable_sort(scores.begin(), scores.end(), [](const ReferenceScore& a, const ReferenceScore& b) {
        if (a.varpi != b.varpi) return a.varpi > b.varpi;
        return a.gene < b.gene;
    });
    return scores;
}

inline std::vector<std::size_t> select_references(const std::vector<ReferenceScore>& scores,
                                                  std::size_t k) {
    if (k < 1 || k > scores.size()) throw std::out_of_range("reference count out of range");
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t r = 0; r < k; ++r) out.push_back(scores[r].gene);
    return out;
}

}  // namespace fbc
