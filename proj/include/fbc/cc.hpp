#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbc/matrix.hpp"
#include "fbc/metrics.hpp"

namespace fbc {

struct CcConfig {
    double msr_threshold = 300.0;
    std::size_t k_biclusters = 100;
    std::optional<std::pair<double, double>> mask_range;  // defaults to observed (min, max)
    double multiple_deletion_factor = 1.2;
    std::size_t multiple_deletion_min_axis = 100;
    bool inverted_rows = true;
    std::uint64_t seed = 0;
};

inline void validate(const CcConfig& cfg) {
    if (cfg.msr_threshold <= 0.0) throw std::invalid_argument("msr_threshold must be positive");
    if (cfg.multiple_deletion_factor < 1.0)
        throw std::invalid_argument("multiple_deletion_factor must be >= 1");
    if (cfg.mask_range && cfg.mask_range->first >= cfg.mask_range->second)
        throw std::invalid_argument("mask range low must be below high");
}

struct CcBicluster {
    BiclusterIndex index;
    std::vector<std::size_t> inverted_rows;  // rows included with their sign flipped
    double msr = 0.0;
};

namespace detail {

// Means and residue contributions of the current (I, J) block, with optional
// sign flips on inverted rows.
struct CcState {
    const ExpressionMatrix* m;
    std::vector<std::size_t> rows, cols;
    std::vector<char> inverted;  // per original row index

    double value(std::size_t i, std::size_t j) const {
        const double v = m->at(i, j);
        return inverted[i] ? -v : v;
    }

    void means(std::vector<double>& row_mean, std::vector<double>& col_mean,
               double& grand) const {
        row_mean.assign(m->n_genes, 0.0);
        col_mean.assign(m->n_conditions, 0.0);
        grand = 0.0;
        for (std::size_t i : rows)
            for (std::size_t j : cols) {
                const double v = value(i, j);
                row_mean[i] += v;
                col_mean[j] += v;
                grand += v;
            }
        for (std::size_t i : rows) row_mean[i] /= static_cast<double>(cols.size());
        for (std::size_t j : cols) col_mean[j] /= static_cast<double>(rows.size());
        grand /= static_cast<double>(rows.size() * cols.size());
    }

    double msr() const {
        std::vector<double> rm, cm;
        double g;
        means(rm, cm, g);
        double sum = 0.0;
        for (std::size_t i : rows)
            for (std::size_t j : cols) {
                const double r = value(i, j) - rm[i] - cm[j] + g;
                sum += r * r;
            }
        return sum / static_cast<double>(rows.size() * cols.size());
    }
};

}  // namespace detail

/// MSR-driven greedy deletion: drops the row/column with the largest mean
/// squared residue contribution until MSR falls under the threshold. A
/// multiple-deletion pass handles axes longer than the configured minimum.
inline BiclusterIndex cc_node_deletion(const ExpressionMatrix& m, const CcConfig& cfg,
                                       std::vector<double>* msr_trace = nullptr) {
    validate(cfg);
    detail::CcState st;
    st.m = &m;
    st.inverted.assign(m.n_genes, 0);
    st.rows.resize(m.n_genes);
    st.cols.resize(m.n_conditions);
    for (std::size_t i = 0; i < m.n_genes; ++i) st.rows[i] = i;
    for (std::size_t j = 0; j < m.n_conditions; ++j) st.cols[j] = j;

    std::vector<double> rm, cm;
    double grand;
    for (;;) {
        st.means(rm, cm, grand);
        double msr = 0.0;
        std::vector<double> row_d(m.n_genes, 0.0), col_d(m.n_conditions, 0.0);
        for (std::size_t i : st.rows)
            for (std::size_t j : st.cols) {
                const double r = st.value(i, j) - rm[i] - cm[j] + grand;
                row_d[i] += r * r;
                col_d[j] += r * r;
                msr += r * r;
            }
        for (std::size_t i : st.rows) row_d[i] /= static_cast<double>(st.cols.size());
        for (std::size_t j : st.cols) col_d[j] /= static_cast<double>(st.rows.size());
        msr /= static_cast<double>(st.rows.size() * st.cols.size());
        if (msr_trace) msr_trace->push_back(msr);
        if (msr <= cfg.msr_threshold) break;

        bool removed = false;
        if (st.rows.size() > cfg.multiple_deletion_min_axis) {
            std::vector<std::size_t> keep;
            for (std::size_t i : st.rows)
                if (row_d[i] <= cfg.multiple_deletion_factor * msr) keep.push_back(i);
            if (keep.size() >= 2 && keep.size() < st.rows.size()) {
                st.rows = std::move(keep);
                removed = true;
            }
        }
        if (!removed && st.cols.size() > cfg.multiple_deletion_min_axis) {
            st.means(rm, cm, grand);
            std::vector<double> cd(m.n_conditions, 0.0);
            double cur = 0.0;
            for (std::size_t i : st.rows)
                for (std::size_t j : st.cols) {
                    const double r = st.value(i, j) - rm[i] - cm[j] + grand;
                    cd[j] += r * r;
                    cur += r * r;
                }
            for (std::size_t j : st.cols) cd[j] /= static_cast<double>(st.rows.size());
            cur /= static_cast<double>(st.rows.size() * st.cols.size());
            std::vector<std::size_t> keep;
            for (std::size_t j : st.cols)
                if (cd[j] <= cfg.multiple_deletion_factor * cur) keep.push_back(j);
            if (keep.size() >= 2 && keep.size() < st.cols.size()) {
                st.cols = std::move(keep);
                removed = true;
            }
        }
        if (removed) continue;

        // single node deletion
        std::size_t i_star = m.n_genes;
        double best_row = -1.0;
        for (std::size_t i : st.rows)
            if (row_d[i] > best_row) {
                best_row = row_d[i];
                i_star = i;
            }
        std::size_t j_star = m.n_conditions;
        double best_col = -1.0;
        for (std::size_t j : st.cols)
            if (col_d[j] > best_col) {
                best_col = col_d[j];
                j_star = j;
            }
        const bool can_drop_row = st.rows.size() > 2;
        const bool can_drop_col = st.cols.size() > 2;
        if (!can_drop_row && !can_drop_col) break;  // 2x2 floor
        bool drop_row;
        if (can_drop_row && can_drop_col)
            drop_row = best_row >= best_col;
        else
            drop_row = can_drop_row;
        if (drop_row)
            st.rows.erase(std::lower_bound(st.rows.begin(), st.rows.end(), i_star));
        else
            st.cols.erase(std::lower_bound(st.cols.begin(), st.cols.end(), j_star));
    }
    BiclusterIndex out;
    out.rows = st.rows;
    out.cols = st.cols;
    return out;
}

/// MSR-driven addition: re-admits columns then rows (and inverted rows when
/// enabled) whose mean residue does not exceed the current MSR.
inline CcBicluster cc_node_addition(const ExpressionMatrix& m, const BiclusterIndex& idx,
                                    const CcConfig& cfg) {
    validate(cfg);
    validate_index(m, idx);
    detail::CcState st;
    st.m = &m;
    st.inverted.assign(m.n_genes, 0);
    st.rows = idx.rows;
    st.cols = idx.cols;

    std::vector<char> in_row(m.n_genes, 0), in_col(m.n_conditions, 0);
    for (std::size_t i : st.rows) in_row[i] = 1;
    for (std::size_t j : st.cols) in_col[j] = 1;

    std::vector<double> rm, cm;
    double grand;
    bool added = true;
    while (added) {
        added = false;
        double h = st.msr();
        st.means(rm, cm, grand);
        std::vector<std::size_t> new_cols;
        for (std::size_t j = 0; j < m.n_conditions; ++j) {
            if (in_col[j]) continue;
            double colm = 0.0;
            for (std::size_t i : st.rows) colm += st.value(i, j);
            colm /= static_cast<double>(st.rows.size());
            double score = 0.0;
            for (std::size_t i : st.rows) {
                const double r = st.value(i, j) - rm[i] - colm + grand;
                score += r * r;
            }
            score /= static_cast<double>(st.rows.size());
            if (score <= h) new_cols.push_back(j);
        }
        for (std::size_t j : new_cols) {
            st.cols.insert(std::lower_bound(st.cols.begin(), st.cols.end(), j), j);
            in_col[j] = 1;
            added = true;
        }

        h = st.msr();
        st.means(rm, cm, grand);
        std::vector<std::pair<std::size_t, bool>> new_rows;  // (row, inverted)
        for (std::size_t i = 0; i < m.n_genes; ++i) {
            if (in_row[i]) continue;
            double rowm = 0.0;
            for (std::size_t j : st.cols) rowm += m.at(i, j);
            rowm /= static_cast<double>(st.cols.size());
            double score = 0.0;
            for (std::size_t j : st.cols) {
                const double r = m.at(i, j) - rowm - cm[j] + grand;
                score += r * r;
            }
            score /= static_cast<double>(st.cols.size());
            if (score <= h) {
                new_rows.emplace_back(i, false);
                continue;
            }
            if (cfg.inverted_rows) {
                double inv_score = 0.0;
                for (std::size_t j : st.cols) {
                    const double r = -m.at(i, j) + rowm - cm[j] + grand;
                    inv_score += r * r;
                }
                inv_score /= static_cast<double>(st.cols.size());
                if (inv_score <= h) new_rows.emplace_back(i, true);
            }
        }
        for (auto [i, inv] : new_rows) {
            st.rows.insert(std::lower_bound(st.rows.begin(), st.rows.end(), i), i);
            in_row[i] = 1;
            if (inv) st.inverted[i] = 1;
            added = true;
        }
    }
    CcBicluster out;
    out.index.rows = st.rows;
    out.index.cols = st.cols;
    for (std::size_t i = 0; i < m.n_genes; ++i)
        if (st.inverted[i]) out.inverted_rows.push_back(i);
    out.msr = st.msr();
    return out;
}

/// Full Cheng-Church loop: deletion, addition, then mask the found block with
/// seeded uniform noise before the next round.
inline std::vector<CcBicluster> cc_discover(const ExpressionMatrix& m, const CcConfig& cfg) {
    validate(cfg);
    double lo, hi;
    if (cfg.mask_range) {
        lo = cfg.mask_range->first;
        hi = cfg.mask_range->second;
    } else {
        lo = *std::min_element(m.values.begin(), m.values.end());
        hi = *std::max_element(m.values.begin(), m.values.end());
        if (lo == hi) hi = lo + 1.0;
    }
    std::mt19937_64 rng(cfg.seed);
    ExpressionMatrix work = m;
    std::vector<CcBicluster> out;
    for (std::size_t t = 0; t < cfg.k_biclusters; ++t) {
        const BiclusterIndex idx = cc_node_deletion(work, cfg);
        CcBicluster b = cc_node_addition(work, idx, cfg);
        const bool keep = b.index.rows.size() >= 2 && b.index.cols.size() >= 2 &&
                          b.msr <= cfg.msr_threshold;
        // mask before (possibly) skipping so the next round sees fresh cells
        std::uniform_real_distribution<double> dist(lo, hi);
        for (std::size_t i : b.index.rows)
            for (std::size_t j : b.index.cols) work.at(i, j) = dist(rng);
        if (keep) out.push_back(std::move(b));
    }
    return out;
}

}  // namespace fbc
