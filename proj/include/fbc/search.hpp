#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fbc/matrix.hpp"
#include "fbc/partition.hpp"
#include "fbc/reference.hpp"

namespace fbc {

struct SearchConfig {
    double alpha = 5.0;
    double beta = 1.8;
    std::size_t k_biclusters = 100;
    double dedupe_jaccard = 0.9;
    double fuzziness = 2.0;
    std::uint64_t seed = 0;
};

inline void validate(const SearchConfig& cfg) {
    if (cfg.alpha <= 0.0 || cfg.beta <= 0.0)
        throw std::invalid_argument("alpha and beta must be positive");
    if (cfg.dedupe_jaccard < 0.0 || cfg.dedupe_jaccard > 1.0)
        throw std::invalid_argument("dedupe_jaccard must lie in [0,1]");
    if (cfg.fuzziness <= 1.0) throw std::invalid_argument("fuzziness must exceed 1");
}

struct Bicluster {
    BiclusterIndex index;
    std::size_t reference = 0;
    double mu_score = 0.0;
    double u_score = 0.0;
    bool degenerate = false;
};

/// Range of a delta column over the row set I.
inline double col_score(const DeltaMatrix& d, const std::vector<std::size_t>& rows,
                        std::size_t j) {
    if (rows.empty()) throw std::invalid_argument("col_score on empty row set");
    double lo = d.at(rows[0], j), hi = lo;
    for (std::size_t i : rows) {
        const double v = d.at(i, j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

/// Range of a condition-membership row over the column set J.
inline double row_score(const PartitionMatrix& u_c, std::size_t i,
                        const std::vector<std::size_t>& cols) {
    if (cols.empty()) throw std::invalid_argument("row_score on empty column set");
    double lo = u_c.at(i, cols[0]), hi = lo;
    for (std::size_t j : cols) {
        const double v = u_c.at(i, j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

/// Column dissimilarity score: mean column range over J.
inline double mu_score(const DeltaMatrix& d, const BiclusterIndex& idx) {
    double sum = 0.0;
    for (std::size_t j : idx.cols) sum += col_score(d, idx.rows, j);
    return sum / static_cast<double>(idx.cols.size());
}

/// Row dissimilarity score: mean row range over I.
inline double u_score(const PartitionMatrix& u_c, const BiclusterIndex& idx) {
    double sum = 0.0;
    for (std::size_t i : idx.rows) sum += row_score(u_c, i, idx.cols);
    return sum / static_cast<double>(idx.rows.size());
}

namespace detail {

// Range caches over the active row/column sets. Column ranges are over the
// delta matrix restricted to I; row ranges are over the condition memberships
// restricted to J. Maintained for every column resp. row so node addition can
// test outside candidates in O(M) / O(|J|).
struct RangeState {
    const DeltaMatrix* d;
    const PartitionMatrix* u_c;
    std::vector<std::size_t> rows;  // I, sorted
    std::vector<std::size_t> cols;  // J, sorted
    std::vector<double> col_lo, col_hi;  // per column, over I
    std::vector<double> row_lo, row_hi;  // per row, over J

    void init(const DeltaMatrix& dm, const PartitionMatrix& uc,
              std::vector<std::size_t> I, std::vector<std::size_t> J) {
        d = &dm;
        u_c = &uc;
        rows = std::move(I);
        cols = std::move(J);
        col_lo.resize(dm.n_cols);
        col_hi.resize(dm.n_cols);
        row_lo.resize(dm.n_rows);
        row_hi.resize(dm.n_rows);
        for (std::size_t j = 0; j < dm.n_cols; ++j) rescan_col(j);
        for (std::size_t i = 0; i < dm.n_rows; ++i) rescan_row(i);
    }

    void rescan_col(std::size_t j) {
        double lo = d->at(rows[0], j), hi = lo;
        for (std::size_t i : rows) {
            const double v = d->at(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        col_lo[j] = lo;
        col_hi[j] = hi;
    }

    void rescan_row(std::size_t i) {
        double lo = u_c->at(i, cols[0]), hi = lo;
        for (std::size_t j : cols) {
            const double v = u_c->at(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        row_lo[i] = lo;
        row_hi[i] = hi;
    }

    double mu() const {
        double sum = 0.0;
        for (std::size_t j : cols) sum += col_hi[j] - col_lo[j];
        return sum / static_cast<double>(cols.size());
    }

    double u() const {
        double sum = 0.0;
        for (std::size_t i : rows) sum += row_hi[i] - row_lo[i];
        return sum / static_cast<double>(rows.size());
    }

    void remove_row(std::size_t r) {
        rows.erase(std::lower_bound(rows.begin(), rows.end(), r));
        for (std::size_t j = 0; j < d->n_cols; ++j) {
            const double v = d->at(r, j);
            if (v == col_lo[j] || v == col_hi[j]) rescan_col(j);
        }
    }

    void remove_col(std::size_t c) {
        cols.erase(std::lower_bound(cols.begin(), cols.end(), c));
        for (std::size_t i = 0; i < d->n_rows; ++i) {
            const double v = u_c->at(i, c);
            if (v == row_lo[i] || v == row_hi[i]) rescan_row(i);
        }
    }

    void add_row(std::size_t r) {
        rows.insert(std::lower_bound(rows.begin(), rows.end(), r), r);
        for (std::size_t j = 0; j < d->n_cols; ++j) {
            const double v = d->at(r, j);
            col_lo[j] = std::min(col_lo[j], v);
            col_hi[j] = std::max(col_hi[j], v);
        }
    }

    void add_col(std::size_t c) {
        cols.insert(std::lower_bound(cols.begin(), cols.end(), c), c);
        for (std::size_t i = 0; i < d->n_rows; ++i) {
            const double v = u_c->at(i, c);
            row_lo[i] = std::min(row_lo[i], v);
            row_hi[i] = std::max(row_hi[i], v);
        }
    }
};

inline double full_mu(const DeltaMatrix& d) {
    BiclusterIndex all;
    for (std::size_t i = 0; i < d.n_rows; ++i) all.rows.push_back(i);
    for (std::size_t j = 0; j < d.n_cols; ++j) all.cols.push_back(j);
    return mu_score(d, all);
}

inline double full_u(const PartitionMatrix& u_c) {
    BiclusterIndex all;
    for (std::size_t i = 0; i < u_c.n_rows; ++i) all.rows.push_back(i);
    for (std::size_t j = 0; j < u_c.n_cols; ++j) all.cols.push_back(j);
    return u_score(u_c, all);
}

}  // namespace detail

/// Greedy node deletion: starting from the full matrix, removes the row or
/// column with the worst normalized range until both dissimilarity scores
/// fall under their thresholds. The reference gene is never removed.
inline Bicluster node_deletion(const DeltaMatrix& d, const PartitionMatrix& u_c,
                               const SearchConfig& cfg) {
    validate(cfg);
    const double mu_full = detail::full_mu(d);
    const double u_full = detail::full_u(u_c);

    detail::RangeState st;
    {
        std::vector<std::size_t> I(d.n_rows), J(d.n_cols);
        for (std::size_t i = 0; i < d.n_rows; ++i) I[i] = i;
        for (std::size_t j = 0; j < d.n_cols; ++j) J[j] = j;
        st.init(d, u_c, std::move(I), std::move(J));
    }

    const std::size_t g_star = d.reference_gene;
    Bicluster out;
    out.reference = g_star;
    for (;;) {
        const double mu_ij = st.mu();
        const double u_ij = st.u();
        const bool mu_ok = mu_full == 0.0 || mu_ij <= mu_full / cfg.alpha;
        const bool u_ok = u_full == 0.0 || u_ij <= u_full / cfg.beta;
        if (mu_ok && u_ok) {
            out.mu_score = mu_ij;
            out.u_score = u_ij;
            out.degenerate = false;
            break;
        }
        // worst column and worst non-reference row, lowest index on ties
        std::size_t j_star = st.cols[0];
        double best_col = -1.0;
        for (std::size_t j : st.cols) {
            const double r = st.col_hi[j] - st.col_lo[j];
            if (r > best_col) {
                best_col = r;
                j_star = j;
            }
        }
        std::size_t i_star = d.n_rows;
        double best_row = -1.0;
        for (std::size_t i : st.rows) {
            if (i == g_star) continue;
            const double r = st.row_hi[i] - st.row_lo[i];
            if (r > best_row) {
                best_row = r;
                i_star = i;
            }
        }
        const double col_term = mu_full == 0.0 ? 0.0 : cfg.alpha * best_col / mu_full;
        const double row_term = u_full == 0.0 ? 0.0 : cfg.beta * best_row / u_full;
        const bool drop_col = col_term > row_term;
        if (drop_col ? st.cols.size() <= 2 : st.rows.size() <= 2) {
            out.mu_score = mu_ij;
            out.u_score = u_ij;
            out.degenerate = true;
            break;
        }
        if (drop_col)
            st.remove_col(j_star);
        else
            st.remove_row(i_star);
    }
    out.index.rows = st.rows;
    out.index.cols = st.cols;
    return out;
}

/// Greedy node addition: repeatedly re-admits outside columns then rows that
/// keep both scores under their thresholds, until a full pass adds nothing.
inline Bicluster node_addition(const DeltaMatrix& d, const PartitionMatrix& u_c,
                               const Bicluster& b, const SearchConfig& cfg) {
    validate(cfg);
    if (b.degenerate) throw std::invalid_argument("node_addition on degenerate bicluster");
    const double mu_full = detail::full_mu(d);
    const double u_full = detail::full_u(u_c);
    const double mu_cap = mu_full / cfg.alpha;
    const double u_cap = u_full / cfg.beta;

    detail::RangeState st;
    st.init(d, u_c, b.index.rows, b.index.cols);

    std::vector<char> in_row(d.n_rows, 0), in_col(d.n_cols, 0);
    for (std::size_t i : st.rows) in_row[i] = 1;
    for (std::size_t j : st.cols) in_col[j] = 1;

    bool added = true;
    while (added) {
        added = false;
        for (std::size_t j = 0; j < d.n_cols; ++j) {
            if (in_col[j]) continue;
            // scores with column j joined, summed in sorted-union order
            double mu_sum = 0.0;
            bool placed = false;
            for (std::size_t jj : st.cols) {
                if (!placed && j < jj) {
                    mu_sum += st.col_hi[j] - st.col_lo[j];
                    placed = true;
                }
                mu_sum += st.col_hi[jj] - st.col_lo[jj];
            }
            if (!placed) mu_sum += st.col_hi[j] - st.col_lo[j];
            const double mu_new = mu_sum / static_cast<double>(st.cols.size() + 1);
            double u_sum = 0.0;
            for (std::size_t i : st.rows) {
                const double v = u_c.at(i, j);
                u_sum += std::max(st.row_hi[i], v) - std::min(st.row_lo[i], v);
            }
            const double u_new = u_sum / static_cast<double>(st.rows.size());
            const bool mu_ok = mu_full == 0.0 || mu_new <= mu_cap;
            const bool u_ok = u_full == 0.0 || u_new <= u_cap;
            if (mu_ok && u_ok) {
                st.add_col(j);
                in_col[j] = 1;
                added = true;
            }
        }
        for (std::size_t i = 0; i < d.n_rows; ++i) {
            if (in_row[i]) continue;
            double mu_sum = 0.0;
            for (std::size_t j : st.cols) {
                const double v = d.at(i, j);
                mu_sum += std::max(st.col_hi[j], v) - std::min(st.col_lo[j], v);
            }
            const double mu_new = mu_sum / static_cast<double>(st.cols.size());
            double u_sum = 0.0;
            bool placed = false;
            for (std::size_t ii : st.rows) {
                if (!placed && i < ii) {
                    u_sum += st.row_hi[i] - st.row_lo[i];
                    placed = true;
                }
                u_sum += st.row_hi[ii] - st.row_lo[ii];
            }
            if (!placed) u_sum += st.row_hi[i] - st.row_lo[i];
            const double u_new = u_sum / static_cast<double>(st.rows.size() + 1);
            const bool mu_ok = mu_full == 0.0 || mu_new <= mu_cap;
            const bool u_ok = u_full == 0.0 || u_new <= u_cap;
            if (mu_ok && u_ok) {
                st.add_row(i);
                in_row[i] = 1;
                added = true;
            }
        }
    }
    Bicluster out;
    out.index.rows = st.rows;
    out.index.cols = st.cols;
    out.reference = b.reference;
    out.mu_score = st.mu();
    out.u_score = st.u();
    out.degenerate = false;
    return out;
}

/// Jaccard overlap of two biclusters' cell sets (I x J rectangles).
inline double cell_jaccard(const BiclusterIndex& a, const BiclusterIndex& b) {
    auto inter = [](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
        std::vector<std::size_t> out;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
        return out.size();
    };
    const double ri = static_cast<double>(inter(a.rows, b.rows));
    const double ci = static_cast<double>(inter(a.cols, b.cols));
    const double cells_a = static_cast<double>(a.rows.size() * a.cols.size());
    const double cells_b = static_cast<double>(b.rows.size() * b.cols.size());
    const double overlap = ri * ci;
    const double uni = cells_a + cells_b - overlap;
    return uni == 0.0 ? 0.0 : overlap / uni;
}

/// Full pipeline for a set of reference genes: deletion then addition per
/// reference, dropping degenerate and near-duplicate results.
inline std::vector<Bicluster> discover(const ExpressionMatrix& m, const SearchConfig& cfg,
                                       const std::optional<std::vector<std::size_t>>& refs =
                                           std::nullopt) {
    validate(cfg);
    const PartitionMatrix u_g = build_partition(m, Orientation::GenesAsUniverse);
    const PartitionMatrix u_c = build_partition(m, Orientation::ConditionsAsUniverse);

    std::vector<std::size_t> references;
    if (refs) {
        references = *refs;
        for (std::size_t g : references)
            if (g >= m.n_genes) throw std::out_of_range("reference gene out of range");
    } else {
        const auto scores = reference_scores(u_g, cfg.fuzziness);
        references = select_references(scores, std::min(cfg.k_biclusters, m.n_genes));
    }

    std::vector<Bicluster> kept;
    for (std::size_t g_star : references) {
        const DeltaMatrix d = delta_matrix(u_g, g_star);
        Bicluster b = node_deletion(d, u_c, cfg);
        if (b.degenerate) continue;
        b = node_addition(d, u_c, b, cfg);
        if (b.index.rows.size() < 2 || b.index.cols.size() < 2) continue;
        bool duplicate = false;
        for (const Bicluster& k : kept)
            if (cell_jaccard(b.index, k.index) > cfg.dedupe_jaccard) {
                duplicate = true;
                break;
            }
        if (!duplicate) kept.push_back(std::move(b));
    }
    return kept;
}

}  // namespace fbc
