#pragma once

// Independent straight-line reimplementations used as test oracles. These
// deliberately avoid the incremental range caches of the library path and
// recompute everything from scratch at every step.

#include <cmath>
#include <cstddef>
#include <vector>

#include "fbc/matrix.hpp"
#include "fbc/partition.hpp"
#include "fbc/search.hpp"

namespace oracle {

// Counting-measure memberships by explicit double loop.
inline fbc::PartitionMatrix partition_brute(const fbc::ExpressionMatrix& m,
                                            fbc::Orientation orientation) {
    fbc::PartitionMatrix p;
    p.n_rows = m.n_genes;
    p.n_cols = m.n_conditions;
    p.orientation = orientation;
    p.memberships.resize(p.n_rows * p.n_cols);
    for (std::size_t i = 0; i < m.n_genes; ++i)
        for (std::size_t j = 0; j < m.n_conditions; ++j) {
            std::size_t count = 0;
            if (orientation == fbc::Orientation::GenesAsUniverse) {
                for (std::size_t k = 0; k < m.n_genes; ++k)
                    if (m.at(k, j) <= m.at(i, j)) ++count;
                p.at(i, j) = static_cast<double>(count) / static_cast<double>(m.n_genes);
            } else {
                for (std::size_t l = 0; l < m.n_conditions; ++l)
                    if (m.at(i, l) <= m.at(i, j)) ++count;
                p.at(i, j) = static_cast<double>(count) / static_cast<double>(m.n_conditions);
            }
        }
    return p;
}

inline double col_range(const fbc::DeltaMatrix& d, const std::vector<std::size_t>& rows,
                        std::size_t j) {
    double lo = d.at(rows[0], j), hi = lo;
    for (std::size_t i : rows) {
        lo = std::min(lo, d.at(i, j));
        hi = std::max(hi, d.at(i, j));
    }
    return hi - lo;
}

inline double row_range(const fbc::PartitionMatrix& u_c, std::size_t i,
                        const std::vector<std::size_t>& cols) {
    double lo = u_c.at(i, cols[0]), hi = lo;
    for (std::size_t j : cols) {
        lo = std::min(lo, u_c.at(i, j));
        hi = std::max(hi, u_c.at(i, j));
    }
    return hi - lo;
}

inline double mu_of(const fbc::DeltaMatrix& d, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
    double sum = 0.0;
    for (std::size_t j : cols) sum += col_range(d, rows, j);
    return sum / static_cast<double>(cols.size());
}

inline double u_of(const fbc::PartitionMatrix& u_c, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols) {
    double sum = 0.0;
    for (std::size_t i : rows) sum += row_range(u_c, i, cols);
    return sum / static_cast<double>(rows.size());
}

struct ReplayResult {
    std::vector<std::size_t> rows, cols;
    double mu = 0.0, u = 0.0;
    bool degenerate = false;
};

// Node deletion as a straight-line replay, naive recomputation per iteration.
inline ReplayResult replay_deletion(const fbc::DeltaMatrix& d, const fbc::PartitionMatrix& u_c,
                                    double alpha, double beta) {
    std::vector<std::size_t> I(d.n_rows), J(d.n_cols);
    for (std::size_t i = 0; i < d.n_rows; ++i) I[i] = i;
    for (std::size_t j = 0; j < d.n_cols; ++j) J[j] = j;
    const double mu_full = mu_of(d, I, J);
    const double u_full = u_of(u_c, I, J);
    const std::size_t g = d.reference_gene;
    ReplayResult res;
    for (;;) {
        const double mu_ij = mu_of(d, I, J);
        const double u_ij = u_of(u_c, I, J);
        const bool mu_ok = mu_full == 0.0 || mu_ij <= mu_full / alpha;
        const bool u_ok = u_full == 0.0 || u_ij <= u_full / beta;
        if (mu_ok && u_ok) {
            res.mu = mu_ij;
            res.u = u_ij;
            res.degenerate = false;
            break;
        }
        std::size_t j_star = J[0];
        double best_col = -1.0;
        for (std::size_t j : J) {
            const double r = col_range(d, I, j);
            if (r > best_col) {
                best_col = r;
                j_star = j;
            }
        }
        std::size_t i_star = 0;
        double best_row = -1.0;
        for (std::size_t i : I) {
            if (i == g) continue;
            const double r = row_range(u_c, i, J);
            if (r > best_row) {
                best_row = r;
                i_star = i;
            }
        }
        const double col_term = mu_full == 0.0 ? 0.0 : alpha * best_col / mu_full;
        const double row_term = u_full == 0.0 ? 0.0 : beta * best_row / u_full;
        const bool drop_col = col_term > row_term;
        if (drop_col ? J.size() <= 2 : I.size() <= 2) {
            res.mu = mu_ij;
            res.u = u_ij;
            res.degenerate = true;
            break;
        }
        if (drop_col)
            J.erase(std::find(J.begin(), J.end(), j_star));
        else
            I.erase(std::find(I.begin(), I.end(), i_star));
    }
    res.rows = I;
    res.cols = J;
    return res;
}

inline ReplayResult replay_addition(const fbc::DeltaMatrix& d, const fbc::PartitionMatrix& u_c,
                                    ReplayResult b, double alpha, double beta) {
    std::vector<std::size_t> full_I(d.n_rows), full_J(d.n_cols);
    for (std::size_t i = 0; i < d.n_rows; ++i) full_I[i] = i;
    for (std::size_t j = 0; j < d.n_cols; ++j) full_J[j] = j;
    const double mu_full = mu_of(d, full_I, full_J);
    const double u_full = u_of(u_c, full_I, full_J);

    auto in = [](const std::vector<std::size_t>& v, std::size_t x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    bool added = true;
    while (added) {
        added = false;
        for (std::size_t j = 0; j < d.n_cols; ++j) {
            if (in(b.cols, j)) continue;
            std::vector<std::size_t> J2(b.cols);
            J2.insert(std::lower_bound(J2.begin(), J2.end(), j), j);
            const double mu_new = mu_of(d, b.rows, J2);
            const double u_new = u_of(u_c, b.rows, J2);
            const bool mu_ok = mu_full == 0.0 || mu_new <= mu_full / alpha;
            const bool u_ok = u_full == 0.0 || u_new <= u_full / beta;
            if (mu_ok && u_ok) {
                b.cols = J2;
                added = true;
            }
        }
        for (std::size_t i = 0; i < d.n_rows; ++i) {
            if (in(b.rows, i)) continue;
            std::vector<std::size_t> I2(b.rows);
            I2.insert(std::lower_bound(I2.begin(), I2.end(), i), i);
            const double mu_new = mu_of(d, I2, b.cols);
            const double u_new = u_of(u_c, I2, b.cols);
            const bool mu_ok = mu_full == 0.0 || mu_new <= mu_full / alpha;
            const bool u_ok = u_full == 0.0 || u_new <= u_full / beta;
            if (mu_ok && u_ok) {
                b.rows = I2;
                added = true;
            }
        }
    }
    b.mu = mu_of(d, b.rows, b.cols);
    b.u = u_of(u_c, b.rows, b.cols);
    return b;
}

// Per-reference deletion + addition, from raw memberships.
inline ReplayResult replay_reference(const fbc::PartitionMatrix& u_g,
                                     const fbc::PartitionMatrix& u_c, std::size_t g_star,
                                     double alpha, double beta) {
    const fbc::DeltaMatrix d = fbc::delta_matrix(u_g, g_star);
    ReplayResult del = replay_deletion(d, u_c, alpha, beta);
    if (del.degenerate) return del;
    return replay_addition(d, u_c, del, alpha, beta);
}

// Direct evaluation of the reference scoring formula: FCM memberships via the
// inverse-distance form, acceptance at phi_1 > 0.5, per-condition means of
// accepted similarities averaged over conditions.
inline double reference_score_brute(const fbc::PartitionMatrix& u_g, std::size_t i,
                                    double fuzziness = 2.0) {
    const std::size_t n = u_g.n_rows, m = u_g.n_cols;
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> s(n);
        for (std::size_t k = 0; k < n; ++k) s[k] = 1.0 - std::fabs(u_g.at(k, j) - u_g.at(i, j));
        const double v1 = *std::max_element(s.begin(), s.end());
        const double v2 = *std::min_element(s.begin(), s.end());
        double acc_sum = 0.0;
        std::size_t acc_n = 0;
        for (std::size_t k = 0; k < n; ++k) {
            double phi1;
            if (v1 == v2)
                phi1 = 1.0;
            else {
                const double d1 = std::fabs(s[k] - v1);
                const double d2 = std::fabs(s[k] - v2);
                if (d1 == 0.0)
                    phi1 = 1.0;
                else if (d2 == 0.0)
                    phi1 = 0.0;
                else {
                    const double w1 = std::pow(d1, -2.0 / (fuzziness - 1.0));
                    const double w2 = std::pow(d2, -2.0 / (fuzziness - 1.0));
                    phi1 = w1 / (w1 + w2);
                }
            }
            if (phi1 > 0.5) {
                acc_sum += s[k];
                ++acc_n;
            }
        }
        total += acc_n > 0 ? acc_sum / static_cast<double>(acc_n) : 0.0;
    }
    return total / static_cast<double>(m);
}

}  // namespace oracle
