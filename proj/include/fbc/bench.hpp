#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbc/cc.hpp"
#include "fbc/matrix.hpp"
#include "fbc/metrics.hpp"
#include "fbc/search.hpp"

namespace fbc {

struct ExperimentConfig {
    std::string dataset_path;
    MatrixFormat format = MatrixFormat::PlainNumeric;
    std::optional<double> missing_sentinel;
    bool run_fbc = true;
    bool run_cc = true;
    SearchConfig fbc;
    CcConfig cc;
    std::size_t repetitions = 10;
    std::uint64_t base_seed = 0;
    std::string out_dir;  // empty: no files written
};

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (!cfg.run_fbc && !cfg.run_cc) throw std::invalid_argument("no algorithm selected");
}

struct BiclusterRecord {
    std::string algorithm;  // "fbc" or "cc"
    std::size_t repetition = 0;
    std::size_t id = 0;
    std::string reference_label;  // empty for cc
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::string> inverted_row_labels;  // cc only
    double mu_score = 0.0;
    double u_score = 0.0;
    BiclusterMetrics metrics;
};

struct AlgorithmSummary {
    std::vector<BiclusterRecord> records;
    double var_mean = 0.0, var_std = 0.0;
    double mfd_mean = 0.0, mfd_std = 0.0;
    double runtime_seconds = 0.0;
};

struct ExperimentReport {
    std::string dataset;
    std::size_t repetitions = 0;
    std::uint64_t base_seed = 0;
    std::map<std::string, AlgorithmSummary> algorithms;
    bool empty_warning = false;  // no biclusters across all repetitions
    std::string generated_at;
};

namespace detail {

inline void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline void aggregate(AlgorithmSummary& s) {
    std::vector<double> vars, mfds;
    for (const auto& r : s.records) {
        vars.push_back(r.metrics.var);
        mfds.push_back(r.metrics.mfd);
    }
    mean_std(vars, s.var_mean, s.var_std);
    mean_std(mfds, s.mfd_mean, s.mfd_std);
}

inline std::vector<std::string> pick_labels(const std::vector<std::string>& labels,
                                            const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(labels[i]);
    return out;
}

}  // namespace detail

inline nlohmann::json to_json(const BiclusterRecord& r) {
    return nlohmann::json{{"algorithm", r.algorithm},
                          {"repetition", r.repetition},
                          {"id", r.id},
                          {"reference_label", r.reference_label},
                          {"row_labels", r.row_labels},
                          {"col_labels", r.col_labels},
                          {"inverted_row_labels", r.inverted_row_labels},
                          {"mu_score", r.mu_score},
                          {"u_score", r.u_score},
                          {"var", r.metrics.var},
                          {"mfd", r.metrics.mfd},
                          {"msr", r.metrics.msr},
                          {"rows", r.metrics.rows},
                          {"cols", r.metrics.cols}};
}

inline nlohmann::json to_json(const ExperimentReport& rep, bool include_timing = true) {
    nlohmann::json algs = nlohmann::json::object();
    for (const auto& [name, s] : rep.algorithms) {
        nlohmann::json recs = nlohmann::json::array();
        for (const auto& r : s.records) recs.push_back(to_json(r));
        nlohmann::json entry{{"records", recs},
                             {"aggregates",
                              {{"n_biclusters", s.records.size()},
                               {"var_mean", s.var_mean},
                               {"var_std", s.var_std},
                               {"mfd_mean", s.mfd_mean},
                               {"mfd_std", s.mfd_std}}}};
        if (include_timing) entry["runtime_seconds"] = s.runtime_seconds;
        algs[name] = entry;
    }
    nlohmann::json j{{"dataset", rep.dataset},
                     {"repetitions", rep.repetitions},
                     {"base_seed", rep.base_seed},
                     {"algorithms", algs},
                     {"empty_warning", rep.empty_warning}};
    if (include_timing) j["generated_at"] = rep.generated_at;
    return j;
}

/// One comparison row per algorithm, plus fbc-over-cc relative improvement
/// percentages when both are present.
struct ComparisonTable {
    struct Row {
        std::string algorithm;
        double var_mean, var_std, mfd_mean, mfd_std;
        std::size_t n_biclusters;
    };
    std::vector<Row> rows;
    std::optional<double> var_improvement_pct;  // 100*(cc - fbc)/cc
    std::optional<double> mfd_improvement_pct;
};

inline ComparisonTable compare_table(const ExperimentReport& rep) {
    if (rep.algorithms.empty()) throw std::invalid_argument("report has no algorithm sections");
    ComparisonTable t;
    for (const auto& [name, s] : rep.algorithms)
        t.rows.push_back({name, s.var_mean, s.var_std, s.mfd_mean, s.mfd_std, s.records.size()});
    auto fbc_it = rep.algorithms.find("fbc");
    auto cc_it = rep.algorithms.find("cc");
    if (fbc_it != rep.algorithms.end() && cc_it != rep.algorithms.end()) {
        if (cc_it->second.var_mean != 0.0)
            t.var_improvement_pct =
                100.0 * (cc_it->second.var_mean - fbc_it->second.var_mean) / cc_it->second.var_mean;
        if (cc_it->second.mfd_mean != 0.0)
            t.mfd_improvement_pct =
                100.0 * (cc_it->second.mfd_mean - fbc_it->second.mfd_mean) / cc_it->second.mfd_mean;
    }
    return t;
}

namespace detail {

inline void write_report_files(const ExperimentReport& rep, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "report.json");
        out << to_json(rep).dump(2) << '\n';
    }
    {
        std::ofstream out(fs::path(dir) / "summary.csv");
        out << "algorithm,n_biclusters,var_mean,var_std,mfd_mean,mfd_std,runtime_seconds\n";
        for (const auto& [name, s] : rep.algorithms)
            out << name << ',' << s.records.size() << ',' << s.var_mean << ',' << s.var_std << ','
                << s.mfd_mean << ',' << s.mfd_std << ',' << s.runtime_seconds << '\n';
    }
    {
        std::ofstream out(fs::path(dir) / "biclusters.csv");
        out << "algorithm,repetition,id,rows,cols,var,mfd,msr\n";
        for (const auto& [name, s] : rep.algorithms)
            for (const auto& r : s.records)
                out << name << ',' << r.repetition << ',' << r.id << ',' << r.metrics.rows << ','
                    << r.metrics.cols << ',' << r.metrics.var << ',' << r.metrics.mfd << ','
                    << r.metrics.msr << '\n';
    }
    for (const auto& [name, s] : rep.algorithms) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : s.records) arr.push_back(to_json(r));
        std::ofstream out(fs::path(dir) / ("biclusters_" + name + ".json"));
        out << arr.dump(2) << '\n';
    }
    {
        const ComparisonTable t = compare_table(rep);
        std::ofstream out(fs::path(dir) / "compare.csv");
        out << "algorithm,n_biclusters,var_mean,var_std,mfd_mean,mfd_std\n";
        for (const auto& row : t.rows)
            out << row.algorithm << ',' << row.n_biclusters << ',' << row.var_mean << ','
                << row.var_std << ',' << row.mfd_mean << ',' << row.mfd_std << '\n';
        if (t.mfd_improvement_pct)
            out << "# fbc over cc mfd improvement %," << *t.mfd_improvement_pct << '\n';
        if (t.var_improvement_pct)
            out << "# fbc over cc var improvement %," << *t.var_improvement_pct << '\n';
    }
}

inline std::vector<BiclusterRecord> fbc_repetition(const ExpressionMatrix& m,
                                                   const SearchConfig& cfg, std::size_t rep) {
    std::vector<BiclusterRecord> out;
    const auto found = discover(m, cfg);
    std::size_t id = 0;
    for (const Bicluster& b : found) {
        BiclusterRecord r;
        r.algorithm = "fbc";
        r.repetition = rep;
        r.id = id++;
        r.reference_label = m.gene_labels[b.reference];
        r.row_labels = pick_labels(m.gene_labels, b.index.rows);
        r.col_labels = pick_labels(m.condition_labels, b.index.cols);
        r.mu_score = b.mu_score;
        r.u_score = b.u_score;
        r.metrics = evaluate_metrics(submatrix(m, b.index));
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<BiclusterRecord> cc_repetition(const ExpressionMatrix& m, CcConfig cfg,
                                                  std::size_t rep, std::uint64_t seed) {
    cfg.seed = seed;
    std::vector<BiclusterRecord> out;
    const auto found = cc_discover(m, cfg);
    std::size_t id = 0;
    for (const CcBicluster& b : found) {
        BiclusterRecord r;
        r.algorithm = "cc";
        r.repetition = rep;
        r.id = id++;
        r.row_labels = pick_labels(m.gene_labels, b.index.rows);
        r.col_labels = pick_labels(m.condition_labels, b.index.cols);
        r.inverted_row_labels = pick_labels(m.gene_labels, b.inverted_rows);
        // var/mfd evaluated on the input data; msr is the value the search
        // guaranteed on its working copy (inversion-adjusted)
        r.metrics = evaluate_metrics(submatrix(m, b.index));
        r.metrics.msr = b.msr;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    using clock = std::chrono::steady_clock;
    ExperimentReport rep;
    rep.dataset = cfg.dataset_path;
    rep.repetitions = cfg.repetitions;
    rep.base_seed = cfg.base_seed;
    {
        const auto now = std::chrono::system_clock::now();
        rep.generated_at = std::to_string(
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    }

    // Without a missing sentinel the dataset is identical across repetitions
    // and FBC is deterministic, so its repetitions collapse to one search.
    const bool reload_per_rep = cfg.missing_sentinel.has_value();
    ExpressionMatrix base;
    if (!reload_per_rep) base = load_matrix(cfg.dataset_path, cfg.format, {});

    if (cfg.run_fbc) {
        AlgorithmSummary s;
        const auto t0 = clock::now();
        std::vector<BiclusterRecord> cached;
        for (std::size_t r = 0; r < cfg.repetitions; ++r) {
            if (reload_per_rep) {
                MissingPolicy pol{cfg.missing_sentinel, cfg.base_seed + r};
                const ExpressionMatrix m = load_matrix(cfg.dataset_path, cfg.format, pol);
                auto recs = detail::fbc_repetition(m, cfg.fbc, r);
                s.records.insert(s.records.end(), recs.begin(), recs.end());
            } else {
                if (r == 0) cached = detail::fbc_repetition(base, cfg.fbc, 0);
                for (BiclusterRecord rec : cached) {
                    rec.repetition = r;
                    s.records.push_back(std::move(rec));
                }
            }
        }
        s.runtime_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        detail::aggregate(s);
        rep.algorithms["fbc"] = std::move(s);
    }
    if (cfg.run_cc) {
        AlgorithmSummary s;
        const auto t0 = clock::now();
        for (std::size_t r = 0; r < cfg.repetitions; ++r) {
            const std::uint64_t seed = cfg.base_seed + r;
            if (reload_per_rep) {
                MissingPolicy pol{cfg.missing_sentinel, seed};
                const ExpressionMatrix m = load_matrix(cfg.dataset_path, cfg.format, pol);
                auto recs = detail::cc_repetition(m, cfg.cc, r, seed);
                s.records.insert(s.records.end(), recs.begin(), recs.end());
            } else {
                auto recs = detail::cc_repetition(base, cfg.cc, r, seed);
                s.records.insert(s.records.end(), recs.begin(), recs.end());
            }
        }
        s.runtime_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        detail::aggregate(s);
        rep.algorithms["cc"] = std::move(s);
    }

    rep.empty_warning = true;
    for (const auto& [name, s] : rep.algorithms)
        if (!s.records.empty()) rep.empty_warning = false;

    if (!cfg.out_dir.empty()) detail::write_report_files(rep, cfg.out_dir);
    return rep;
}

}  // namespace fbc
