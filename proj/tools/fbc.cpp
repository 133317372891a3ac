// Command-line driver: partition dumps, reference ranking, FBC and CC
// bicluster discovery, metric evaluation, and the full benchmark protocol.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbc/bench.hpp"
#include "fbc/cc.hpp"
#include "fbc/matrix.hpp"
#include "fbc/metrics.hpp"
#include "fbc/partition.hpp"
#include "fbc/reference.hpp"
#include "fbc/search.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string input;
    std::string format = "labeled";
    std::optional<double> missing_sentinel;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input", o.input, "dataset file")->required();
    cmd->add_option("--format", o.format, "matrix format: plain | labeled")
        ->check(CLI::IsMember({"plain", "labeled"}));
    cmd->add_option("--missing-sentinel", o.missing_sentinel,
                    "value marking missing entries (exact match)");
    cmd->add_option("--seed", o.seed, "RNG seed");
}

fbc::ExpressionMatrix load(const CommonOpts& o) {
    const auto fmt = o.format == "plain" ? fbc::MatrixFormat::PlainNumeric
                                         : fbc::MatrixFormat::LabeledDelimited;
    fbc::MissingPolicy pol{o.missing_sentinel, o.seed};
    return fbc::load_matrix(o.input, fmt, pol);
}

std::size_t gene_index(const fbc::ExpressionMatrix& m, const std::string& label) {
    for (std::size_t i = 0; i < m.n_genes; ++i)
        if (m.gene_labels[i] == label) return i;
    throw std::runtime_error("unknown gene label: " + label);
}

void write_partition_csv(const fbc::ExpressionMatrix& m, const std::vector<double>& vals,
                         std::size_t n_cols, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "gene";
    for (const auto& c : m.condition_labels) out << ',' << c;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < m.n_genes; ++i) {
        out << m.gene_labels[i];
        for (std::size_t j = 0; j < n_cols; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", vals[i * n_cols + j]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

nlohmann::json bicluster_json(const fbc::ExpressionMatrix& m, const std::string& algorithm,
                              std::size_t id, const fbc::BiclusterIndex& idx,
                              const std::string& reference_label, double mu, double u,
                              const fbc::BiclusterMetrics& met,
                              const std::vector<std::size_t>& inverted = {}) {
    std::vector<std::string> rows, cols, inv;
    for (std::size_t i : idx.rows) rows.push_back(m.gene_labels[i]);
    for (std::size_t j : idx.cols) cols.push_back(m.condition_labels[j]);
    for (std::size_t i : inverted) inv.push_back(m.gene_labels[i]);
    return nlohmann::json{{"id", id},
                          {"algorithm", algorithm},
                          {"reference_label", reference_label},
                          {"row_labels", rows},
                          {"col_labels", cols},
                          {"inverted_row_labels", inv},
                          {"mu_score", mu},
                          {"u_score", u},
                          {"var", met.var},
                          {"mfd", met.mfd},
                          {"msr", met.msr}};
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        out << j.dump(2) << '\n';
    }
}

void write_indicator_csvs(const fbc::ExpressionMatrix& m, const nlohmann::json& biclusters,
                          const std::string& prefix) {
    std::ofstream rows(prefix + "_rows.csv"), cols(prefix + "_cols.csv");
    rows << "id";
    for (const auto& g : m.gene_labels) rows << ',' << g;
    rows << '\n';
    cols << "id";
    for (const auto& c : m.condition_labels) cols << ',' << c;
    cols << '\n';
    for (const auto& b : biclusters) {
        std::vector<int> rmask(m.n_genes, 0), cmask(m.n_conditions, 0);
        for (const auto& lbl : b["row_labels"])
            rmask[gene_index(m, lbl.get<std::string>())] = 1;
        for (const auto& lbl : b["col_labels"])
            for (std::size_t j = 0; j < m.n_conditions; ++j)
                if (m.condition_labels[j] == lbl.get<std::string>()) cmask[j] = 1;
        rows << b["id"].get<std::size_t>();
        for (int v : rmask) rows << ',' << v;
        rows << '\n';
        cols << b["id"].get<std::size_t>();
        for (int v : cmask) cols << ',' << v;
        cols << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AFS-based fuzzy bi-clustering of gene expression matrices"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts part_o, refs_o, bic_o, cc_o, eval_o, bench_o;
    std::string out_path, ref_label;

    auto* part = app.add_subcommand("partition", "dump the fuzzy partition matrices as CSV");
    add_common(part, part_o);
    std::string part_out;
    part->add_option("--out", part_out, "output directory")->required();
    std::string part_ref;
    part->add_option("--ref", part_ref, "also dump the delta matrix for this reference gene");

    auto* refs = app.add_subcommand("select-refs", "rank genes by reference suitability");
    add_common(refs, refs_o);
    double refs_m = 2.0;
    refs->add_option("--fuzziness", refs_m, "FCM fuzziness exponent");
    std::string refs_out;
    refs->add_option("--out", refs_out, "CSV output file (default stdout)");

    auto* bic = app.add_subcommand("bicluster", "run the fuzzy bi-clustering search");
    add_common(bic, bic_o);
    fbc::SearchConfig scfg;
    bic->add_option("--alpha", scfg.alpha, "column scale factor");
    bic->add_option("--beta", scfg.beta, "row scale factor");
    bic->add_option("--k", scfg.k_biclusters, "number of biclusters / references");
    bic->add_option("--dedupe-jaccard", scfg.dedupe_jaccard, "cell Jaccard dedup threshold");
    bic->add_option("--fuzziness", scfg.fuzziness, "FCM fuzziness exponent");
    std::vector<std::string> explicit_refs;
    bic->add_option("--refs", explicit_refs, "explicit reference gene labels");
    std::string bic_out, indicator_prefix;
    bic->add_option("--out", bic_out, "JSON output file (default stdout)");
    bic->add_option("--indicators", indicator_prefix,
                    "prefix for row/column indicator CSVs");

    auto* cc = app.add_subcommand("cc", "run the Cheng-Church baseline");
    add_common(cc, cc_o);
    fbc::CcConfig ccfg;
    cc->add_option("--k", ccfg.k_biclusters, "number of biclusters");
    cc->add_option("--msr-threshold", ccfg.msr_threshold, "MSR homogeneity threshold");
    bool no_inverted = false;
    cc->add_flag("--no-inverted-rows", no_inverted, "disable inverted-row addition");
    std::string cc_out;
    cc->add_option("--out", cc_out, "JSON output file (default stdout)");

    auto* eval = app.add_subcommand("evaluate", "compute VAR/MFD/MSR for given biclusters");
    add_common(eval, eval_o);
    std::string eval_biclusters, eval_out;
    eval->add_option("--biclusters", eval_biclusters, "bicluster JSON file")->required();
    eval->add_option("--out", eval_out, "CSV output file (default stdout)");

    auto* bench = app.add_subcommand("bench", "run the full benchmark protocol");
    add_common(bench, bench_o);
    fbc::ExperimentConfig ecfg;
    bench->add_option("--alpha", ecfg.fbc.alpha, "column scale factor");
    bench->add_option("--beta", ecfg.fbc.beta, "row scale factor");
    bench->add_option("--k", ecfg.fbc.k_biclusters, "biclusters per algorithm");
    bench->add_option("--msr-threshold", ecfg.cc.msr_threshold, "CC MSR threshold");
    bench->add_option("--reps", ecfg.repetitions, "number of repetitions");
    std::vector<std::string> algs{"fbc", "cc"};
    bench->add_option("--algorithms", algs, "algorithms to run (fbc, cc)");
    std::string bench_out;
    bench->add_option("--out", bench_out, "output directory")->required();

    try {
        app.parse(argc, argv);

        if (*part) {
            const auto m = load(part_o);
            const auto ug = fbc::build_partition(m, fbc::Orientation::GenesAsUniverse);
            const auto uc = fbc::build_partition(m, fbc::Orientation::ConditionsAsUniverse);
            fs::create_directories(part_out);
            write_partition_csv(m, ug.memberships, ug.n_cols,
                                (fs::path(part_out) / "u_g.csv").string());
            write_partition_csv(m, uc.memberships, uc.n_cols,
                                (fs::path(part_out) / "u_c.csv").string());
            if (!part_ref.empty()) {
                const auto d = fbc::delta_matrix(ug, gene_index(m, part_ref));
                write_partition_csv(m, d.deltas, d.n_cols,
                                    (fs::path(part_out) / ("delta_" + part_ref + ".csv")).string());
            }
        } else if (*refs) {
            const auto m = load(refs_o);
            const auto ug = fbc::build_partition(m, fbc::Orientation::GenesAsUniverse);
            const auto scores = fbc::reference_scores(ug, refs_m);
            std::ostringstream csv;
            csv << "gene,varpi";
            for (const auto& c : m.condition_labels) csv << ",accepted_" << c;
            csv << '\n';
            for (const auto& s : scores) {
                csv << m.gene_labels[s.gene] << ',' << s.varpi;
                for (std::size_t c : s.accepted_counts) csv << ',' << c;
                csv << '\n';
            }
            if (refs_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(refs_out);
                out << csv.str();
            }
        } else if (*bic) {
            const auto m = load(bic_o);
            std::optional<std::vector<std::size_t>> ref_idx;
            if (!explicit_refs.empty()) {
                ref_idx.emplace();
                for (const auto& lbl : explicit_refs) ref_idx->push_back(gene_index(m, lbl));
            }
            const auto found = fbc::discover(m, scfg, ref_idx);
            nlohmann::json arr = nlohmann::json::array();
            std::size_t id = 0;
            for (const auto& b : found) {
                const auto met = fbc::evaluate_metrics(fbc::submatrix(m, b.index));
                arr.push_back(bicluster_json(m, "fbc", id++, b.index,
                                             m.gene_labels[b.reference], b.mu_score, b.u_score,
                                             met));
            }
            emit(arr, bic_out);
            if (!indicator_prefix.empty()) write_indicator_csvs(m, arr, indicator_prefix);
        } else if (*cc) {
            const auto m = load(cc_o);
            ccfg.seed = cc_o.seed;
            ccfg.inverted_rows = !no_inverted;
            const auto found = fbc::cc_discover(m, ccfg);
            nlohmann::json arr = nlohmann::json::array();
            std::size_t id = 0;
            for (const auto& b : found) {
                auto met = fbc::evaluate_metrics(fbc::submatrix(m, b.index));
                met.msr = b.msr;
                arr.push_back(
                    bicluster_json(m, "cc", id++, b.index, "", 0.0, 0.0, met, b.inverted_rows));
            }
            emit(arr, cc_out);
        } else if (*eval) {
            const auto m = load(eval_o);
            std::ifstream in(eval_biclusters);
            if (!in) throw std::runtime_error("cannot open " + eval_biclusters);
            nlohmann::json arr;
            in >> arr;
            std::ostringstream csv;
            csv << "id,rows,cols,var,mfd,msr\n";
            for (const auto& b : arr) {
                fbc::BiclusterIndex idx;
                for (const auto& lbl : b["row_labels"])
                    idx.rows.push_back(gene_index(m, lbl.get<std::string>()));
                for (const auto& lbl : b["col_labels"])
                    for (std::size_t j = 0; j < m.n_conditions; ++j)
                        if (m.condition_labels[j] == lbl.get<std::string>())
                            idx.cols.push_back(j);
                std::sort(idx.rows.begin(), idx.rows.end());
                std::sort(idx.cols.begin(), idx.cols.end());
                const auto met = fbc::evaluate_metrics(fbc::submatrix(m, idx));
                csv << b["id"].get<std::size_t>() << ',' << met.rows << ',' << met.cols << ','
                    << met.var << ',' << met.mfd << ',' << met.msr << '\n';
            }
            if (eval_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(eval_out);
                out << csv.str();
            }
        } else if (*bench) {
            ecfg.dataset_path = bench_o.input;
            ecfg.format = bench_o.format == "plain" ? fbc::MatrixFormat::PlainNumeric
                                                    : fbc::MatrixFormat::LabeledDelimited;
            ecfg.missing_sentinel = bench_o.missing_sentinel;
            ecfg.base_seed = bench_o.seed;
            ecfg.cc.k_biclusters = ecfg.fbc.k_biclusters;
            ecfg.run_fbc = std::find(algs.begin(), algs.end(), "fbc") != algs.end();
            ecfg.run_cc = std::find(algs.begin(), algs.end(), "cc") != algs.end();
            ecfg.out_dir = bench_out;
            const auto rep = fbc::run_experiment(ecfg);
            const auto table = fbc::compare_table(rep);
            for (const auto& row : table.rows)
                std::cout << row.algorithm << ": n=" << row.n_biclusters << " var=" << row.var_mean
                          << "±" << row.var_std << " mfd=" << row.mfd_mean << "±" << row.mfd_std
                          << '\n';
            if (table.mfd_improvement_pct)
                std::cout << "fbc over cc MFD improvement: " << *table.mfd_improvement_pct
                          << "%\n";
            if (rep.empty_warning)
                std::cerr << "warning: no biclusters found in any repetition\n";
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
