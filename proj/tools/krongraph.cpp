// Command-line surface for the estimation pipeline.  Each subcommand reads
// the previous stage's CSV/JSON artifacts and writes its own, so every
// intermediate (residuals, Gram matrices, precision estimates, graphs) can
// be inspected.  All output is deterministic for fixed inputs and flags.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "krongraph/covariance.hpp"
#include "krongraph/csv.hpp"
#include "krongraph/errors.hpp"
#include "krongraph/glasso.hpp"
#include "krongraph/graphs.hpp"
#include "krongraph/lasso.hpp"
#include "krongraph/nodewise.hpp"
#include "krongraph/simulate.hpp"
#include "krongraph/sym_matrix.hpp"
#include "krongraph/tensor.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace krongraph;

namespace {

fs::path resolve_out_dir(const std::string& flag_value) {
  std::string out = flag_value;
  if (out.empty()) {
    if (const char* env = std::getenv("KRONGRAPH_OUT")) out = env;
  }
  if (out.empty()) {
    throw ValidationError("MissingFile",
                          "no output directory: pass --out or set KRONGRAPH_OUT");
  }
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("MissingFile", "cannot write " + path.string());
  }
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("MissingFile", "cannot open " + path.string());
  }
  return in;
}

void write_json_file(const fs::path& path, const ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

ordered_json matrix_json(const SymMatrix& m) {
  ordered_json j;
  j["labels"] = m.labels;
  j["kind"] = to_string(m.kind);
  auto rows = ordered_json::array();
  for (int i = 0; i < m.dim(); ++i) {
    auto row = ordered_json::array();
    for (int k = 0; k < m.dim(); ++k) row.push_back(m.values(i, k));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_matrix_files(const fs::path& dir, const std::string& stem, const SymMatrix& m) {
  {
    auto out = open_out(dir / (stem + ".csv"));
    m.write_csv(out);
  }
  write_json_file(dir / (stem + ".json"), matrix_json(m));
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  std::string out;
  int n_speakers = 20;
  int n_trials = 4;
  int n_words = 93;
  int n_times = 19;
  std::string word_factor = "banded:2:0.5";
  std::string time_factor = "ar1:0.7";
  std::uint64_t seed = 20180601;
  double mean_scale = 0.0;
};

ordered_json support_pairs(const SymMatrix& factor) {
  const int p = factor.dim();
  Eigen::LLT<Eigen::MatrixXd> llt(factor.values);
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
  auto pairs = ordered_json::array();
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (std::abs(inv(i, j)) >= kStructuralZeroTol)
        pairs.push_back({factor.labels[i], factor.labels[j]});
  return pairs;
}

WordMetadata synthetic_metadata(const std::vector<std::string>& words) {
  static const char* vowels[] = {"a", "e", "i", "o", "u"};
  static const char* onsets[] = {"b", "d", "k", "m", "n", "p", "t", "v", "w"};
  static const char* codas[] = {"", "t", "k", "s"};
  auto klass = [](const std::string& onset) {
    if (onset == "b" || onset == "p") return ConsonantClass::labial;
    if (onset == "d" || onset == "t") return ConsonantClass::alveolar;
    if (onset == "m" || onset == "n" || onset == "k") return ConsonantClass::nasal;
    return ConsonantClass::fricative;
  };
  auto merged = [](const std::string& onset) -> std::string {
    if (onset == "m" || onset == "n") return "mn";
    if (onset == "v" || onset == "f") return "vf";
    return onset;
  };
  WordMetadata meta;
  meta.extra_columns = {"onset_merged"};
  for (size_t i = 0; i < words.size(); ++i) {
    WordRecord rec;
    rec.word = words[i];
    rec.vowel = vowels[i % 5];
    rec.vowel_length = i % 2 == 0 ? VowelLength::long_vowel : VowelLength::short_vowel;
    rec.onset = onsets[i % 9];
    rec.coda_first = codas[i % 4];
    rec.coda_last = codas[(i + 1) % 4];
    rec.consonant_class = klass(rec.onset);
    rec.extra["onset_merged"] = merged(rec.onset);
    meta.records.push_back(std::move(rec));
  }
  return meta;
}

void run_simulate(const SimulateOpts& opts) {
  const fs::path dir = resolve_out_dir(opts.out);
  SymMatrix word = make_factor(FactorSpec::parse(opts.word_factor, opts.n_words));
  SymMatrix time = make_factor(FactorSpec::parse(opts.time_factor, opts.n_times));
  word.labels = index_labels("w", opts.n_words);
  time.labels = index_labels("t", opts.n_times);

  const ReplicateTensor tensor =
      sample_matrix_normal(time, word, opts.n_speakers, opts.n_trials, opts.seed,
                           opts.mean_scale);
  {
    auto out = open_out(dir / "tensor.csv");
    write_tensor_csv(tensor, out);
  }
  {
    auto out = open_out(dir / "metadata.csv");
    write_metadata_csv(synthetic_metadata(tensor.word_ids), out);
  }
  ordered_json truth;
  truth["seed"] = opts.seed;
  truth["n_speakers"] = opts.n_speakers;
  truth["n_trials"] = opts.n_trials;
  truth["mean_scale"] = opts.mean_scale;
  truth["word_factor_spec"] = opts.word_factor;
  truth["time_factor_spec"] = opts.time_factor;
  truth["word_factor"] = matrix_json(word);
  truth["time_factor"] = matrix_json(time);
  truth["word_precision_support"] = support_pairs(word);
  truth["time_precision_support"] = support_pairs(time);
  write_json_file(dir / "truth.json", truth);
  std::cout << "wrote " << (dir / "tensor.csv").string() << " ("
            << tensor.n_speakers << " speakers x " << tensor.n_words << " words x "
            << tensor.n_trials << " trials x " << tensor.n_times << " times)\n";
}

// -------------------------------------------------------------- residualize

struct ResidualizeOpts {
  std::string in;
  std::string out;
  bool wide = false;
};

void run_residualize(const ResidualizeOpts& opts) {
  const ReplicateTensor tensor =
      opts.wide ? load_tensor_wide(opts.in) : load_tensor(opts.in);
  const ResidualTensor residuals = residualize(tensor);
  auto out = open_out(opts.out);
  write_tensor_csv(residuals, out);
}

// ---------------------------------------------------- shared estimate bits

ResidualTensor load_residuals(const std::string& path, const std::string& metadata_path,
                              const std::vector<std::string>& filters) {
  const ReplicateTensor raw = load_tensor(path);
  ResidualTensor residuals;
  static_cast<ReplicateTensor&>(residuals) = raw;

  double scale = 0.0;
  for (double v : residuals.values) scale = std::max(scale, std::abs(v));
  for (int s = 0; s < residuals.n_speakers; ++s) {
    const double worst = trial_mean(residuals, s).cwiseAbs().maxCoeff();
    if (worst > 1e-6 * std::max(scale, 1e-300)) {
      std::cerr << "warning: input does not look trial-centered (max trial mean "
                << csv::format_double(worst) << "); run `residualize` first\n";
      break;
    }
  }

  if (!filters.empty()) {
    if (metadata_path.empty()) {
      throw ValidationError("MissingFile", "--filter needs --metadata");
    }
    const WordMetadata meta = load_metadata(metadata_path);
    for (const auto& w : check_metadata(meta, residuals)) std::cerr << "warning: " << w << "\n";
    for (const auto& f : filters) {
      residuals = subset_words(residuals, meta, WordFilter::parse(f));
    }
  }
  return residuals;
}

ordered_json penalty_report(int n_words, int n_speakers, int n_trials,
                            std::optional<int> n_eff_times) {
  const PenaltySpec spec =
      theoretical_penalties(n_words, n_speakers, n_trials, n_eff_times.value_or(1));
  ordered_json j;
  j["n_words"] = n_words;
  j["n_speakers"] = n_speakers;
  j["n_trials"] = n_trials;
  j["lambda_a"] = spec.lambda_a;
  j["lambda_a_display"] = ceil_two_decimals(spec.lambda_a);
  if (n_eff_times.has_value()) {
    j["n_eff_times"] = *n_eff_times;
    j["lambda_b"] = spec.lambda_b;
    j["lambda_b_display"] = ceil_two_decimals(spec.lambda_b);
  }
  return j;
}

// ---------------------------------------------------------------------- cov

struct CovOpts {
  std::string in;
  std::string out;
  std::string axis = "both";
  std::string metadata;
  std::vector<std::string> filters;
  int n_eff_times = 0;
};

void run_cov(const CovOpts& opts) {
  const fs::path dir = resolve_out_dir(opts.out);
  const ResidualTensor residuals = load_residuals(opts.in, opts.metadata, opts.filters);
  const bool do_word = opts.axis == "word" || opts.axis == "both";
  const bool do_time = opts.axis == "time" || opts.axis == "both";
  if (!do_word && !do_time) {
    throw ValidationError("BadEnum", "--axis must be word, time or both");
  }
  if (do_word) {
    const SymMatrix cov = word_sample_cov(residuals);
    write_matrix_files(dir, "cov_word", cov);
    write_matrix_files(dir, "corr_word", to_correlation(cov));
  }
  if (do_time) {
    const SymMatrix cov = time_sample_cov(residuals);
    write_matrix_files(dir, "cov_time", cov);
    write_matrix_files(dir, "corr_time", to_correlation(cov));
  }
  ordered_json report;
  report["n_speakers"] = residuals.n_speakers;
  report["n_words"] = residuals.n_words;
  report["n_trials"] = residuals.n_trials;
  report["n_times"] = residuals.n_times;
  report["penalty"] = penalty_report(
      residuals.n_words, residuals.n_speakers, residuals.n_trials,
      opts.n_eff_times > 0 ? std::optional<int>(opts.n_eff_times) : std::nullopt);
  write_json_file(dir / "report.json", report);
}

// ----------------------------------------------------------------- estimate

struct EstimateOpts {
  std::string in;
  std::string out;
  std::string axis;
  std::string method = "glasso";
  std::string lambda = "theory";
  std::string metadata;
  std::vector<std::string> filters;
  std::string group_attribute;
  int n_eff_times = 0;
  double threshold = 0.0;
  SolverConfig solver;
};

void attach_groups(LabeledGraph& graph, const EstimateOpts& opts) {
  if (opts.group_attribute.empty() || opts.metadata.empty()) return;
  const WordMetadata meta = load_metadata(opts.metadata);
  for (const auto& v : graph.vertices) {
    graph.groups[v] = meta.attribute(v, opts.group_attribute);
  }
}

void run_estimate(const EstimateOpts& opts) {
  const fs::path dir = resolve_out_dir(opts.out);
  if (opts.axis != "word" && opts.axis != "time") {
    throw ValidationError("BadEnum", "--axis must be word or time");
  }
  if (opts.method != "glasso" && opts.method != "nodewise" && opts.method != "both") {
    throw ValidationError("BadEnum", "--method must be glasso, nodewise or both");
  }
  const ResidualTensor residuals = load_residuals(opts.in, opts.metadata, opts.filters);

  const SymMatrix cov =
      opts.axis == "word" ? word_sample_cov(residuals) : time_sample_cov(residuals);
  const SymMatrix gamma = to_correlation(cov);
  write_matrix_files(dir, "gamma", gamma);

  std::optional<int> n_eff =
      opts.n_eff_times > 0 ? std::optional<int>(opts.n_eff_times) : std::nullopt;
  double lambda = 0.0;
  std::string lambda_source = "explicit";
  if (opts.lambda == "theory") {
    lambda_source = "theory";
    if (opts.axis == "word") {
      lambda = theoretical_penalties(residuals.n_words, residuals.n_speakers,
                                     residuals.n_trials, n_eff.value_or(1))
                   .lambda_a;
    } else {
      if (!n_eff.has_value()) {
        throw ValidationError("IndexOutOfRange",
                              "--lambda theory on the time axis needs --n-eff-t");
      }
      lambda = theoretical_penalties(residuals.n_words, residuals.n_speakers,
                                     residuals.n_trials, *n_eff)
                   .lambda_b;
    }
  } else {
    lambda = csv::parse_double(opts.lambda, "--lambda");
    if (lambda < 0.0) {
      throw ValidationError("IndexOutOfRange", "--lambda must be nonnegative");
    }
  }

  ordered_json penalty = penalty_report(residuals.n_words, residuals.n_speakers,
                                        residuals.n_trials, n_eff);
  penalty["source"] = lambda_source;
  penalty["lambda_used"] = lambda;
  penalty["lambda_used_display"] = ceil_two_decimals(lambda);

  auto base_report = [&](const std::string& method) {
    ordered_json r;
    r["method"] = method;
    r["axis"] = opts.axis;
    r["lambda"] = lambda;
    return r;
  };
  auto finish_report = [&](ordered_json& r) {
    r["threshold"] = opts.threshold;
    r["penalty"] = penalty;
  };

  std::optional<LabeledGraph> glasso_graph;
  std::optional<LabeledGraph> nodewise_graph;

  if (opts.method == "glasso" || opts.method == "both") {
    const PrecisionEstimate est = glasso(gamma, lambda, opts.solver);
    write_matrix_files(dir, "theta_glasso", est.theta);
    ordered_json report = base_report("glasso");
    report["objective"] = est.objective;
    report["kkt_residual"] = est.kkt_residual;
    report["iterations"] = est.iterations;
    report["converged"] = est.converged;
    if (!est.converged) {
      report["warning"] = "sweep limit reached before the tolerance; results are the best iterate";
    }
    finish_report(report);
    write_json_file(dir / "report_glasso.json", report);

    LabeledGraph g = graph_from_precision(est.theta, gamma, opts.threshold);
    attach_groups(g, opts);
    {
      auto out = open_out(dir / "edges_glasso.csv");
      write_edge_csv(g, out);
    }
    {
      auto out = open_out(dir / "graph_glasso.dot");
      write_dot(g, out);
    }
    {
      auto out = open_out(dir / "graph_glasso.json");
      write_graph_json(g, out);
    }
    glasso_graph = std::move(g);
  }

  if (opts.method == "nodewise" || opts.method == "both") {
    const NodewiseFit fit = nodewise_fit(gamma, lambda, opts.solver);
    write_matrix_files(dir, "theta_nodewise", fit.theta);

    double objective = 0.0;
    double worst_kkt = 0.0;
    int total_iterations = 0;
    for (int i = 0; i < gamma.dim(); ++i) {
      Eigen::MatrixXd minor(gamma.dim() - 1, gamma.dim() - 1);
      Eigen::VectorXd rhs(gamma.dim() - 1);
      int row = 0;
      for (int a = 0; a < gamma.dim(); ++a) {
        if (a == i) continue;
        rhs[row] = gamma.values(a, i);
        int col = 0;
        for (int b = 0; b < gamma.dim(); ++b) {
          if (b == i) continue;
          minor(row, col) = gamma.values(a, b);
          ++col;
        }
        ++row;
      }
      const Eigen::VectorXd& beta = fit.betas[i];
      objective += 0.5 * beta.dot(minor * beta) - rhs.dot(beta) +
                   lambda * beta.cwiseAbs().sum();
      worst_kkt = std::max(worst_kkt, lasso_kkt_residual(minor, rhs, lambda, beta));
      total_iterations += fit.node_iterations[i];
    }

    ordered_json report = base_report("nodewise");
    report["objective"] = objective;
    report["kkt_residual"] = worst_kkt;
    report["iterations"] = total_iterations;
    report["converged"] = fit.all_converged();
    report["node_iterations"] = fit.node_iterations;
    if (!fit.all_converged()) {
      report["warning"] = "one or more node regressions hit the iteration limit";
    }
    finish_report(report);
    write_json_file(dir / "report_nodewise.json", report);

    LabeledGraph g = graph_from_precision(fit.theta, gamma, opts.threshold);
    attach_groups(g, opts);
    {
      auto out = open_out(dir / "edges_nodewise.csv");
      write_edge_csv(g, out);
    }
    {
      auto out = open_out(dir / "graph_nodewise.dot");
      write_dot(g, out);
    }
    {
      auto out = open_out(dir / "graph_nodewise.json");
      write_graph_json(g, out);
    }
    nodewise_graph = std::move(g);
  }

  if (opts.method == "both") {
    const GraphSetOps ops = graph_set_ops(*glasso_graph, *nodewise_graph);
    auto dump = [&](const char* name, const LabeledGraph& g) {
      auto out = open_out(dir / name);
      write_edge_csv(g, out);
    };
    dump("edges_intersection.csv", ops.intersection);
    dump("edges_glasso_only.csv", ops.only_first);
    dump("edges_nodewise_only.csv", ops.only_second);
  }
}

// ------------------------------------------------------------------ analyze

struct AnalyzeOpts {
  std::string analysis;
  std::string out;
  std::string graph;
  std::string graph2;
  std::string metadata;
  std::string attribute;
  std::string matrix;
};

LabeledGraph load_graph(const std::string& path) {
  auto in = open_in(path);
  return read_graph_json(in);
}

std::map<std::string, std::string> attribute_partition(const LabeledGraph& graph,
                                                       const std::string& metadata_path,
                                                       const std::string& attribute) {
  const WordMetadata meta = load_metadata(metadata_path);
  std::map<std::string, std::string> partition;
  for (const auto& v : graph.vertices) partition[v] = meta.attribute(v, attribute);
  return partition;
}

void run_analyze(const AnalyzeOpts& opts) {
  const fs::path dir = resolve_out_dir(opts.out);
  auto need = [&](const std::string& value, const char* flag) {
    if (value.empty()) {
      throw ValidationError("MissingFile", std::string("analysis '") + opts.analysis +
                                               "' needs " + flag);
    }
  };

  if (opts.analysis == "fractions" || opts.analysis == "pearson_means") {
    need(opts.graph, "--graph");
    need(opts.metadata, "--metadata");
    need(opts.attribute, "--attribute");
    const LabeledGraph g = load_graph(opts.graph);
    const WordMetadata meta = load_metadata(opts.metadata);
    const PairTable table = opts.analysis == "fractions"
                                ? edge_fraction_by_attribute(g, meta, opts.attribute)
                                : mean_abs_pearson_among_edges(g, meta, opts.attribute);
    auto out = open_out(dir / (opts.analysis + "_" + opts.attribute + ".csv"));
    table.write_csv(out);
  } else if (opts.analysis == "cut") {
    need(opts.graph, "--graph");
    need(opts.metadata, "--metadata");
    need(opts.attribute, "--attribute");
    const LabeledGraph g = load_graph(opts.graph);
    const CutWeights cut =
        cluster_cut_weights(g, attribute_partition(g, opts.metadata, opts.attribute));
    auto out = open_out(dir / ("cut_" + opts.attribute + ".csv"));
    out << "within,between\n"
        << csv::format_double(cut.within) << ',' << csv::format_double(cut.between) << '\n';
  } else if (opts.analysis == "supernode") {
    need(opts.graph, "--graph");
    need(opts.metadata, "--metadata");
    need(opts.attribute, "--attribute");
    const LabeledGraph g = load_graph(opts.graph);
    const LabeledGraph super =
        supernode_graph(g, attribute_partition(g, opts.metadata, opts.attribute));
    {
      auto out = open_out(dir / ("supernode_" + opts.attribute + "_edges.csv"));
      write_edge_csv(super, out);
    }
    {
      auto out = open_out(dir / ("supernode_" + opts.attribute + ".dot"));
      write_dot(super, out);
    }
  } else if (opts.analysis == "metrics") {
    need(opts.graph, "--graph");
    need(opts.matrix, "--matrix");
    const LabeledGraph g = load_graph(opts.graph);
    auto in = open_in(opts.matrix);
    const SymMatrix factor = SymMatrix::read_json(in);
    const GraphMetrics m = graph_metrics(factor, g);
    auto out = open_out(dir / "metrics.csv");
    out << "avg_degree,n_edges,trace_over_frobenius,spectral_norm\n"
        << csv::format_double(m.avg_degree) << ',' << m.n_edges << ','
        << csv::format_double(m.trace_over_frobenius) << ','
        << csv::format_double(m.spectral_norm) << '\n';
  } else if (opts.analysis == "setops") {
    need(opts.graph, "--graph");
    need(opts.graph2, "--graph2");
    const GraphSetOps ops = graph_set_ops(load_graph(opts.graph), load_graph(opts.graph2));
    auto dump = [&](const char* name, const LabeledGraph& g) {
      auto out = open_out(dir / name);
      write_edge_csv(g, out);
    };
    dump("edges_intersection.csv", ops.intersection);
    dump("edges_only_first.csv", ops.only_first);
    dump("edges_only_second.csv", ops.only_second);
  } else {
    throw ValidationError("BadEnum", "unknown analysis '" + opts.analysis + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse word-axis and time-axis inverse-correlation estimation "
               "for replicate pitch tensors"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Draw a synthetic replicate tensor with "
                                               "known factors");
  c_sim->add_option("--out", sim.out, "Output directory");
  c_sim->add_option("--n-speakers", sim.n_speakers)->check(CLI::PositiveNumber);
  c_sim->add_option("--n-trials", sim.n_trials)->check(CLI::PositiveNumber);
  c_sim->add_option("--n-words", sim.n_words)->check(CLI::PositiveNumber);
  c_sim->add_option("--n-times", sim.n_times)->check(CLI::PositiveNumber);
  c_sim->add_option("--word-factor", sim.word_factor, "identity | ar1:R | banded:B:D | block:S,..:C");
  c_sim->add_option("--time-factor", sim.time_factor, "same grammar as --word-factor");
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--mean-scale", sim.mean_scale, "scale of per-speaker mean matrices");
  c_sim->callback([&] { run_simulate(sim); });

  ResidualizeOpts res;
  auto* c_res = app.add_subcommand("residualize", "Subtract per-speaker trial means");
  c_res->add_option("--in", res.in, "tensor CSV")->required();
  c_res->add_option("--out", res.out, "residual tensor CSV")->required();
  c_res->add_flag("--wide", res.wide, "input has one column per time point");
  c_res->callback([&] { run_residualize(res); });

  CovOpts cov;
  auto* c_cov = app.add_subcommand("cov", "Sample covariance and correlation matrices");
  c_cov->add_option("--in", cov.in, "residual tensor CSV")->required();
  c_cov->add_option("--out", cov.out, "Output directory");
  c_cov->add_option("--axis", cov.axis, "word | time | both");
  c_cov->add_option("--metadata", cov.metadata, "word metadata CSV");
  c_cov->add_option("--filter", cov.filters, "attribute=value[,value...] word filter");
  c_cov->add_option("--n-eff-t", cov.n_eff_times, "effective time points per utterance");
  c_cov->callback([&] { run_cov(cov); });

  EstimateOpts est;
  auto* c_est = app.add_subcommand("estimate", "Penalized inverse-correlation estimation");
  c_est->add_option("--in", est.in, "residual tensor CSV")->required();
  c_est->add_option("--out", est.out, "Output directory");
  c_est->add_option("--axis", est.axis, "word | time")->required();
  c_est->add_option("--method", est.method, "glasso | nodewise | both");
  c_est->add_option("--lambda", est.lambda, "penalty value, or 'theory'");
  c_est->add_option("--n-eff-t", est.n_eff_times, "effective time points per utterance");
  c_est->add_option("--threshold", est.threshold, "edge extraction threshold on |theta|");
  c_est->add_option("--metadata", est.metadata, "word metadata CSV");
  c_est->add_option("--filter", est.filters, "attribute=value[,value...] word filter");
  c_est->add_option("--group-attribute", est.group_attribute,
                    "metadata attribute written as DOT cluster");
  c_est->add_option("--tol", est.solver.tol)->check(CLI::PositiveNumber);
  c_est->add_option("--max-sweeps", est.solver.max_sweeps)->check(CLI::PositiveNumber);
  c_est->add_option("--inner-tol", est.solver.inner_tol)->check(CLI::PositiveNumber);
  c_est->add_option("--inner-max-iter", est.solver.inner_max_iter)->check(CLI::PositiveNumber);
  c_est->callback([&] { run_estimate(est); });

  AnalyzeOpts ana;
  auto* c_ana = app.add_subcommand("analyze", "Graph analytics tables");
  c_ana->add_option("--analysis", ana.analysis,
                    "fractions | pearson_means | cut | supernode | metrics | setops")
      ->required();
  c_ana->add_option("--out", ana.out, "Output directory");
  c_ana->add_option("--graph", ana.graph, "graph JSON");
  c_ana->add_option("--graph2", ana.graph2, "second graph JSON (setops)");
  c_ana->add_option("--metadata", ana.metadata, "word metadata CSV");
  c_ana->add_option("--attribute", ana.attribute, "metadata attribute name");
  c_ana->add_option("--matrix", ana.matrix, "factor matrix JSON (metrics)");
  c_ana->callback([&] { run_analyze(ana); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
