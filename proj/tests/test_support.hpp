#pragma once

// Shared generators and independent oracles for the test suites.  The
// oracles deliberately avoid the library's computation paths: Gram
// matrices are re-derived with nested loops, the 2x2 penalized solve has a
// closed form, spectral norms come from power iteration, and graph
// analytics are recomputed by exhaustive pair enumeration.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "krongraph/graphs.hpp"
#include "krongraph/sym_matrix.hpp"
#include "krongraph/tensor.hpp"

namespace testsupport {

inline Eigen::MatrixXd random_gaussian(std::mt19937& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

// Random correlation matrix with eigenvalues of the underlying covariance
// drawn from [min_eig, max_eig]; strictly positive definite.
inline krongraph::SymMatrix random_pd_correlation(std::mt19937& rng, int dim,
                                                  double min_eig = 0.3,
                                                  double max_eig = 2.0) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_gaussian(rng, dim, dim));
  Eigen::MatrixXd q = qr.householderQ();
  std::uniform_real_distribution<double> unif(min_eig, max_eig);
  Eigen::VectorXd eigs(dim);
  for (int i = 0; i < dim; ++i) eigs[i] = unif(rng);
  Eigen::MatrixXd cov = q * eigs.asDiagonal() * q.transpose();
  Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  corr = ((corr + corr.transpose()) / 2.0).eval();
  corr.diagonal().setOnes();
  return krongraph::SymMatrix::checked(std::move(corr), krongraph::MatrixKind::correlation,
                                       krongraph::index_labels("x", dim));
}

inline krongraph::ResidualTensor random_residuals(std::mt19937& rng, int n_s, int n_w,
                                                  int n_r, int n_t, double scale = 1.0) {
  krongraph::ReplicateTensor raw;
  raw.n_speakers = n_s;
  raw.n_words = n_w;
  raw.n_trials = n_r;
  raw.n_times = n_t;
  raw.speaker_ids = krongraph::index_labels("s", n_s);
  raw.word_ids = krongraph::index_labels("w", n_w);
  raw.values.resize(static_cast<size_t>(n_s) * n_w * n_r * n_t);
  std::normal_distribution<double> normal(0.0, scale);
  for (auto& v : raw.values) v = normal(rng);
  return krongraph::residualize(raw);
}

// Word and time Gram oracles: direct summation over every index tuple.
inline Eigen::MatrixXd word_gram_oracle(const krongraph::ResidualTensor& r) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(r.n_words, r.n_words);
  for (int a = 0; a < r.n_words; ++a)
    for (int b = 0; b < r.n_words; ++b)
      for (int i = 0; i < r.n_speakers; ++i)
        for (int k = 0; k < r.n_trials; ++k)
          for (int t = 0; t < r.n_times; ++t)
            s(a, b) += r.at(i, a, k, t) * r.at(i, b, k, t);
  return s / (static_cast<double>(r.n_times) * r.n_speakers * r.n_trials);
}

inline Eigen::MatrixXd time_gram_oracle(const krongraph::ResidualTensor& r) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(r.n_times, r.n_times);
  for (int a = 0; a < r.n_times; ++a)
    for (int b = 0; b < r.n_times; ++b)
      for (int i = 0; i < r.n_speakers; ++i)
        for (int k = 0; k < r.n_trials; ++k)
          for (int w = 0; w < r.n_words; ++w)
            s(a, b) += r.at(i, w, k, a) * r.at(i, w, k, b);
  return s / (static_cast<double>(r.n_words) * r.n_speakers * r.n_trials);
}

// Closed-form solution of the 2x2 penalized problem on [[1, rho], [rho, 1]]:
// fully sparse for |rho| <= lambda, otherwise the off-diagonal of the
// primal W is soft-thresholded and inverted.
inline Eigen::Matrix2d glasso_2x2_oracle(double rho, double lambda) {
  Eigen::Matrix2d w;
  const double d = 1.0 + lambda;
  if (std::abs(rho) <= lambda) {
    w << d, 0.0, 0.0, d;
  } else {
    const double off = rho - lambda * (rho > 0.0 ? 1.0 : -1.0);
    w << d, off, off, d;
  }
  return w.inverse();
}

inline double power_iteration_norm(const Eigen::MatrixXd& m, int iters = 20000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
  double value = 0.0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd next = m * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    if ((next - v).norm() < 1e-14 && i > 3) {
      v = next;
      break;
    }
    v = next;
  }
  value = std::abs(v.dot(m * v));
  return value;
}

// Random labeled graph over n vertices with edge probability prob; weights
// and pearson entries are small random values.
inline krongraph::LabeledGraph random_graph(std::mt19937& rng, int n, double prob) {
  krongraph::LabeledGraph g;
  g.vertices = krongraph::index_labels("w", n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < prob) g.edges.push_back({i, j, val(rng), val(rng)});
  return g;
}

// Cyclic word metadata over the given words, mirroring the synthetic
// metadata the CLI emits.
inline krongraph::WordMetadata cyclic_metadata(const std::vector<std::string>& words) {
  static const char* vowels[] = {"a", "e", "i", "o", "u"};
  static const char* onsets[] = {"b", "d", "m", "t"};
  krongraph::WordMetadata meta;
  meta.extra_columns = {"group"};
  for (size_t i = 0; i < words.size(); ++i) {
    krongraph::WordRecord rec;
    rec.word = words[i];
    rec.vowel = vowels[i % 5];
    rec.vowel_length =
        i % 2 == 0 ? krongraph::VowelLength::long_vowel : krongraph::VowelLength::short_vowel;
    rec.onset = onsets[i % 4];
    rec.coda_first = i % 3 == 0 ? "" : "t";
    rec.coda_last = "k";
    rec.consonant_class = static_cast<krongraph::ConsonantClass>(i % 4);
    rec.extra["group"] = i % 3 == 0 ? "g0" : (i % 3 == 1 ? "g1" : "g2");
    meta.records.push_back(std::move(rec));
  }
  return meta;
}

// Exhaustive re-count of attribute pair cells by direct enumeration of all
// vertex pairs, for checking the fraction and mean-|pearson| tables.
struct OracleCell {
  long long edges = 0;
  long long possible = 0;
  double abs_pearson_sum = 0.0;
};

inline std::map<std::pair<std::string, std::string>, OracleCell> table_oracle(
    const krongraph::LabeledGraph& g, const krongraph::WordMetadata& meta,
    const std::string& attribute) {
  std::map<std::pair<std::string, std::string>, OracleCell> cells;
  auto key = [&](int i, int j) {
    std::string a = meta.attribute(g.vertices[i], attribute);
    std::string b = meta.attribute(g.vertices[j], attribute);
    if (a > b) std::swap(a, b);
    return std::make_pair(a, b);
  };
  for (int i = 0; i < g.vertex_count(); ++i)
    for (int j = i + 1; j < g.vertex_count(); ++j) ++cells[key(i, j)].possible;
  for (const auto& e : g.edges) {
    auto& c = cells[key(e.a, e.b)];
    ++c.edges;
    c.abs_pearson_sum += std::abs(e.pearson);
  }
  return cells;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("krongraph_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testsupport
