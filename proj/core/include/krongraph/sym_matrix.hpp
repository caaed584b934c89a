#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace krongraph {

enum class MatrixKind { covariance, correlation, precision };

std::string to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(const std::string& text);

// Dense real symmetric matrix with ordered row/column labels and a kind tag.
//
// `checked` enforces the kind invariants and is the constructor used at all
// public boundaries:
//   - all kinds: symmetric to 1e-12 relative (the stored matrix is then
//     replaced by its exact symmetric part),
//   - correlation: unit diagonal to 1e-12 and |off-diagonal| <= 1 (+1e-12),
//   - covariance: min eigenvalue >= -1e-8 * max diagonal entry.
struct SymMatrix {
  Eigen::MatrixXd values;
  MatrixKind kind = MatrixKind::covariance;
  std::vector<std::string> labels;

  int dim() const { return static_cast<int>(values.rows()); }

  static SymMatrix checked(Eigen::MatrixXd values, MatrixKind kind,
                           std::vector<std::string> labels);

  // Square CSV with a header row and leading label column.
  void write_csv(std::ostream& out) const;
  static SymMatrix read_csv(std::istream& in, MatrixKind kind);

  // JSON object {"labels": [...], "kind": "...", "rows": [[...], ...]}.
  void write_json(std::ostream& out) const;
  static SymMatrix read_json(std::istream& in);
};

// "w01", "w02", ... zero-padded to the width of n.
std::vector<std::string> index_labels(const std::string& prefix, int n);

double max_abs_off_diagonal(const Eigen::MatrixXd& m);
double min_eigenvalue(const Eigen::MatrixXd& m);
double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace krongraph
