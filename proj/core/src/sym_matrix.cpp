#include "krongraph/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "krongraph/csv.hpp"
#include "krongraph/errors.hpp"

namespace krongraph {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::covariance: return "covariance";
    case MatrixKind::correlation: return "correlation";
    case MatrixKind::precision: return "precision";
  }
  return "covariance";
}

MatrixKind matrix_kind_from_string(const std::string& text) {
  if (text == "covariance") return MatrixKind::covariance;
  if (text == "correlation") return MatrixKind::correlation;
  if (text == "precision") return MatrixKind::precision;
  throw ValidationError("BadEnum", "unknown matrix kind '" + text + "'");
}

double max_abs_off_diagonal(const Eigen::MatrixXd& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (i != j) best = std::max(best, std::abs(m(i, j)));
  return best;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

SymMatrix SymMatrix::checked(Eigen::MatrixXd values, MatrixKind kind,
                             std::vector<std::string> labels) {
  const auto n = values.rows();
  if (values.cols() != n) {
    throw ValidationError("DimensionMismatch", "matrix is not square");
  }
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw ValidationError("DimensionMismatch",
                          "label count " + std::to_string(labels.size()) +
                              " does not match dimension " + std::to_string(n));
  }
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double asym = (values - values.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw ValidationError("DimensionMismatch",
                          "matrix is not symmetric (max asymmetry " +
                              csv::format_double(asym) + ")");
  }
  values = ((values + values.transpose()) / 2.0).eval();

  if (kind == MatrixKind::correlation) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(values(i, i) - 1.0) > 1e-12) {
        throw ValidationError("BadEnum", "correlation diagonal entry " +
                                             std::to_string(i) + " is not 1");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j && std::abs(values(i, j)) > 1.0 + 1e-12) {
          throw ValidationError(
              "BadEnum", "correlation entry exceeds 1 in absolute value");
        }
      }
    }
  } else if (kind == MatrixKind::covariance) {
    const double max_diag = n > 0 ? values.diagonal().maxCoeff() : 0.0;
    const double min_eig = min_eigenvalue(values);
    if (min_eig < -1e-8 * std::max(max_diag, 1e-300)) {
      throw NumericError("NotPositiveDefinite",
                         "covariance matrix has eigenvalue " +
                             csv::format_double(min_eig));
    }
  }

  SymMatrix out;
  out.values = std::move(values);
  out.kind = kind;
  out.labels = std::move(labels);
  return out;
}

void SymMatrix::write_csv(std::ostream& out) const {
  out << "label";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (int i = 0; i < dim(); ++i) {
    out << labels[i];
    for (int j = 0; j < dim(); ++j) out << ',' << csv::format_double(values(i, j));
    out << '\n';
  }
}

SymMatrix SymMatrix::read_csv(std::istream& in, MatrixKind kind) {
  auto rows = csv::read_rows(in);
  if (rows.empty()) throw ValidationError("SchemaMismatch", "empty matrix CSV");
  const auto& header = rows.front();
  const int n = static_cast<int>(header.size()) - 1;
  if (n < 1 || static_cast<int>(rows.size()) != n + 1) {
    throw ValidationError("SchemaMismatch", "matrix CSV is not square");
  }
  std::vector<std::string> labels(header.begin() + 1, header.end());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (static_cast<int>(row.size()) != n + 1 || row[0] != labels[i]) {
      throw ValidationError("SchemaMismatch",
                            "matrix CSV row " + std::to_string(i + 2) +
                                " does not match the header labels");
    }
    for (int j = 0; j < n; ++j) {
      m(i, j) = csv::parse_double(row[j + 1], "matrix row " + std::to_string(i + 2));
    }
  }
  return SymMatrix::checked(std::move(m), kind, std::move(labels));
}

void SymMatrix::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["labels"] = labels;
  j["kind"] = to_string(kind);
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < dim(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int k = 0; k < dim(); ++k) row.push_back(values(i, k));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

SymMatrix SymMatrix::read_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("SchemaMismatch", std::string("bad matrix JSON: ") + e.what());
  }
  if (!j.contains("labels") || !j.contains("kind") || !j.contains("rows")) {
    throw ValidationError("SchemaMismatch",
                          "matrix JSON needs labels, kind and rows");
  }
  std::vector<std::string> labels = j["labels"].get<std::vector<std::string>>();
  const int n = static_cast<int>(labels.size());
  Eigen::MatrixXd m(n, n);
  const auto& rows = j["rows"];
  if (static_cast<int>(rows.size()) != n) {
    throw ValidationError("SchemaMismatch", "matrix JSON rows/labels mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw ValidationError("SchemaMismatch", "matrix JSON is not square");
    }
    for (int k = 0; k < n; ++k) m(i, k) = rows[i][k].get<double>();
  }
  return SymMatrix::checked(std::move(m), matrix_kind_from_string(j["kind"].get<std::string>()),
                            std::move(labels));
}

std::vector<std::string> index_labels(const std::string& prefix, int n) {
  int width = 1;
  for (int v = n; v >= 10; v /= 10) ++width;
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    std::string digits = std::to_string(i);
    out.push_back(prefix + std::string(width - digits.size(), '0') + digits);
  }
  return out;
}

}  // namespace krongraph
