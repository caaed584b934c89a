#pragma once

#include <utility>
#include <vector>

#include "krongraph/glasso.hpp"
#include "krongraph/sym_matrix.hpp"

namespace krongraph {

// Neighborhood-selection fit: one l1-penalized regression per node, the
// refit reconstruction of the precision matrix, and its projection onto
// symmetric matrices (the arithmetic symmetric part, which is the
// Frobenius-nearest symmetric matrix).
struct NodewiseFit {
  std::vector<Eigen::VectorXd> betas;  // per node, length dim - 1
  Eigen::MatrixXd theta_tilde;         // pre-symmetrization reconstruction
  SymMatrix theta;                     // (theta_tilde + theta_tilde^T) / 2
  double lambda = 0.0;
  double threshold = 0.0;  // filled in by callers that apply one afterwards
  std::vector<int> node_iterations;
  std::vector<char> node_converged;

  bool all_converged() const;
};

struct NodeFit {
  Eigen::VectorXd beta;
  int iterations = 0;
  bool converged = false;
};

// Solves  min_beta (1/2) beta^T G_(i) beta - <g_(i), beta> + lambda |beta|_1
// where G_(i) drops row/column i of gamma and g_(i) is column i without
// the diagonal entry.
NodeFit lasso_node(const SymMatrix& gamma, int node, double lambda,
                   const SolverConfig& config = {});

// Refit reconstruction:
//   theta_tilde_jj   = 1 / (gamma_jj - gamma_{j,-j} beta^j)
//   theta_tilde_{-j,j} = -theta_tilde_jj * beta^j
// followed by symmetrization.  A nonpositive residual variance raises
// SingularResidual.
NodewiseFit reconstruct_theta(const SymMatrix& gamma,
                              std::vector<Eigen::VectorXd> betas, double lambda = 0.0);

// All node regressions plus reconstruction.
NodewiseFit nodewise_fit(const SymMatrix& gamma, double lambda,
                         const SolverConfig& config = {});

enum class EdgeRule { or_rule, and_rule };

// Edge (i, j) iff beta^i_j or beta^j_i is nonzero (or-rule; the and-rule
// requires both).  Coefficients with |beta| < 1e-10 count as zero.
std::vector<std::pair<int, int>> mb_edges(const NodewiseFit& fit, EdgeRule rule);

// Zeroes off-diagonal entries with |theta_ij| < tau; diagonal untouched.
SymMatrix threshold_precision(const SymMatrix& theta, double tau);

}  // namespace krongraph
