#include "krongraph/nodewise.hpp"

#include <cmath>

#include "krongraph/errors.hpp"
#include "krongraph/lasso.hpp"

namespace krongraph {

namespace {
constexpr double kBetaZeroTol = 1e-10;
}

bool NodewiseFit::all_converged() const {
  for (char c : node_converged)
    if (!c) return false;
  return true;
}

NodeFit lasso_node(const SymMatrix& gamma, int node, double lambda,
                   const SolverConfig& config) {
  const int p = gamma.dim();
  if (node < 0 || node >= p) {
    throw ValidationError("IndexOutOfRange",
                          "node " + std::to_string(node) + " not in [0, " +
                              std::to_string(p) + ")");
  }
  if (lambda < 0.0) {
    throw ValidationError("IndexOutOfRange", "penalty must be nonnegative");
  }
  Eigen::MatrixXd minor(p - 1, p - 1);
  Eigen::VectorXd rhs(p - 1);
  int row = 0;
  for (int a = 0; a < p; ++a) {
    if (a == node) continue;
    rhs[row] = gamma.values(a, node);
    int col = 0;
    for (int b = 0; b < p; ++b) {
      if (b == node) continue;
      minor(row, col) = gamma.values(a, b);
      ++col;
    }
    ++row;
  }
  NodeFit fit;
  fit.beta = Eigen::VectorXd::Zero(p - 1);
  const LassoRun run = lasso_coordinate_descent(minor, rhs, lambda, fit.beta,
                                                config.inner_tol, config.inner_max_iter);
  fit.iterations = run.iterations;
  fit.converged = run.converged;
  return fit;
}

NodewiseFit reconstruct_theta(const SymMatrix& gamma, std::vector<Eigen::VectorXd> betas,
                              double lambda) {
  const int p = gamma.dim();
  if (static_cast<int>(betas.size()) != p) {
    throw ValidationError("DimensionMismatch", "need one coefficient vector per node");
  }
  NodewiseFit fit;
  fit.lambda = lambda;
  fit.theta_tilde = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    if (betas[j].size() != p - 1) {
      throw ValidationError("DimensionMismatch",
                            "coefficient vector " + std::to_string(j) + " has wrong length");
    }
    double fitted = 0.0;
    int row = 0;
    for (int a = 0; a < p; ++a) {
      if (a == j) continue;
      fitted += gamma.values(j, a) * betas[j][row];
      ++row;
    }
    const double residual_var = gamma.values(j, j) - fitted;
    if (!(residual_var > 0.0)) {
      throw NumericError("SingularResidual",
                         "residual variance of node '" + gamma.labels[j] +
                             "' is not positive");
    }
    const double tjj = 1.0 / residual_var;
    fit.theta_tilde(j, j) = tjj;
    row = 0;
    for (int a = 0; a < p; ++a) {
      if (a == j) continue;
      fit.theta_tilde(a, j) = -tjj * betas[j][row];
      ++row;
    }
  }
  fit.theta.values = (fit.theta_tilde + fit.theta_tilde.transpose()) / 2.0;
  fit.theta.kind = MatrixKind::precision;
  fit.theta.labels = gamma.labels;
  fit.betas = std::move(betas);
  return fit;
}

NodewiseFit nodewise_fit(const SymMatrix& gamma, double lambda, const SolverConfig& config) {
  const int p = gamma.dim();
  std::vector<Eigen::VectorXd> betas;
  betas.reserve(p);
  std::vector<int> iterations(p, 0);
  std::vector<char> converged(p, 0);
  for (int i = 0; i < p; ++i) {
    NodeFit nf = lasso_node(gamma, i, lambda, config);
    iterations[i] = nf.iterations;
    converged[i] = nf.converged ? 1 : 0;
    betas.push_back(std::move(nf.beta));
  }
  NodewiseFit fit = reconstruct_theta(gamma, std::move(betas), lambda);
  fit.node_iterations = std::move(iterations);
  fit.node_converged = std::move(converged);
  return fit;
}

std::vector<std::pair<int, int>> mb_edges(const NodewiseFit& fit, EdgeRule rule) {
  const int p = static_cast<int>(fit.betas.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      // beta^i is indexed over the variables with i removed.
      const double b_ij = fit.betas[i][j - 1];
      const double b_ji = fit.betas[j][i];
      const bool nz_ij = std::abs(b_ij) >= kBetaZeroTol;
      const bool nz_ji = std::abs(b_ji) >= kBetaZeroTol;
      const bool keep = rule == EdgeRule::or_rule ? (nz_ij || nz_ji) : (nz_ij && nz_ji);
      if (keep) edges.emplace_back(i, j);
    }
  }
  return edges;
}

SymMatrix threshold_precision(const SymMatrix& theta, double tau) {
  if (tau < 0.0) {
    throw ValidationError("IndexOutOfRange", "threshold must be nonnegative");
  }
  SymMatrix out = theta;
  const int p = out.dim();
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && std::abs(out.values(i, j)) < tau) out.values(i, j) = 0.0;
  return out;
}

}  // namespace krongraph
