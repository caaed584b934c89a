#include "krongraph/glasso.hpp"

#include <cmath>

#include "krongraph/errors.hpp"
#include "krongraph/lasso.hpp"

namespace krongraph {

namespace {

double log_det_pd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericError("NotPositiveDefinite", std::string(what) + " lost positive definiteness");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// One glasso solve with externally owned warm-start state (used by the
// path driver).  W carries diag(S) + lambda on entry.
PrecisionEstimate glasso_core(const SymMatrix& gamma, double lambda,
                              const SolverConfig& config, Eigen::MatrixXd& W,
                              std::vector<Eigen::VectorXd>& betas) {
  const int p = gamma.dim();
  const Eigen::MatrixXd& S = gamma.values;

  PrecisionEstimate est;
  est.lambda = lambda;

  Eigen::MatrixXd W11(p > 0 ? p - 1 : 0, p > 0 ? p - 1 : 0);
  Eigen::VectorXd s12(p > 0 ? p - 1 : 0);
  Eigen::VectorXd w12(p > 0 ? p - 1 : 0);

  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double change = 0.0;
    for (int j = 0; j < p; ++j) {
      int row = 0;
      for (int a = 0; a < p; ++a) {
        if (a == j) continue;
        s12[row] = S(a, j);
        int col = 0;
        for (int b = 0; b < p; ++b) {
          if (b == j) continue;
          W11(row, col) = W(a, b);
          ++col;
        }
        ++row;
      }
      lasso_coordinate_descent(W11, s12, lambda, betas[j], config.inner_tol,
                               config.inner_max_iter);
      w12.noalias() = W11 * betas[j];
      row = 0;
      for (int a = 0; a < p; ++a) {
        if (a == j) continue;
        change += 2.0 * std::abs(w12[row] - W(a, j));
        W(a, j) = w12[row];
        W(j, a) = w12[row];
        ++row;
      }
    }
    est.iterations = sweep;
    est.sweep_objectives.push_back(-log_det_pd(W, "glasso primal W"));
    const double mean_change = p > 0 ? change / (static_cast<double>(p) * p) : 0.0;
    if (mean_change < config.tol) {
      est.converged = true;
      break;
    }
  }

  // Recover theta column by column from the Schur complements, then take
  // the exact symmetric part.
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    double cross = 0.0;
    int row = 0;
    for (int a = 0; a < p; ++a) {
      if (a == j) continue;
      cross += W(a, j) * betas[j][row];
      ++row;
    }
    const double denom = W(j, j) - cross;
    if (!(denom > 0.0)) {
      throw NumericError("NotPositiveDefinite", "glasso Schur complement is not positive");
    }
    const double tjj = 1.0 / denom;
    theta(j, j) = tjj;
    row = 0;
    for (int a = 0; a < p; ++a) {
      if (a == j) continue;
      theta(a, j) = -tjj * betas[j][row];
      ++row;
    }
  }
  theta = ((theta + theta.transpose()) / 2.0).eval();

  est.theta.values = theta;
  est.theta.kind = MatrixKind::precision;
  est.theta.labels = gamma.labels;
  est.sigma.values = W;
  est.sigma.kind = MatrixKind::covariance;
  est.sigma.labels = gamma.labels;

  est.objective = (S.array() * theta.array()).sum() - log_det_pd(theta, "glasso theta") +
                  lambda * theta.cwiseAbs().sum();
  est.kkt_residual = kkt_certificate(gamma, est);
  return est;
}

void check_inputs(const SymMatrix& gamma, double lambda, const SolverConfig& config) {
  if (gamma.dim() < 1) {
    throw ValidationError("DimensionMismatch", "glasso needs a non-empty matrix");
  }
  if (lambda < 0.0) {
    throw ValidationError("IndexOutOfRange", "penalty must be nonnegative");
  }
  if (!(config.tol > 0.0) || !(config.inner_tol > 0.0) || config.max_sweeps < 1 ||
      config.inner_max_iter < 1) {
    throw ValidationError("IndexOutOfRange", "solver configuration must be positive");
  }
  if (lambda == 0.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(gamma.values);
    if (llt.info() != Eigen::Success) {
      throw NumericError("NotPositiveDefinite",
                         "an unpenalized solve needs a strictly positive definite input");
    }
  }
}

}  // namespace

PrecisionEstimate glasso(const SymMatrix& gamma, double lambda, const SolverConfig& config) {
  check_inputs(gamma, lambda, config);
  const int p = gamma.dim();
  Eigen::MatrixXd W = gamma.values;
  W.diagonal().array() += lambda;
  std::vector<Eigen::VectorXd> betas(p, Eigen::VectorXd::Zero(p > 0 ? p - 1 : 0));
  return glasso_core(gamma, lambda, config, W, betas);
}

std::vector<PrecisionEstimate> glasso_path(const SymMatrix& gamma,
                                           const std::vector<double>& lambdas,
                                           const SolverConfig& config) {
  if (lambdas.empty()) {
    throw ValidationError("IndexOutOfRange", "penalty path must not be empty");
  }
  for (size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] < lambdas[i - 1])) {
      throw ValidationError("IndexOutOfRange", "penalty path must be strictly descending");
    }
  }
  for (double l : lambdas) check_inputs(gamma, l, config);

  const int p = gamma.dim();
  Eigen::MatrixXd W = gamma.values;
  std::vector<Eigen::VectorXd> betas(p, Eigen::VectorXd::Zero(p > 0 ? p - 1 : 0));
  std::vector<PrecisionEstimate> path;
  path.reserve(lambdas.size());
  for (double l : lambdas) {
    W.diagonal() = gamma.values.diagonal().array() + l;
    path.push_back(glasso_core(gamma, l, config, W, betas));
  }
  return path;
}

double kkt_certificate(const SymMatrix& gamma, const PrecisionEstimate& estimate) {
  const int p = gamma.dim();
  if (estimate.theta.dim() != p) {
    throw ValidationError("DimensionMismatch",
                          "estimate and input matrix differ in dimension");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(estimate.theta.values);
  if (llt.info() != Eigen::Success) {
    throw NumericError("NotPositiveDefinite", "estimate is not positive definite");
  }
  const Eigen::MatrixXd W = llt.solve(Eigen::MatrixXd::Identity(p, p));
  const double lambda = estimate.lambda;

  double worst = 0.0;
  for (int i = 0; i < p; ++i) {
    worst = std::max(worst, std::abs(W(i, i) - gamma.values(i, i) - lambda));
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      const double gap = W(i, j) - gamma.values(i, j);
      const double tij = estimate.theta.values(i, j);
      if (std::abs(tij) < kStructuralZeroTol) {
        worst = std::max(worst, std::abs(gap) - lambda);
      } else {
        worst = std::max(worst, std::abs(gap - lambda * (tij > 0.0 ? 1.0 : -1.0)));
      }
    }
  }
  return std::max(worst, 0.0);
}

}  // namespace krongraph
