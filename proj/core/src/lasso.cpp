#include "krongraph/lasso.hpp"

#include <cmath>

#include "krongraph/errors.hpp"

namespace krongraph {

namespace {
inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}
}  // namespace

LassoRun lasso_coordinate_descent(const Eigen::MatrixXd& quadratic,
                                  const Eigen::VectorXd& linear, double lambda,
                                  Eigen::VectorXd& beta, double tol, int max_iter) {
  const int p = static_cast<int>(linear.size());
  LassoRun run;
  if (p == 0) {
    run.converged = true;
    return run;
  }
  for (int k = 0; k < p; ++k) {
    if (!(quadratic(k, k) > 0.0)) {
      throw NumericError("NotPositiveDefinite",
                         "coordinate descent needs a positive diagonal");
    }
  }

  // grad = A beta - b, kept in sync with single-coordinate updates.
  Eigen::VectorXd grad = quadratic * beta - linear;
  for (run.iterations = 1; run.iterations <= max_iter; ++run.iterations) {
    double max_change = 0.0;
    for (int k = 0; k < p; ++k) {
      const double akk = quadratic(k, k);
      const double old = beta[k];
      const double candidate = akk * old - grad[k];
      const double updated = soft_threshold(candidate, lambda) / akk;
      if (updated != old) {
        grad.noalias() += quadratic.col(k) * (updated - old);
        beta[k] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change < tol) {
      run.converged = true;
      return run;
    }
  }
  run.iterations = max_iter;
  return run;
}

double lasso_kkt_residual(const Eigen::MatrixXd& quadratic, const Eigen::VectorXd& linear,
                          double lambda, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd grad = quadratic * beta - linear;
  double worst = 0.0;
  for (int k = 0; k < beta.size(); ++k) {
    double violation;
    if (beta[k] == 0.0) {
      violation = std::max(0.0, std::abs(grad[k]) - lambda);
    } else {
      violation = std::abs(grad[k] + lambda * (beta[k] > 0.0 ? 1.0 : -1.0));
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

}  // namespace krongraph
