#pragma once

#include <Eigen/Dense>

namespace krongraph {

struct LassoRun {
  int iterations = 0;  // full coordinate cycles
  bool converged = false;
};

// Cyclic coordinate descent for
//   min_beta (1/2) beta^T A beta - b^T beta + lambda * ||beta||_1
// with A symmetric positive (semi)definite and positive diagonal.  `beta`
// is the warm start and receives the solution; zeros are exact (the
// soft-threshold writes 0.0).  Converges when the largest coefficient
// change over one full cycle drops below `tol`.
LassoRun lasso_coordinate_descent(const Eigen::MatrixXd& quadratic,
                                  const Eigen::VectorXd& linear, double lambda,
                                  Eigen::VectorXd& beta, double tol, int max_iter);

// Largest violation of the stationarity conditions
//   |(A beta - b)_k| <= lambda            where beta_k = 0
//   (A beta - b)_k = -lambda sign(beta_k) where beta_k != 0.
double lasso_kkt_residual(const Eigen::MatrixXd& quadratic, const Eigen::VectorXd& linear,
                          double lambda, const Eigen::VectorXd& beta);

}  // namespace krongraph
