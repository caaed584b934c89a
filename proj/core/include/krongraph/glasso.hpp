#pragma once

#include <vector>

#include "krongraph/sym_matrix.hpp"

namespace krongraph {

struct SolverConfig {
  double tol = 1e-7;        // mean absolute change of the primal W per sweep
  int max_sweeps = 500;
  double inner_tol = 1e-9;  // coordinate-descent stopping rule
  int inner_max_iter = 10000;
};

// Result of one penalized inverse-correlation solve.
//
// theta minimizes  tr(G theta) - log det(theta) + lambda * ||theta||_1
// over positive definite matrices, where G is the input matrix and the
// l1 norm runs over all entries.  sigma is the primal estimate
// theta^{-1}; its diagonal equals diag(G) + lambda.  At lambda = 0 theta
// is exactly the inverse of G; at lambda >= max |off-diagonal of G| it is
// the diagonal matrix with entries 1 / (G_ii + lambda).
struct PrecisionEstimate {
  SymMatrix theta;
  SymMatrix sigma;
  double lambda = 0.0;
  double objective = 0.0;      // penalized objective at theta
  double kkt_residual = 0.0;
  int iterations = 0;          // outer sweeps
  bool converged = false;
  // Block-ascent progress per sweep, measured on the dual (-log det W);
  // non-increasing by construction.
  std::vector<double> sweep_objectives;
};

// Block coordinate descent over the columns of W = theta^{-1} with an
// inner coordinate-descent lasso (the standard glasso scheme).  lambda = 0
// requires a strictly positive definite input; positive semidefinite
// inputs are fine for lambda > 0.  When the sweep limit is hit the best
// iterate is returned with converged = false.
PrecisionEstimate glasso(const SymMatrix& gamma, double lambda,
                         const SolverConfig& config = {});

// Warm-started solves along a strictly descending penalty sequence; each
// element satisfies the single-penalty contract.
std::vector<PrecisionEstimate> glasso_path(const SymMatrix& gamma,
                                           const std::vector<double>& lambdas,
                                           const SolverConfig& config = {});

// Largest violation of the stationarity system of the solved objective,
// evaluated against W := theta^{-1} recomputed from the estimate:
//   diagonal:                    |W_ii - G_ii - lambda|
//   off-diagonal, theta_ij != 0: |W_ij - G_ij - lambda * sign(theta_ij)|
//   off-diagonal, theta_ij  = 0: max(0, |W_ij - G_ij| - lambda)
// Entries with |theta_ij| < 1e-10 count as structural zeros.
double kkt_certificate(const SymMatrix& gamma, const PrecisionEstimate& estimate);

// Off-diagonal entries with |theta_ij| below this are reported as
// structural zeros when extracting edges.
inline constexpr double kStructuralZeroTol = 1e-10;

}  // namespace krongraph
