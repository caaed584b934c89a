#pragma once

#include <utility>

#include "krongraph/sym_matrix.hpp"
#include "krongraph/tensor.hpp"

namespace krongraph {

// Word-word Gram matrix of the residual slices:
//   S_word = (1 / (n_times * n_speakers * n_trials)) * sum_{s,r} M M^T
// with M the (speaker, trial) residual slice.  No n-1 correction; the
// divisor is definitional.
SymMatrix word_sample_cov(const ResidualTensor& residuals);

// Time-time Gram with divisor n_words * n_speakers * n_trials and M^T M.
SymMatrix time_sample_cov(const ResidualTensor& residuals);

// Entrywise S_ij / sqrt(S_ii S_jj); requires strictly positive diagonal.
SymMatrix to_correlation(const SymMatrix& cov);

// Penalty pair from the axis sizes, natural logarithm:
//   lambda_a = sqrt(log(n_words) / (n_speakers * n_trials * n_words))
//   lambda_b = sqrt(log(n_words) / (n_speakers * n_trials * n_eff_times))
// lambda_a drives the word-axis solve (no effective-time input needed),
// lambda_b the time-axis solve, where n_eff_times is the user's count of
// approximately independent time points per utterance.
struct PenaltySpec {
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  int n_words = 0;
  int n_speakers = 0;
  int n_trials = 0;
  int n_eff_times = 0;
};

PenaltySpec theoretical_penalties(int n_words, int n_speakers, int n_trials, int n_eff_times);

// Conservative two-decimal ceiling used when displaying a penalty next to
// its exact value (0.0246825... reads as 0.03).
double ceil_two_decimals(double v);

// Rescales estimated correlation factors back to covariance scale.  Only
// the Kronecker product of the two factors is identified, so the split is
// fixed by convention: the word factor carries the word Gram diagonal and
// trace (tr(word_hat) = tr(word_cov)), and the time factor is normalized
// to trace n_times.  The product then matches the total residual variance,
// tr(word_hat) * tr(time_hat) = tr(word_cov) * n_times.
std::pair<SymMatrix, SymMatrix> kronecker_reconstruct(const SymMatrix& word_corr_factor,
                                                      const SymMatrix& time_corr_factor,
                                                      const SymMatrix& word_cov,
                                                      const SymMatrix& time_cov);

}  // namespace krongraph
