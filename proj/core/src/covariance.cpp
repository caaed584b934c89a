#include "krongraph/covariance.hpp"

#include <cmath>

#include "krongraph/errors.hpp"

namespace krongraph {

SymMatrix word_sample_cov(const ResidualTensor& residuals) {
  const int p = residuals.n_words;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  for (int s = 0; s < residuals.n_speakers; ++s) {
    for (int r = 0; r < residuals.n_trials; ++r) {
      const Eigen::MatrixXd m = residuals.slice(s, r);
      acc.noalias() += m * m.transpose();
    }
  }
  acc /= static_cast<double>(residuals.n_times) * residuals.n_speakers * residuals.n_trials;
  return SymMatrix::checked(std::move(acc), MatrixKind::covariance, residuals.word_ids);
}

SymMatrix time_sample_cov(const ResidualTensor& residuals) {
  const int p = residuals.n_times;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  for (int s = 0; s < residuals.n_speakers; ++s) {
    for (int r = 0; r < residuals.n_trials; ++r) {
      const Eigen::MatrixXd m = residuals.slice(s, r);
      acc.noalias() += m.transpose() * m;
    }
  }
  acc /= static_cast<double>(residuals.n_words) * residuals.n_speakers * residuals.n_trials;
  return SymMatrix::checked(std::move(acc), MatrixKind::covariance,
                            index_labels("t", residuals.n_times));
}

SymMatrix to_correlation(const SymMatrix& cov) {
  const int p = cov.dim();
  for (int i = 0; i < p; ++i) {
    if (!(cov.values(i, i) > 0.0)) {
      throw NumericError("ZeroVariance", "variance of '" + cov.labels[i] +
                                             "' is not positive, cannot normalize");
    }
  }
  Eigen::VectorXd inv_sd = cov.values.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov.values * inv_sd.asDiagonal();
  corr.diagonal().setOnes();
  return SymMatrix::checked(std::move(corr), MatrixKind::correlation, cov.labels);
}

PenaltySpec theoretical_penalties(int n_words, int n_speakers, int n_trials, int n_eff_times) {
  if (n_words < 1 || n_speakers < 1 || n_trials < 1 || n_eff_times < 1) {
    throw ValidationError("IndexOutOfRange", "all penalty inputs must be >= 1");
  }
  PenaltySpec spec;
  spec.n_words = n_words;
  spec.n_speakers = n_speakers;
  spec.n_trials = n_trials;
  spec.n_eff_times = n_eff_times;
  const double log_w = std::log(static_cast<double>(n_words));
  const double replicates = static_cast<double>(n_speakers) * n_trials;
  spec.lambda_a = std::sqrt(log_w / (replicates * n_words));
  spec.lambda_b = std::sqrt(log_w / (replicates * n_eff_times));
  return spec;
}

double ceil_two_decimals(double v) { return std::ceil(v * 100.0) / 100.0; }

std::pair<SymMatrix, SymMatrix> kronecker_reconstruct(const SymMatrix& word_corr_factor,
                                                      const SymMatrix& time_corr_factor,
                                                      const SymMatrix& word_cov,
                                                      const SymMatrix& time_cov) {
  if (word_corr_factor.dim() != word_cov.dim() || time_corr_factor.dim() != time_cov.dim()) {
    throw ValidationError("DimensionMismatch",
                          "correlation factors and sample covariances disagree in size");
  }
  const Eigen::VectorXd sd_w = word_cov.values.diagonal().cwiseSqrt();
  const Eigen::VectorXd sd_t = time_cov.values.diagonal().cwiseSqrt();
  Eigen::MatrixXd word_hat =
      sd_w.asDiagonal() * word_corr_factor.values * sd_w.asDiagonal();
  Eigen::MatrixXd time_hat =
      sd_t.asDiagonal() * time_corr_factor.values * sd_t.asDiagonal();

  const double tr_word = word_hat.trace();
  const double tr_time = time_hat.trace();
  if (!(tr_word > 0.0) || !(tr_time > 0.0)) {
    throw NumericError("ZeroVariance", "factor reconstruction needs positive traces");
  }
  word_hat *= word_cov.values.trace() / tr_word;
  time_hat *= static_cast<double>(time_cov.dim()) / tr_time;

  return {SymMatrix::checked(std::move(word_hat), MatrixKind::covariance, word_cov.labels),
          SymMatrix::checked(std::move(time_hat), MatrixKind::covariance, time_cov.labels)};
}

}  // namespace krongraph
