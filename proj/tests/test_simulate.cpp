#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "krongraph/covariance.hpp"
#include "krongraph/errors.hpp"
#include "krongraph/glasso.hpp"
#include "krongraph/simulate.hpp"
#include "test_support.hpp"

using namespace krongraph;

TEST_CASE("factor construction") {
  SUBCASE("identity") {
    const SymMatrix f = make_factor(FactorSpec::parse("identity", 5));
    CHECK(f.values.isApprox(Eigen::MatrixXd::Identity(5, 5)));
  }
  SUBCASE("ar1 entries decay geometrically") {
    const SymMatrix f = make_factor(FactorSpec::parse("ar1:0.5", 3));
    CHECK(f.values(0, 1) == 0.5);
    CHECK(f.values(0, 2) == 0.25);
    CHECK(f.values(1, 1) == 1.0);
  }
  SUBCASE("ar1 inverse is tridiagonal") {
    const SymMatrix f = make_factor(FactorSpec::parse("ar1:0.7", 8));
    const Eigen::MatrixXd inv = f.values.inverse();
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (std::abs(i - j) > 1) CHECK(std::abs(inv(i, j)) < 1e-10);
  }
  SUBCASE("banded entries vanish beyond the bandwidth") {
    const SymMatrix f = make_factor(FactorSpec::parse("banded:2:0.4", 6));
    CHECK(f.values(0, 1) == 0.4);
    CHECK(f.values(0, 2) == doctest::Approx(0.16));
    CHECK(f.values(0, 3) == 0.0);
  }
  SUBCASE("block factors are block diagonal") {
    const SymMatrix f = make_factor(FactorSpec::parse("block:2,3:0.6", 5));
    CHECK(f.values(0, 1) == 0.6);
    CHECK(f.values(0, 2) == 0.0);
    CHECK(f.values(3, 4) == 0.6);
    const Eigen::MatrixXd inv = f.values.inverse();
    CHECK(std::abs(inv(0, 3)) < 1e-12);
  }
  SUBCASE("non positive definite specs are rejected") {
    CHECK_THROWS_WITH_AS(make_factor(FactorSpec::parse("ar1:1.0", 4)),
                         doctest::Contains("NotPositiveDefinite"), NumericError);
    CHECK_THROWS_WITH_AS(make_factor(FactorSpec::parse("banded:1:0.9", 10)),
                         doctest::Contains("NotPositiveDefinite"), NumericError);
    CHECK_THROWS_WITH_AS(make_factor(FactorSpec::parse("block:3,1:-0.6", 4)),
                         doctest::Contains("NotPositiveDefinite"), NumericError);
  }
  SUBCASE("bad spec strings are schema errors") {
    CHECK_THROWS_AS(FactorSpec::parse("ar1", 4), ValidationError);
    CHECK_THROWS_AS(FactorSpec::parse("block:2,2:0.5", 5), ValidationError);
    CHECK_THROWS_AS(FactorSpec::parse("spiky:1", 4), ValidationError);
  }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const SymMatrix time = make_factor(FactorSpec::parse("ar1:0.6", 5));
  const SymMatrix word = make_factor(FactorSpec::parse("banded:1:0.3", 4));
  const ReplicateTensor a = sample_matrix_normal(time, word, 3, 2, 424242);
  const ReplicateTensor b = sample_matrix_normal(time, word, 3, 2, 424242);
  CHECK(a.values == b.values);
  const ReplicateTensor c = sample_matrix_normal(time, word, 3, 2, 424243);
  CHECK(a.values != c.values);
}

TEST_CASE("identity factors give unit empirical variance") {
  const SymMatrix eye_t = make_factor(FactorSpec::parse("identity", 2));
  const SymMatrix eye_w = make_factor(FactorSpec::parse("identity", 2));
  // 2500 speakers x 4 trials = 10,000 slices.
  const ReplicateTensor t = sample_matrix_normal(eye_t, eye_w, 2500, 4, 31337);
  for (int w = 0; w < 2; ++w)
    for (int ti = 0; ti < 2; ++ti) {
      double ss = 0.0;
      for (int s = 0; s < t.n_speakers; ++s)
        for (int r = 0; r < t.n_trials; ++r) ss += t.at(s, w, r, ti) * t.at(s, w, r, ti);
      const double var = ss / (t.n_speakers * t.n_trials);
      CHECK(var == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("word Gram of residualized samples converges to the scaled word factor") {
  const SymMatrix time = make_factor(FactorSpec::parse("ar1:0.7", 4));
  const SymMatrix word = make_factor(FactorSpec::parse("block:2,2:0.6", 4));
  const ReplicateTensor t = sample_matrix_normal(time, word, 4000, 2, 99);
  const ResidualTensor r = residualize(t);
  // Residualizing over n_r trials shrinks the expected Gram by
  // (n_r - 1) / n_r; tr(time)/n_times is 1 for the ar1 factor.
  const SymMatrix gram = word_sample_cov(r);
  const Eigen::MatrixXd expected = word.values * 0.5;
  CHECK((gram.values - expected).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("vec covariance matches the Kronecker product within 3 standard errors") {
  const SymMatrix time = make_factor(FactorSpec::parse("ar1:0.7", 4));
  const SymMatrix word = make_factor(FactorSpec::parse("block:2,2:0.6", 4));
  const int n_speakers = 12500, n_trials = 4;  // 50,000 slices
  const ReplicateTensor t = sample_matrix_normal(time, word, n_speakers, n_trials, 784);
  const int n = 16;
  const long long slices = static_cast<long long>(n_speakers) * n_trials;

  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd vec(n);
  for (int s = 0; s < n_speakers; ++s)
    for (int r = 0; r < n_trials; ++r) {
      for (int ti = 0; ti < 4; ++ti)
        for (int w = 0; w < 4; ++w) vec[ti * 4 + w] = t.at(s, w, r, ti);
      second.noalias() += vec * vec.transpose();
    }
  second /= static_cast<double>(slices);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double truth = time.values(i / 4, j / 4) * word.values(i % 4, j % 4);
      const double vii = time.values(i / 4, i / 4) * word.values(i % 4, i % 4);
      const double vjj = time.values(j / 4, j / 4) * word.values(j % 4, j % 4);
      const double se = std::sqrt((vii * vjj + truth * truth) / slices);
      CHECK(std::abs(second(i, j) - truth) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("speaker mean matrices are removed by residualization") {
  const SymMatrix time = make_factor(FactorSpec::parse("ar1:0.5", 3));
  const SymMatrix word = make_factor(FactorSpec::parse("identity", 3));
  const ReplicateTensor plain = sample_matrix_normal(time, word, 4, 3, 5, 0.0);
  const ReplicateTensor shifted = sample_matrix_normal(time, word, 4, 3, 5, 10.0);
  const ResidualTensor r1 = residualize(plain);
  const ResidualTensor r2 = residualize(shifted);
  for (size_t i = 0; i < r1.values.size(); ++i) {
    CHECK(r1.values[i] == doctest::Approx(r2.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("reference solver closed forms") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.5, 0.5, 1.0;
  const SymMatrix gamma = SymMatrix::checked(m, MatrixKind::correlation, index_labels("x", 2));

  SUBCASE("unpenalized 2x2 inverse") {
    const SymMatrix theta = oracle_glasso(gamma, 0.0);
    CHECK(theta.values(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(theta.values(0, 1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-8));
  }
  SUBCASE("full sparsity regime") {
    const SymMatrix theta = oracle_glasso(gamma, 0.6);
    CHECK(theta.values(0, 0) == doctest::Approx(1.0 / 1.6).epsilon(1e-9));
    CHECK(std::abs(theta.values(0, 1)) < 1e-10);
  }
  SUBCASE("dimension limit") {
    CHECK_THROWS_WITH_AS(
        oracle_glasso(SymMatrix::checked(Eigen::MatrixXd::Identity(5, 5),
                                         MatrixKind::correlation, index_labels("x", 5)),
                      0.1),
        doctest::Contains("DimTooLarge"), ValidationError);
  }
}

TEST_CASE("main solver and reference solver agree on random 3x3 instances") {
  std::mt19937 rng(60302);
  for (int rep = 0; rep < 20; ++rep) {
    const SymMatrix gamma = testsupport::random_pd_correlation(rng, 3);
    for (double lambda : {0.0, 0.05, 0.2, 1.0}) {
      const PrecisionEstimate est = glasso(gamma, lambda);
      const SymMatrix oracle = oracle_glasso(gamma, lambda);
      CHECK((est.theta.values - oracle.values).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("stream derivation separates speakers and trials") {
  CHECK(derive_stream_seed(1, 0, 0) != derive_stream_seed(1, 0, 1));
  CHECK(derive_stream_seed(1, 0, 0) != derive_stream_seed(1, 1, 0));
  CHECK(derive_stream_seed(1, 2, 3) != derive_stream_seed(2, 2, 3));
  CHECK(derive_stream_seed(9, 4, 7) == derive_stream_seed(9, 4, 7));
}
