#include "krongraph/simulate.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "krongraph/errors.hpp"

namespace krongraph {

namespace {

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

FactorSpec FactorSpec::parse(const std::string& text, int dim) {
  if (dim < 1) {
    throw ValidationError("IndexOutOfRange", "factor dimension must be positive");
  }
  auto parts = split_on(text, ':');
  FactorSpec spec;
  spec.dim = dim;
  const std::string& kind = parts[0];
  auto want = [&](size_t n) {
    if (parts.size() != n) {
      throw ValidationError("SchemaMismatch", "bad factor spec '" + text + "'");
    }
  };
  if (kind == "identity") {
    want(1);
    spec.kind = Kind::identity;
  } else if (kind == "ar1") {
    want(2);
    spec.kind = Kind::ar1;
    spec.rho = std::stod(parts[1]);
  } else if (kind == "banded") {
    want(3);
    spec.kind = Kind::banded;
    spec.bandwidth = std::stoi(parts[1]);
    spec.decay = std::stod(parts[2]);
  } else if (kind == "block") {
    want(3);
    spec.kind = Kind::block;
    for (const auto& s : split_on(parts[1], ',')) spec.block_sizes.push_back(std::stoi(s));
    spec.within_corr = std::stod(parts[2]);
    const int total = std::accumulate(spec.block_sizes.begin(), spec.block_sizes.end(), 0);
    if (total != dim) {
      throw ValidationError("DimensionMismatch",
                            "block sizes sum to " + std::to_string(total) +
                                ", expected " + std::to_string(dim));
    }
  } else {
    throw ValidationError("SchemaMismatch", "unknown factor kind '" + kind + "'");
  }
  return spec;
}

std::string FactorSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::identity:
      out << "identity";
      break;
    case Kind::ar1:
      out << "ar1:" << rho;
      break;
    case Kind::banded:
      out << "banded:" << bandwidth << ":" << decay;
      break;
    case Kind::block: {
      out << "block:";
      for (size_t i = 0; i < block_sizes.size(); ++i)
        out << (i ? "," : "") << block_sizes[i];
      out << ":" << within_corr;
      break;
    }
  }
  return out.str();
}

SymMatrix make_factor(const FactorSpec& spec) {
  if (spec.dim < 1) {
    throw ValidationError("IndexOutOfRange", "factor dimension must be positive");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(spec.dim, spec.dim);
  switch (spec.kind) {
    case FactorSpec::Kind::identity:
      break;
    case FactorSpec::Kind::ar1: {
      if (!(std::abs(spec.rho) < 1.0)) {
        throw NumericError("NotPositiveDefinite", "ar1 needs |rho| < 1");
      }
      for (int i = 0; i < spec.dim; ++i)
        for (int j = 0; j < spec.dim; ++j) m(i, j) = std::pow(spec.rho, std::abs(i - j));
      break;
    }
    case FactorSpec::Kind::banded: {
      if (spec.bandwidth < 0) {
        throw ValidationError("IndexOutOfRange", "bandwidth must be nonnegative");
      }
      for (int i = 0; i < spec.dim; ++i)
        for (int j = 0; j < spec.dim; ++j) {
          const int d = std::abs(i - j);
          if (d > 0 && d <= spec.bandwidth) m(i, j) = std::pow(spec.decay, d);
        }
      break;
    }
    case FactorSpec::Kind::block: {
      int offset = 0;
      for (int size : spec.block_sizes) {
        if (size < 1) {
          throw ValidationError("IndexOutOfRange", "block sizes must be positive");
        }
        for (int i = 0; i < size; ++i)
          for (int j = 0; j < size; ++j)
            if (i != j) m(offset + i, offset + j) = spec.within_corr;
        offset += size;
      }
      break;
    }
  }
  if (min_eigenvalue(m) <= 0.0) {
    throw NumericError("NotPositiveDefinite",
                       "factor " + spec.describe() + " is not positive definite");
  }
  return SymMatrix::checked(std::move(m), MatrixKind::covariance,
                            index_labels("v", spec.dim));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double NormalStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Uniforms strictly inside (0, 1) from the top 53 bits.
  const double u1 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint32_t speaker,
                                 std::uint32_t trial) {
  std::uint64_t state = seed;
  const std::uint64_t root = splitmix64(state);
  std::uint64_t key = (static_cast<std::uint64_t>(speaker) << 32) | trial;
  std::uint64_t key_state = key;
  return root ^ splitmix64(key_state);
}

ReplicateTensor sample_matrix_normal(const SymMatrix& time_factor,
                                     const SymMatrix& word_factor, int n_speakers,
                                     int n_trials, std::uint64_t seed,
                                     double speaker_mean_scale) {
  if (n_speakers < 1 || n_trials < 1) {
    throw ValidationError("IndexOutOfRange", "need at least one speaker and one trial");
  }
  Eigen::LLT<Eigen::MatrixXd> llt_time(time_factor.values);
  Eigen::LLT<Eigen::MatrixXd> llt_word(word_factor.values);
  if (llt_time.info() != Eigen::Success || llt_word.info() != Eigen::Success) {
    throw NumericError("NotPositiveDefinite", "sampling needs strictly PD factors");
  }
  const Eigen::MatrixXd l_time = llt_time.matrixL();
  const Eigen::MatrixXd l_word = llt_word.matrixL();
  const int n_words = word_factor.dim();
  const int n_times = time_factor.dim();

  ReplicateTensor t;
  t.n_speakers = n_speakers;
  t.n_words = n_words;
  t.n_trials = n_trials;
  t.n_times = n_times;
  t.speaker_ids = index_labels("s", n_speakers);
  t.word_ids = index_labels("w", n_words);
  t.values.assign(static_cast<size_t>(n_speakers) * n_words * n_trials * n_times, 0.0);

  Eigen::MatrixXd z(n_words, n_times);
  for (int s = 0; s < n_speakers; ++s) {
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n_words, n_times);
    if (speaker_mean_scale != 0.0) {
      NormalStream stream(derive_stream_seed(seed, static_cast<std::uint32_t>(s), 0xffffffffu));
      for (int w = 0; w < n_words; ++w)
        for (int ti = 0; ti < n_times; ++ti) mean(w, ti) = speaker_mean_scale * stream.next();
    }
    for (int r = 0; r < n_trials; ++r) {
      NormalStream stream(derive_stream_seed(seed, static_cast<std::uint32_t>(s),
                                             static_cast<std::uint32_t>(r)));
      for (int w = 0; w < n_words; ++w)
        for (int ti = 0; ti < n_times; ++ti) z(w, ti) = stream.next();
      const Eigen::MatrixXd x = l_word * z * l_time.transpose() + mean;
      for (int w = 0; w < n_words; ++w)
        for (int ti = 0; ti < n_times; ++ti) t.at(s, w, r, ti) = x(w, ti);
    }
  }
  return t;
}

SymMatrix oracle_glasso(const SymMatrix& gamma, double lambda) {
  const int p = gamma.dim();
  if (p > 4) {
    throw ValidationError("DimTooLarge", "reference solver only handles dimension <= 4");
  }
  if (lambda < 0.0) {
    throw ValidationError("IndexOutOfRange", "penalty must be nonnegative");
  }
  const Eigen::MatrixXd& s = gamma.values;

  auto objective = [&](const Eigen::MatrixXd& theta, double& log_det) -> bool {
    Eigen::LLT<Eigen::MatrixXd> llt(theta);
    if (llt.info() != Eigen::Success) return false;
    log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return true;
  };
  auto value = [&](const Eigen::MatrixXd& theta, double log_det) {
    return (s.array() * theta.array()).sum() - log_det + lambda * theta.cwiseAbs().sum();
  };

  Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(p, p);
  double log_det = 0.0;
  if (!objective(theta, log_det)) {
    throw NumericError("NotPositiveDefinite", "reference solver failed to start");
  }
  double current = value(theta, log_det);
  double step = 1.0;
  const int max_iter = 2000000;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::LLT<Eigen::MatrixXd> llt(theta);
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd grad = s - inv;

    Eigen::MatrixXd candidate;
    double cand_log_det = 0.0;
    double cand_value = 0.0;
    bool ok = false;
    while (step > 1e-18) {
      candidate = theta - step * grad;
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
          const double v = candidate(i, j);
          const double t = step * lambda;
          candidate(i, j) = v > t ? v - t : (v < -t ? v + t : 0.0);
        }
      candidate = ((candidate + candidate.transpose()) / 2.0).eval();
      if (objective(candidate, cand_log_det)) {
        cand_value = value(candidate, cand_log_det);
        if (cand_value <= current + 1e-15) {
          ok = true;
          break;
        }
      }
      step /= 2.0;
    }
    if (!ok) break;
    const double move = (candidate - theta).cwiseAbs().maxCoeff();
    theta = candidate;
    current = cand_value;
    if (move < step * 1e-14) break;
    // Gentle step growth keeps progress fast after backtracking.
    step = std::min(step * 1.1, 1.0);
  }

  SymMatrix out;
  out.values = theta;
  out.kind = MatrixKind::precision;
  out.labels = gamma.labels;
  return out;
}

}  // namespace krongraph
