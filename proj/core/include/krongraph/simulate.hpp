#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "krongraph/sym_matrix.hpp"
#include "krongraph/tensor.hpp"

namespace krongraph {

// Parametric symmetric positive definite factors for simulation.
//   identity            the identity matrix
//   ar1(rho)            entries rho^|i-j|, |rho| < 1
//   banded(bw, decay)   entries decay^|i-j| within the band, 0 beyond
//   block(sizes, corr)  block diagonal with `corr` inside each block
// Positive definiteness is verified at construction.
struct FactorSpec {
  enum class Kind { identity, ar1, banded, block };
  Kind kind = Kind::identity;
  int dim = 0;
  double rho = 0.0;                // ar1
  int bandwidth = 0;               // banded
  double decay = 0.0;              // banded
  std::vector<int> block_sizes;    // block
  double within_corr = 0.0;        // block

  // "identity", "ar1:0.7", "banded:2:0.5", "block:2,2,3:0.6"; `dim` comes
  // from the caller (for block it must match the size sum).
  static FactorSpec parse(const std::string& text, int dim);
  std::string describe() const;
};

SymMatrix make_factor(const FactorSpec& spec);

// splitmix64 step, used to derive independent generator seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Portable standard-normal stream: mt19937_64 uniforms through the
// Box-Muller transform, so output is identical across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Seed for the (speaker, trial) sub-stream; trial 0xffffffff is reserved
// for the speaker mean draw.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint32_t speaker,
                                 std::uint32_t trial);

// Draws (speaker, trial) slices X = L_word * Z * L_time^T with Z iid
// standard normal and L the lower Cholesky factors, so the covariance of
// the column-stacked slice is time_factor (x) word_factor with words
// varying fastest.  Each slice uses its own derived sub-stream, so output
// does not depend on evaluation order.  With speaker_mean_scale > 0 every
// speaker also receives a random mean matrix, constant across trials,
// which trial residualization removes.
ReplicateTensor sample_matrix_normal(const SymMatrix& time_factor,
                                     const SymMatrix& word_factor, int n_speakers,
                                     int n_trials, std::uint64_t seed,
                                     double speaker_mean_scale = 0.0);

// Independent reference solver for the penalized inverse problem on
// matrices of dimension <= 4: monotone proximal-gradient descent with
// backtracking, run to a much tighter tolerance than the production
// solver.  Test scaffolding.
SymMatrix oracle_glasso(const SymMatrix& gamma, double lambda);

}  // namespace krongraph
