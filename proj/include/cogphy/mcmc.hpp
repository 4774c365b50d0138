#pragma once

#include <cstdint>
#include <vector>

#include "cogphy/binary_matrix.hpp"
#include "cogphy/ctmc.hpp"
#include "cogphy/tree.hpp"

namespace cogphy {

enum class AlphaPrior { kUniform, kExponential };

struct McmcConfig {
  std::int64_t generations_max = 500000;
  int sample_every = 1000;
  double burnin_fraction = 0.25;
  double asdsf_target = 0.01;
  int runs = 2;
  AlphaPrior alpha_prior = AlphaPrior::kUniform;
  double alpha_uniform_lo = 0.01;
  double alpha_uniform_hi = 100.0;
  double alpha_exp_rate = 1.0;
  std::uint64_t seed = 1;
  int gamma_categories = 4;
  bool prior_only = false;         // likelihood forced to 1 (calibration)
  std::int64_t check_every = 10000;  // ASDSF cadence, in generations
  int min_samples_per_run = 20;      // post-burnin floor before convergence

  // proposal windows
  double alpha_window = 30.0;
  double pi_window = 0.1;
  double scale_factor = 1.2;  // multiplier range for scale moves
};

struct McmcSample {
  std::int64_t generation = 0;
  Tree tree;  // clock tree; branch lengths in substitution units
  double alpha = 1.0;
  double pi1 = 0.5;
  double clock_rate = 1.0;
  double root_age = 1.0;
  double log_likelihood = 0.0;
  double log_posterior = 0.0;
};

struct McmcRunTrace {
  std::vector<McmcSample> samples;
  double acceptance_rate = 0.0;
};

struct McmcResult {
  std::vector<McmcRunTrace> runs;
  bool converged = false;
  double final_asdsf = 0.0;
  std::int64_t generations = 0;

  // samples after dropping the burn-in fraction, per run
  std::vector<std::vector<McmcSample>> retained(double burnin_fraction) const;

  // random draw from the pooled retained samples (without replacement when
  // enough are available, with replacement otherwise)
  std::vector<Tree> draw_evaluation_trees(std::size_t count,
                                          double burnin_fraction,
                                          std::uint64_t seed) const;
};

// Strict-clock Bayesian sampler over (topology, node ages, clock rate,
// alpha, pi1). Priors: uniform topology, ages uniform given the root age,
// root age and clock rate Exponential(1), pi ~ Dirichlet(1,1), alpha per
// config. Runs advance in lockstep until the ASDSF target or the
// generation cap; hitting the cap flags the result as not converged.
McmcResult mcmc_run(const BinaryMatrix& matrix, const McmcConfig& config);

}  // namespace cogphy
