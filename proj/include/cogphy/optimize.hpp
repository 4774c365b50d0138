#pragma once

#include "cogphy/likelihood.hpp"

namespace cogphy {

struct FitOptions {
  bool optimize_branch_lengths = true;
  bool optimize_alpha = true;
  bool optimize_frequencies = true;
  double alpha_min = 0.0201;
  double alpha_max = 100.0;
  double pi1_min = 0.001;
  double pi1_max = 0.999;
  double branch_min = 1e-8;
  double branch_max = 50.0;
  double branch_tol = 1e-6;
  double alpha_tol = 1e-4;
  double pi_tol = 1e-6;
  double loglik_tol = 1e-4;
  int max_rounds = 100;
  bool ascertainment_correction = false;
};

struct FitResult {
  Tree tree;
  BinaryCTMC model;
  GammaRates gamma;
  double log_lik = 0.0;
  int rounds = 0;
};

// Coordinate ascent: per-branch Brent, then alpha, then pi1, repeated until
// the log-likelihood gain drops below loglik_tol. Never decreases logL.
FitResult fit_parameters(const Tree& tree, const BinaryMatrix& matrix,
                         const BinaryCTMC& model, const GammaRates& gamma,
                         const FitOptions& options = {});

// In-place variants reusing an engine; used by the tree search.
double optimize_branch_lengths(LikelihoodEngine& engine, const FitOptions& options);
double optimize_branch_subset(LikelihoodEngine& engine,
                              const std::vector<int>& nodes,
                              const FitOptions& options);
double optimize_rate_parameters(LikelihoodEngine& engine, const FitOptions& options);

}  // namespace cogphy
