#pragma once

#include <Eigen/Dense>

#include <vector>

namespace cogphy {

// Time-reversible two-state gain/loss chain. Rates are normalized by
// mu = 1 / (2 pi0 pi1) so branch lengths are expected substitutions per
// character.
struct BinaryCTMC {
  double pi0 = 0.5;
  double pi1 = 0.5;

  BinaryCTMC() = default;
  explicit BinaryCTMC(double pi1_value) : pi0(1.0 - pi1_value), pi1(pi1_value) {}

  double mu() const { return 1.0 / (2.0 * pi0 * pi1); }
  void validate() const;
};

// Closed-form P(t) under rate multiplier r; rows sum to 1.
Eigen::Matrix2d transition_matrix(const BinaryCTMC& model, double t, double r);

// Discrete approximation of Gamma(alpha) rate heterogeneity with k
// equal-probability categories; each rate is the conditional mean of its
// quantile interval, renormalized to mean 1.
struct GammaRates {
  double alpha = 1.0;
  int k = 4;
  std::vector<double> rates;    // strictly increasing, mean 1
  std::vector<double> weights;  // uniform 1/k

  static GammaRates homogeneous() {
    GammaRates g;
    g.alpha = 0.0;
    g.k = 1;
    g.rates = {1.0};
    g.weights = {1.0};
    return g;
  }
};

GammaRates discretize_gamma(double alpha, int k);

}  // namespace cogphy
