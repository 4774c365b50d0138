#include "cogphy/ctmc.hpp"

#include <cmath>
#include <stdexcept>

#include "cogphy/numerics.hpp"

namespace cogphy {

void BinaryCTMC::validate() const {
  if (!(pi0 > 0.0) || !(pi1 > 0.0) || std::abs(pi0 + pi1 - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "BinaryCTMC: frequencies must be positive and sum to 1");
  }
}

Eigen::Matrix2d transition_matrix(const BinaryCTMC& model, double t, double r) {
  if (t < 0.0 || r < 0.0) {
    throw std::invalid_argument("transition_matrix: t and r must be >= 0");
  }
  const double decay = std::exp(-model.mu() * r * t);
  Eigen::Matrix2d p;
  p(0, 0) = model.pi0 + model.pi1 * decay;
  p(0, 1) = model.pi1 * (1.0 - decay);
  p(1, 0) = model.pi0 * (1.0 - decay);
  p(1, 1) = model.pi1 + model.pi0 * decay;
  return p;
}

GammaRates discretize_gamma(double alpha, int k) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("discretize_gamma: alpha must be positive");
  }
  if (k < 1) throw std::invalid_argument("discretize_gamma: k must be >= 1");

  GammaRates g;
  g.alpha = alpha;
  g.k = k;
  g.weights.assign(k, 1.0 / k);
  if (k == 1) {
    g.rates = {1.0};
    return g;
  }

  // Gamma(shape alpha, rate alpha) has mean 1. Category boundaries are
  // quantiles; the conditional mean over [x_i, x_{i+1}] telescopes through
  // the shape-(alpha+1) CDF.
  std::vector<double> bounds(k + 1);
  bounds[0] = 0.0;
  bounds[k] = std::numeric_limits<double>::infinity();
  for (int i = 1; i < k; ++i) {
    bounds[i] = gamma_p_inv(alpha, static_cast<double>(i) / k) / alpha;
  }
  g.rates.resize(k);
  for (int i = 0; i < k; ++i) {
    const double upper =
        std::isinf(bounds[i + 1]) ? 1.0 : gamma_p(alpha + 1.0, alpha * bounds[i + 1]);
    const double lower = gamma_p(alpha + 1.0, alpha * bounds[i]);
    g.rates[i] = k * (upper - lower);
  }
  double mean = 0.0;
  for (const double r : g.rates) mean += r;
  mean /= k;
  for (double& r : g.rates) r /= mean;
  return g;
}

}  // namespace cogphy
