#include "cogphy/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "cogphy/numerics.hpp"

namespace cogphy {

namespace {

// One-branch optimization. The log-likelihood saturates for long branches,
// so a bounded Brent over the whole domain can stall on the flat tail;
// instead a geometric walk brackets the peak around the current length
// (ties drift toward shorter branches) and Brent refines inside.
double optimize_single_branch(LikelihoodEngine& engine, int node,
                              const FitOptions& opt, double current_loglik) {
  const double old_length = engine.branch_length(node);
  auto eval = [&](double t) {
    engine.set_branch_length(node, t);
    return engine.log_likelihood();
  };

  constexpr double kStep = 8.0;
  constexpr double kImprovement = 1e-9;
  const double start =
      std::clamp(old_length, opt.branch_min, opt.branch_max);
  double best_t = start;
  double best_f = current_loglik;

  double t = start;
  while (t < opt.branch_max) {  // uphill only
    t = std::min(t * kStep, opt.branch_max);
    const double f = eval(t);
    if (f > best_f + kImprovement) {
      best_t = t;
      best_f = f;
    } else {
      break;
    }
  }
  t = start;
  while (t > opt.branch_min) {  // downhill ties keep walking off plateaus
    t = std::max(t / kStep, opt.branch_min);
    const double f = eval(t);
    if (f >= best_f - kImprovement) {
      if (f > best_f) best_f = f;
      best_t = std::min(best_t, t);
    } else {
      break;
    }
  }

  const double lo = std::max(best_t / kStep, opt.branch_min);
  const double hi = std::min(best_t * kStep, opt.branch_max);
  const auto best = brent_maximize(eval, lo, hi, opt.branch_tol);
  if (std::max(best.fx, best_f) > current_loglik) {
    if (best.fx >= best_f) {
      engine.set_branch_length(node, best.x);
      return best.fx;
    }
    engine.set_branch_length(node, best_t);
    return best_f;
  }
  engine.set_branch_length(node, old_length);
  return current_loglik;
}

}  // namespace

double optimize_branch_subset(LikelihoodEngine& engine,
                              const std::vector<int>& nodes,
                              const FitOptions& opt) {
  double loglik = engine.log_likelihood();
  for (const int v : nodes) {
    if (v == engine.root()) continue;
    loglik = optimize_single_branch(engine, v, opt, loglik);
  }
  return loglik;
}

double optimize_branch_lengths(LikelihoodEngine& engine, const FitOptions& opt) {
  std::vector<int> nodes;
  for (int v = 0; v < engine.n_nodes(); ++v) {
    if (v != engine.root()) nodes.push_back(v);
  }
  return optimize_branch_subset(engine, nodes, opt);
}

double optimize_rate_parameters(LikelihoodEngine& engine, const FitOptions& opt) {
  double loglik = engine.log_likelihood();

  if (opt.optimize_alpha && engine.gamma().k > 1) {
    const double old_alpha = engine.gamma().alpha;
    auto eval = [&](double alpha) {
      engine.set_model(engine.model(), discretize_gamma(alpha, engine.gamma().k));
      return engine.log_likelihood();
    };
    const auto best = brent_maximize(eval, opt.alpha_min, opt.alpha_max, opt.alpha_tol);
    const double chosen = best.fx > loglik ? best.x : old_alpha;
    engine.set_model(engine.model(), discretize_gamma(chosen, engine.gamma().k));
    loglik = std::max(loglik, best.fx);
  }

  if (opt.optimize_frequencies) {
    const double old_pi1 = engine.model().pi1;
    auto eval = [&](double pi1) {
      engine.set_model(BinaryCTMC(pi1), engine.gamma());
      return engine.log_likelihood();
    };
    const auto best = brent_maximize(eval, opt.pi1_min, opt.pi1_max, opt.pi_tol);
    const double chosen = best.fx > loglik ? best.x : old_pi1;
    engine.set_model(BinaryCTMC(chosen), engine.gamma());
    loglik = std::max(loglik, best.fx);
  }
  return loglik;
}

FitResult fit_parameters(const Tree& tree, const BinaryMatrix& matrix,
                         const BinaryCTMC& model, const GammaRates& gamma,
                         const FitOptions& opt) {
  LikelihoodEngine engine(tree, matrix, model, gamma,
                          opt.ascertainment_correction);
  double loglik = engine.log_likelihood();
  int round = 0;
  for (; round < opt.max_rounds; ++round) {
    const double before = loglik;
    if (opt.optimize_branch_lengths) {
      loglik = optimize_branch_lengths(engine, opt);
    }
    loglik = optimize_rate_parameters(engine, opt);
    if (loglik - before < opt.loglik_tol) break;
  }

  FitResult result;
  result.tree = engine.tree_with_lengths();
  result.model = engine.model();
  result.gamma = engine.gamma();
  result.log_lik = loglik;
  result.rounds = round + 1;
  return result;
}

}  // namespace cogphy
