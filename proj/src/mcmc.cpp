#include "cogphy/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "cogphy/likelihood.hpp"
#include "cogphy/rng.hpp"
#include "cogphy/tree_compare.hpp"

namespace cogphy {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ChainState {
  Tree topology;            // rooted binary, lengths unused
  std::vector<double> age;  // per node; leaves at 0
  double clock_rate = 1.0;
  double alpha = 1.0;
  double pi1 = 0.5;
};

Tree clock_tree(const ChainState& s) {
  Tree out = s.topology;
  for (int v = 0; v < static_cast<int>(out.size()); ++v) {
    const int p = out.nodes[v].parent;
    out.nodes[v].length =
        p >= 0 ? (s.age[p] - s.age[v]) * s.clock_rate : kNoBranchLength;
  }
  return out;
}

std::vector<int> internal_nonroot_nodes(const Tree& t) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(t.size()); ++v) {
    if (v != t.root && !t.is_leaf(v)) out.push_back(v);
  }
  return out;
}

double log_prior(const ChainState& s, const McmcConfig& cfg) {
  const double root_age = s.age[s.topology.root];
  if (!(root_age > 0.0)) return kNegInf;
  int internals = 0;
  for (int v = 0; v < static_cast<int>(s.topology.size()); ++v) {
    if (!s.topology.is_leaf(v)) ++internals;
    if (v == s.topology.root) continue;
    const int p = s.topology.nodes[v].parent;
    if (!(s.age[v] >= 0.0) || !(s.age[v] < s.age[p])) return kNegInf;
  }
  if (!(s.clock_rate > 0.0)) return kNegInf;

  // root age ~ Exp(1); other internal ages uniform on [0, root_age]
  double lp = -root_age - (internals - 1) * std::log(root_age);
  lp += -s.clock_rate;  // clock rate ~ Exp(1)
  switch (cfg.alpha_prior) {
    case AlphaPrior::kUniform:
      if (s.alpha < cfg.alpha_uniform_lo || s.alpha > cfg.alpha_uniform_hi) {
        return kNegInf;
      }
      lp += -std::log(cfg.alpha_uniform_hi - cfg.alpha_uniform_lo);
      break;
    case AlphaPrior::kExponential:
      if (!(s.alpha > 0.0)) return kNegInf;
      lp += std::log(cfg.alpha_exp_rate) - cfg.alpha_exp_rate * s.alpha;
      break;
  }
  if (s.pi1 <= 0.0 || s.pi1 >= 1.0) return kNegInf;  // Dirichlet(1,1): flat
  return lp;
}

double reflect_into(double x, double lo, double hi) {
  // reflection keeps the sliding window symmetric at the bounds
  while (x < lo || x > hi) {
    if (x < lo) x = 2.0 * lo - x;
    if (x > hi) x = 2.0 * hi - x;
  }
  return x;
}

ChainState initial_state(const std::vector<std::string>& taxa,
                         const McmcConfig& cfg, Rng& rng) {
  ChainState s;
  std::vector<int> active;
  for (const auto& name : taxa) {
    const int v = s.topology.add_node(-1);
    s.topology.nodes[v].name = name;
    s.age.push_back(0.0);
    active.push_back(v);
  }
  double t = 0.0;
  while (active.size() > 1) {
    const std::size_t i = rng.uniform_int(active.size());
    const int a = active[i];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
    const std::size_t j = rng.uniform_int(active.size());
    const int b = active[j];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
    t += rng.exponential(0.1);
    const int u = s.topology.add_node(-1);
    s.topology.nodes[u].children = {a, b};
    s.topology.nodes[a].parent = u;
    s.topology.nodes[b].parent = u;
    s.age.push_back(t);
    active.push_back(u);
  }
  s.topology.root = active.front();
  s.clock_rate = rng.exponential(1.0);
  switch (cfg.alpha_prior) {
    case AlphaPrior::kUniform:
      s.alpha = rng.uniform(cfg.alpha_uniform_lo, cfg.alpha_uniform_hi);
      break;
    case AlphaPrior::kExponential:
      s.alpha = rng.exponential(1.0 / cfg.alpha_exp_rate);
      break;
  }
  s.pi1 = rng.uniform(0.001, 0.999);
  return s;
}

class Chain {
 public:
  Chain(const BinaryMatrix& matrix, const McmcConfig& cfg, std::uint64_t seed)
      : cfg_(cfg), rng_(seed), state_(initial_state(matrix.taxa, cfg, rng_)) {
    if (!cfg_.prior_only) {
      engine_ = std::make_unique<LikelihoodEngine>(
          clock_tree(state_), matrix, BinaryCTMC(state_.pi1),
          rates_for(state_.alpha), false);
    }
    log_posterior_ = posterior(state_, log_likelihood_);
  }

  void advance(std::int64_t generations) {
    for (std::int64_t g = 0; g < generations; ++g) {
      ++generation_;
      step();
      if (generation_ % cfg_.sample_every == 0) record_sample();
    }
  }

  void record_sample() {
    McmcSample sample;
    sample.generation = generation_;
    sample.tree = clock_tree(state_);
    sample.alpha = state_.alpha;
    sample.pi1 = state_.pi1;
    sample.clock_rate = state_.clock_rate;
    sample.root_age = state_.age[state_.topology.root];
    sample.log_likelihood = log_likelihood_;
    sample.log_posterior = log_posterior_;
    trace_.samples.push_back(std::move(sample));
  }

  void finish() {
    trace_.acceptance_rate =
        generation_ ? static_cast<double>(accepted_) / generation_ : 0.0;
  }

  McmcRunTrace& trace() { return trace_; }
  std::int64_t generation() const { return generation_; }

 private:
  GammaRates rates_for(double alpha) const {
    return cfg_.gamma_categories > 1
               ? discretize_gamma(alpha, cfg_.gamma_categories)
               : GammaRates::homogeneous();
  }

  double posterior(const ChainState& s, double& loglik_out) {
    const double lp = log_prior(s, cfg_);
    loglik_out = 0.0;
    if (lp == kNegInf) return kNegInf;
    if (!cfg_.prior_only) {
      engine_->set_model(BinaryCTMC(s.pi1), rates_for(s.alpha));
      engine_->set_tree(clock_tree(s));
      loglik_out = engine_->log_likelihood();
    }
    return lp + loglik_out;
  }

  void step() {
    ChainState proposal = state_;
    double log_hastings = 0.0;
    const int move = static_cast<int>(rng_.uniform_int(6));
    switch (move) {
      case 0: {  // narrow exchange
        const auto candidates = internal_nonroot_nodes(state_.topology);
        const int v =
            candidates[rng_.uniform_int(candidates.size())];
        const int p = proposal.topology.nodes[v].parent;
        auto& pc = proposal.topology.nodes[p].children;
        const int s = pc[0] == v ? pc[1] : pc[0];
        auto& vc = proposal.topology.nodes[v].children;
        const int c = vc[rng_.uniform_int(2)];
        if (!(proposal.age[v] > proposal.age[s])) return;  // invalid swap
        *std::find(pc.begin(), pc.end(), s) = c;
        *std::find(vc.begin(), vc.end(), c) = s;
        proposal.topology.nodes[c].parent = p;
        proposal.topology.nodes[s].parent = v;
        break;
      }
      case 1: {  // node age slide
        const auto candidates = internal_nonroot_nodes(state_.topology);
        const int v = candidates[rng_.uniform_int(candidates.size())];
        double lo = 0.0;
        for (const int ch : proposal.topology.nodes[v].children) {
          lo = std::max(lo, proposal.age[ch]);
        }
        const double hi = proposal.age[proposal.topology.nodes[v].parent];
        proposal.age[v] = rng_.uniform(lo, hi);
        break;
      }
      case 2: {  // root age scale
        const double m =
            std::exp(2.0 * std::log(cfg_.scale_factor) * (rng_.uniform() - 0.5));
        proposal.age[proposal.topology.root] *= m;
        log_hastings = std::log(m);
        break;
      }
      case 3: {  // clock rate scale
        const double m =
            std::exp(2.0 * std::log(cfg_.scale_factor) * (rng_.uniform() - 0.5));
        proposal.clock_rate *= m;
        log_hastings = std::log(m);
        break;
      }
      case 4: {  // alpha sliding window, reflected
        double lo = 1e-4, hi = 1e9;
        if (cfg_.alpha_prior == AlphaPrior::kUniform) {
          lo = cfg_.alpha_uniform_lo;
          hi = cfg_.alpha_uniform_hi;
        }
        proposal.alpha = reflect_into(
            state_.alpha + cfg_.alpha_window * (rng_.uniform() - 0.5), lo, hi);
        break;
      }
      default: {  // pi1 sliding window, reflected
        proposal.pi1 = reflect_into(
            state_.pi1 + cfg_.pi_window * (rng_.uniform() - 0.5), 0.001, 0.999);
        break;
      }
    }

    double proposal_loglik = 0.0;
    const double proposal_posterior = posterior(proposal, proposal_loglik);
    if (proposal_posterior == kNegInf) return;
    const double log_ratio = proposal_posterior - log_posterior_ + log_hastings;
    if (log_ratio >= 0.0 || std::log(rng_.uniform() + 1e-300) < log_ratio) {
      state_ = std::move(proposal);
      log_posterior_ = proposal_posterior;
      log_likelihood_ = proposal_loglik;
      ++accepted_;
    }
  }

  const McmcConfig& cfg_;
  Rng rng_;
  ChainState state_;
  std::unique_ptr<LikelihoodEngine> engine_;
  double log_posterior_ = kNegInf;
  double log_likelihood_ = 0.0;
  std::int64_t generation_ = 0;
  std::int64_t accepted_ = 0;
  McmcRunTrace trace_;
};

}  // namespace

std::vector<std::vector<McmcSample>> McmcResult::retained(
    double burnin_fraction) const {
  std::vector<std::vector<McmcSample>> out;
  for (const auto& run : runs) {
    const std::size_t burnin = static_cast<std::size_t>(
        std::floor(burnin_fraction * static_cast<double>(run.samples.size())));
    out.emplace_back(run.samples.begin() +
                         static_cast<std::ptrdiff_t>(burnin),
                     run.samples.end());
  }
  return out;
}

std::vector<Tree> McmcResult::draw_evaluation_trees(std::size_t count,
                                                    double burnin_fraction,
                                                    std::uint64_t seed) const {
  const auto kept = retained(burnin_fraction);
  std::vector<const Tree*> pool;
  for (const auto& run : kept) {
    for (const auto& sample : run) pool.push_back(&sample.tree);
  }
  if (pool.empty()) throw std::runtime_error("mcmc: no retained samples");
  Rng rng(seed);
  std::vector<Tree> out;
  out.reserve(count);
  if (pool.size() >= count) {
    // partial Fisher-Yates: count distinct draws
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_int(idx.size() - i);
      std::swap(idx[i], idx[j]);
      out.push_back(*pool[idx[i]]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(*pool[rng.uniform_int(pool.size())]);
    }
  }
  return out;
}

McmcResult mcmc_run(const BinaryMatrix& matrix, const McmcConfig& config) {
  if (matrix.n_taxa() < 4) {
    throw std::invalid_argument("mcmc_run: need at least 4 taxa");
  }
  if (config.runs < 1) throw std::invalid_argument("mcmc_run: runs >= 1");
  if (config.sample_every < 1 || config.burnin_fraction <= 0.0 ||
      config.burnin_fraction >= 1.0) {
    throw std::invalid_argument("mcmc_run: bad sampling configuration");
  }

  std::vector<std::unique_ptr<Chain>> chains;
  for (int r = 0; r < config.runs; ++r) {
    chains.push_back(std::make_unique<Chain>(
        matrix, config,
        derive_seed(config.seed, "mcmc_run/" + std::to_string(r))));
    chains.back()->record_sample();  // generation 0
  }

  McmcResult result;
  std::int64_t done = 0;
  while (done < config.generations_max) {
    const std::int64_t chunk =
        std::min(config.check_every, config.generations_max - done);
    for (auto& chain : chains) chain->advance(chunk);
    done += chunk;

    if (config.runs >= 2) {
      std::vector<std::vector<Tree>> run_trees;
      bool enough = true;
      for (auto& chain : chains) {
        const auto& samples = chain->trace().samples;
        const std::size_t burnin = static_cast<std::size_t>(std::floor(
            config.burnin_fraction * static_cast<double>(samples.size())));
        std::vector<Tree> trees;
        for (std::size_t i = burnin; i < samples.size(); ++i) {
          trees.push_back(samples[i].tree);
        }
        if (trees.size() < static_cast<std::size_t>(config.min_samples_per_run)) {
          enough = false;
        }
        run_trees.push_back(std::move(trees));
      }
      if (enough) {
        result.final_asdsf = asdsf(run_trees);
        if (result.final_asdsf < config.asdsf_target) {
          result.converged = true;
          break;
        }
      }
    }
  }
  result.generations = done;
  for (auto& chain : chains) {
    chain->finish();
    result.runs.push_back(std::move(chain->trace()));
  }
  return result;
}

}  // namespace cogphy
