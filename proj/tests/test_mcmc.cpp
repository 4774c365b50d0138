#include <doctest.h>

#include <cmath>

#include "cogphy/mcmc.hpp"
#include "cogphy/simulate.hpp"
#include "cogphy/tree_compare.hpp"
#include "oracles.hpp"

using namespace cogphy;

namespace {

BinaryMatrix four_taxon_matrix() {
  BinaryMatrix m;
  m.taxa = {"A", "B", "C", "D"};
  m.characters = {"c1"};
  m.provenance = {Provenance::kCognate};
  m.cells = {'1', '0', '0', '1'};
  return m;
}

McmcResult prior_only_run(std::uint64_t seed, std::int64_t generations,
                          int thin, AlphaPrior prior = AlphaPrior::kUniform) {
  McmcConfig cfg;
  cfg.prior_only = true;
  cfg.runs = 1;
  cfg.sample_every = thin;
  cfg.generations_max = generations;
  cfg.check_every = generations;
  cfg.alpha_prior = prior;
  cfg.seed = seed;
  return mcmc_run(four_taxon_matrix(), cfg);
}

}  // namespace

TEST_CASE("mcmc_run requires at least four taxa") {
  BinaryMatrix m;
  m.taxa = {"A", "B", "C"};
  m.characters = {"c1"};
  m.provenance = {Provenance::kCognate};
  m.cells = {'1', '0', '0'};
  CHECK_THROWS_AS(mcmc_run(m, McmcConfig{}), std::invalid_argument);
}

TEST_CASE("prior-only sampling matches the priors") {
  const McmcResult res = prior_only_run(31, 3200000, 300);
  const auto kept = res.retained(0.25);
  REQUIRE(kept.size() == 1);
  REQUIRE(kept[0].size() >= 7000);

  std::vector<double> alphas, roots;
  double alpha_mean = 0.0;
  int topo_counts[3] = {0, 0, 0};
  for (const auto& s : kept[0]) {
    alphas.push_back(s.alpha);
    roots.push_back(s.root_age);
    alpha_mean += s.alpha;
    const auto q = quartet_topology(s.tree, "A", "B", "C", "D");
    REQUIRE(q != QuartetTopology::kStar);
    ++topo_counts[static_cast<int>(q)];
  }
  alpha_mean /= static_cast<double>(kept[0].size());

  // Uniform(0.01, 100) has mean 50.005
  CHECK(alpha_mean > 45.0);
  CHECK(alpha_mean < 55.0);

  // uniform prior over rooted topologies induces 1/3 per unrooted class
  for (const int c : topo_counts) {
    const double freq = static_cast<double>(c) / kept[0].size();
    CHECK(freq > 1.0 / 3.0 - 0.05);
    CHECK(freq < 1.0 / 3.0 + 0.05);
  }

  // Kolmogorov-Smirnov against the fully specified marginals
  const double p_alpha = oracles::ks_test_pvalue(
      alphas, [](double x) { return (x - 0.01) / (100.0 - 0.01); });
  const double p_root = oracles::ks_test_pvalue(
      roots, [](double x) { return 1.0 - std::exp(-x); });
  CHECK(p_alpha > 0.01);
  CHECK(p_root > 0.01);
}

TEST_CASE("the exponential alpha prior concentrates on small values") {
  const McmcResult res = prior_only_run(7, 400000, 100, AlphaPrior::kExponential);
  const auto kept = res.retained(0.25);
  double mean = 0.0;
  for (const auto& s : kept[0]) mean += s.alpha;
  mean /= static_cast<double>(kept[0].size());
  // Exponential(1) has mean 1; the prior keeps alpha far below the ML regime
  CHECK(mean > 0.7);
  CHECK(mean < 1.3);
}

TEST_CASE("two runs converge on clock-simulated data and recover the topology") {
  const Tree truth = parse_newick(
      "((A:0.1,B:0.1):0.2,((C:0.15,D:0.15):0.05,(E:0.1,F:0.1):0.1):0.1);");
  const BinaryMatrix m = simulate_matrix(truth, BinaryCTMC(0.5),
                                         discretize_gamma(1.0, 4), 300, 0.0, 17);
  McmcConfig cfg;
  cfg.runs = 2;
  cfg.sample_every = 100;
  cfg.generations_max = 500000;
  cfg.check_every = 20000;
  cfg.seed = 5;
  const McmcResult res = mcmc_run(m, cfg);
  CHECK(res.converged);
  CHECK(res.final_asdsf < 0.01);
  REQUIRE(res.runs.size() == 2);

  std::vector<Tree> pooled;
  for (const auto& run : res.retained(cfg.burnin_fraction)) {
    for (const auto& s : run) pooled.push_back(s.tree);
  }
  CHECK(frequent_splits(pooled, 0.5) == tree_splits(truth));

  const auto draws = res.draw_evaluation_trees(1000, cfg.burnin_fraction, 99);
  CHECK(draws.size() == 1000);
  CHECK(posterior_gqd_median(draws, truth) == doctest::Approx(0.0));
}

TEST_CASE("sampled clock trees are ultrametric") {
  const McmcResult res = prior_only_run(3, 20000, 500);
  for (const auto& s : res.runs[0].samples) {
    const Tree& t = s.tree;
    std::vector<double> depth(t.size(), 0.0);
    double leaf_depth = -1.0;
    const std::vector<int> order = t.postorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      const int p = t.nodes[v].parent;
      if (p >= 0) depth[v] = depth[p] + t.nodes[v].length;
      if (t.is_leaf(v)) {
        if (leaf_depth < 0.0) leaf_depth = depth[v];
        CHECK(depth[v] == doctest::Approx(leaf_depth).epsilon(1e-9));
      }
    }
    CHECK(leaf_depth ==
          doctest::Approx(s.root_age * s.clock_rate).epsilon(1e-9));
  }
}

TEST_CASE("mcmc runs are deterministic given the seed") {
  McmcConfig cfg;
  cfg.runs = 2;
  cfg.sample_every = 50;
  cfg.generations_max = 5000;
  cfg.check_every = 5000;
  cfg.seed = 12;
  const BinaryMatrix m = four_taxon_matrix();
  const McmcResult a = mcmc_run(m, cfg);
  const McmcResult b = mcmc_run(m, cfg);
  REQUIRE(a.runs.size() == b.runs.size());
  for (std::size_t r = 0; r < a.runs.size(); ++r) {
    REQUIRE(a.runs[r].samples.size() == b.runs[r].samples.size());
    for (std::size_t i = 0; i < a.runs[r].samples.size(); ++i) {
      CHECK(a.runs[r].samples[i].alpha == b.runs[r].samples[i].alpha);
      CHECK(write_newick(a.runs[r].samples[i].tree) ==
            write_newick(b.runs[r].samples[i].tree));
    }
  }
}

TEST_CASE("hitting the generation cap flags non-convergence") {
  McmcConfig cfg;
  cfg.runs = 2;
  cfg.sample_every = 10;
  cfg.generations_max = 200;  // far too short
  cfg.check_every = 100;
  cfg.min_samples_per_run = 1000;
  cfg.seed = 4;
  const McmcResult res = mcmc_run(four_taxon_matrix(), cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.generations == 200);
}
