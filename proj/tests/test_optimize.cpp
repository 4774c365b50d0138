#include <doctest.h>

#include "cogphy/numerics.hpp"
#include "cogphy/optimize.hpp"
#include "cogphy/rng.hpp"
#include "cogphy/simulate.hpp"
#include "oracles.hpp"

using namespace cogphy;

TEST_CASE("brent_minimize finds a quadratic minimum") {
  const auto r = brent_minimize([](double x) { return (x - 2.5) * (x - 2.5); },
                                0.0, 10.0, 1e-8);
  CHECK(r.x == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("brent_maximize walks to the boundary on monotone functions") {
  const auto r = brent_maximize([](double x) { return x; }, 0.0201, 100.0, 1e-4);
  CHECK(r.x > 99.9);
}

TEST_CASE("gamma_p_inv inverts gamma_p") {
  Rng rng(12);
  for (int it = 0; it < 50; ++it) {
    const double a = rng.uniform(0.05, 80.0);
    const double p = rng.uniform(0.01, 0.99);
    const double x = gamma_p_inv(a, p);
    CHECK(gamma_p(a, x) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("fit_parameters never lowers the log-likelihood") {
  const std::vector<std::string> taxa = {"A", "B", "C", "D", "E", "F"};
  for (int it = 0; it < 3; ++it) {
    const Tree truth = oracles::random_binary_tree(
        taxa, derive_seed(11, std::to_string(it)), 0.05, 0.4);
    const BinaryMatrix m = simulate_matrix(
        truth, BinaryCTMC(0.4), discretize_gamma(1.0, 4), 150, 0.05,
        derive_seed(12, std::to_string(it)));
    // deliberately poor starting lengths and parameters
    Tree start = truth;
    for (int v = 0; v < static_cast<int>(start.size()); ++v) {
      if (v != start.root) start.nodes[v].length = 0.9;
    }
    const BinaryCTMC model(0.5);
    const GammaRates gamma = discretize_gamma(5.0, 4);
    const double before = log_likelihood(start, m, model, gamma);
    const FitResult fit = fit_parameters(start, m, model, gamma);
    CHECK(fit.log_lik >= before - 1e-9);
    CHECK(fit.log_lik ==
          doctest::Approx(log_likelihood(fit.tree, m, fit.model, fit.gamma))
              .epsilon(1e-9));
    CHECK(fit.gamma.alpha >= 0.0201);
    CHECK(fit.gamma.alpha <= 100.0);
    CHECK(fit.model.pi1 > 0.0);
    CHECK(fit.model.pi1 < 1.0);
  }
}

TEST_CASE("fit recovers the analytic two-taxon distance") {
  // symmetric model: p_mismatch(d) = (1 - exp(-2d)) / 2; with 40 of 100
  // characters mismatching, the ML total distance is -log(0.2)/2
  BinaryMatrix m;
  m.taxa = {"A", "B"};
  for (int j = 0; j < 100; ++j) {
    m.characters.push_back("c" + std::to_string(j));
    m.provenance.push_back(Provenance::kCognate);
  }
  m.cells.assign(200, '0');
  for (int j = 0; j < 50; ++j) m.cells[j] = '1';          // A: 1s at 0..49
  for (int j = 20; j < 70; ++j) m.cells[100 + j] = '1';   // B: 1s at 20..69

  FitOptions opt;
  opt.optimize_alpha = false;
  opt.optimize_frequencies = false;
  const FitResult fit = fit_parameters(parse_newick("(A:0.1,B:0.1);"), m,
                                       BinaryCTMC(0.5),
                                       GammaRates::homogeneous(), opt);
  const double expected = -std::log(1.0 - 2.0 * 0.4) / 2.0;
  CHECK(fit.tree.total_length() == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("fit drives alpha to the ceiling on homoplasy-free characters") {
  const Tree tree =
      parse_newick("(((A:0.1,B:0.1):0.1,C:0.2):0.1,(D:0.2,E:0.2):0.1,F:0.3);");
  BinaryMatrix m;
  m.taxa = {"A", "B", "C", "D", "E", "F"};
  const std::vector<std::string> chars = {"110000", "111000", "000110",
                                          "000111"};
  for (int rep = 0; rep < 10; ++rep) {
    for (std::size_t c = 0; c < chars.size(); ++c) {
      m.characters.push_back("c" + std::to_string(rep) + "_" + std::to_string(c));
      m.provenance.push_back(Provenance::kCognate);
    }
  }
  m.cells.assign(m.n_taxa() * m.n_chars(), '0');
  for (std::size_t i = 0; i < m.n_taxa(); ++i) {
    for (std::size_t j = 0; j < m.n_chars(); ++j) {
      m.cells[i * m.n_chars() + j] = chars[j % chars.size()][i];
    }
  }
  const FitResult fit =
      fit_parameters(tree, m, BinaryCTMC(0.5), discretize_gamma(1.0, 4));
  CHECK(fit.gamma.alpha > 99.0);
}
