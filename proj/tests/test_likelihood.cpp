#include <doctest.h>

#include "cogphy/likelihood.hpp"
#include "cogphy/rng.hpp"
#include "cogphy/simulate.hpp"
#include "oracles.hpp"

using namespace cogphy;

namespace {

BinaryMatrix matrix_of(std::vector<std::string> taxa,
                       std::vector<std::string> rows) {
  BinaryMatrix m;
  m.taxa = std::move(taxa);
  const std::size_t nchar = rows.front().size();
  for (std::size_t j = 0; j < nchar; ++j) {
    m.characters.push_back("c" + std::to_string(j + 1));
    m.provenance.push_back(Provenance::kCognate);
  }
  for (const auto& row : rows) {
    for (const char c : row) m.cells.push_back(c);
  }
  return m;
}

BinaryMatrix random_matrix(const std::vector<std::string>& taxa,
                           std::size_t nchar, double missing, Rng& rng) {
  std::vector<std::string> rows(taxa.size());
  for (auto& row : rows) {
    for (std::size_t j = 0; j < nchar; ++j) {
      row += rng.bernoulli(missing) ? '?' : (rng.bernoulli(0.5) ? '1' : '0');
    }
  }
  return matrix_of(taxa, rows);
}

}  // namespace

TEST_CASE("an all-missing character contributes log 1") {
  const Tree t = parse_newick("(A:0.3,B:0.2);");
  const BinaryMatrix m = matrix_of({"A", "B"}, {"?", "?"});
  CHECK(log_likelihood(t, m, BinaryCTMC(0.5), GammaRates::homogeneous()) ==
        doctest::Approx(0.0));
}

TEST_CASE("the two-taxon worked example evaluates to log(0.5 P01(0.5))") {
  const Tree t = parse_newick("(A:0.25,B:0.25);");
  const BinaryMatrix m = matrix_of({"A", "B"}, {"0", "1"});
  const double ll =
      log_likelihood(t, m, BinaryCTMC(0.5), GammaRates::homogeneous());
  // 0.5 * 0.5 * (1 - exp(-1)) = 0.15803014, log = -1.8449695
  CHECK(ll == doctest::Approx(-1.8449695).epsilon(1e-7));
}

TEST_CASE("pruning equals exhaustive enumeration on small instances") {
  Rng rng(8080);
  const std::vector<std::vector<std::string>> taxon_sets = {
      {"A", "B", "C"}, {"A", "B", "C", "D"}, {"A", "B", "C", "D", "E"}};
  for (int it = 0; it < 30; ++it) {
    const auto& taxa = taxon_sets[it % taxon_sets.size()];
    const Tree tree = oracles::random_binary_tree(
        taxa, derive_seed(900, std::to_string(it)), 0.01, 2.0);
    const BinaryMatrix m =
        random_matrix(taxa, 1 + rng.uniform_int(6), it % 3 ? 0.2 : 0.0, rng);
    const BinaryCTMC model(rng.uniform(0.1, 0.9));
    const GammaRates gamma = (it % 2) ? discretize_gamma(0.5 + rng.uniform() * 5, 4)
                                      : GammaRates::homogeneous();
    const double fast = log_likelihood(tree, m, model, gamma);
    const double slow = oracles::enumeration_log_likelihood(tree, m, model, gamma);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
  }
}

TEST_CASE("likelihood ignores where the unrooted tree is rooted") {
  // same unrooted tree, three rooted presentations
  const char* forms[] = {
      "(A:0.1,B:0.2,(C:0.4,D:0.5):0.3);",
      "(C:0.4,D:0.5,(A:0.1,B:0.2):0.3);",
      "((A:0.1,B:0.2):0.15,(C:0.4,D:0.5):0.15);",
  };
  Rng rng(17);
  const BinaryMatrix m = random_matrix({"A", "B", "C", "D"}, 8, 0.15, rng);
  const BinaryCTMC model(0.35);
  const GammaRates gamma = discretize_gamma(0.7, 4);
  const double reference = log_likelihood(parse_newick(forms[0]), m, model, gamma);
  for (const char* f : forms) {
    CHECK(log_likelihood(parse_newick(f), m, model, gamma) ==
          doctest::Approx(reference).epsilon(1e-10));
  }
}

TEST_CASE("extra tree leaves act as missing data") {
  const Tree big = parse_newick("((A:0.2,B:0.2):0.1,(C:0.2,X:0.2):0.1);");
  const Tree small = parse_newick("((A:0.2,B:0.2):0.1,C:0.3);");
  Rng rng(5);
  const BinaryMatrix m = random_matrix({"A", "B", "C"}, 6, 0.0, rng);
  const BinaryCTMC model(0.5);
  // X marginalizes out; for the symmetric model the two likelihoods agree
  CHECK(log_likelihood(big, m, model, GammaRates::homogeneous()) ==
        doctest::Approx(
            log_likelihood(small, m, model, GammaRates::homogeneous()))
            .epsilon(1e-10));
}

TEST_CASE("a matrix taxon missing from the tree is an error") {
  const Tree t = parse_newick("(A:0.1,B:0.1);");
  const BinaryMatrix m = matrix_of({"A", "Z"}, {"0", "1"});
  CHECK_THROWS_AS(
      log_likelihood(t, m, BinaryCTMC(0.5), GammaRates::homogeneous()),
      std::invalid_argument);
}

TEST_CASE("likelihood stays finite on contradictory zero-length data") {
  const Tree t = parse_newick("(A:0,B:0);");
  const BinaryMatrix m = matrix_of({"A", "B"}, {"0", "1"});
  const double ll =
      log_likelihood(t, m, BinaryCTMC(0.5), GammaRates::homogeneous());
  CHECK(std::isfinite(ll));
}

TEST_CASE("incremental branch updates match a fresh evaluation") {
  const std::vector<std::string> taxa = {"A", "B", "C", "D", "E", "F"};
  const Tree tree = oracles::random_binary_tree(taxa, 4321, 0.05, 0.5);
  Rng rng(99);
  const BinaryMatrix m = random_matrix(taxa, 40, 0.1, rng);
  const BinaryCTMC model(0.4);
  const GammaRates gamma = discretize_gamma(1.0, 4);

  LikelihoodEngine engine(tree, m, model, gamma);
  engine.log_likelihood();
  for (int it = 0; it < 20; ++it) {
    const int v = 1 + static_cast<int>(rng.uniform_int(tree.size() - 1));
    const double len = rng.uniform(0.01, 1.0);
    if (v == engine.root()) continue;
    engine.set_branch_length(v, len);
    const double incremental = engine.log_likelihood();
    const double fresh =
        log_likelihood(engine.tree_with_lengths(), m, model, gamma);
    CHECK(incremental == doctest::Approx(fresh).epsilon(1e-12));
  }
}

TEST_CASE("ascertainment correction raises the log-likelihood") {
  const std::vector<std::string> taxa = {"A", "B", "C", "D", "E"};
  const Tree tree = oracles::random_binary_tree(taxa, 777, 0.05, 0.4);
  // variable characters only, as in cognate data
  const BinaryMatrix m = simulate_matrix(tree, BinaryCTMC(0.5),
                                         GammaRates::homogeneous(), 60, 0.0, 3);
  const double plain =
      log_likelihood(tree, m, BinaryCTMC(0.5), GammaRates::homogeneous(), false);
  const double corrected =
      log_likelihood(tree, m, BinaryCTMC(0.5), GammaRates::homogeneous(), true);
  CHECK(corrected > plain);
}
