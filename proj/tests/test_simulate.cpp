#include <doctest.h>

#include "cogphy/simulate.hpp"
#include "oracles.hpp"

using namespace cogphy;

TEST_CASE("zero-length branches give constant characters") {
  Tree t = parse_newick("((A:0,B:0):0,C:0,D:0);");
  const BinaryMatrix m = simulate_matrix(t, BinaryCTMC(0.5),
                                         GammaRates::homogeneous(), 50, 0.0, 1);
  for (std::size_t j = 0; j < m.n_chars(); ++j) {
    for (std::size_t i = 1; i < m.n_taxa(); ++i) {
      CHECK(m.cell(i, j) == m.cell(0, j));
    }
  }
}

TEST_CASE("long star branches reach stationarity") {
  Tree star;
  star.root = star.add_node(-1);
  for (int i = 0; i < 5; ++i) {
    const int leaf = star.add_node(star.root);
    star.nodes[leaf].name = "L" + std::to_string(i);
    star.nodes[leaf].length = 50.0;
  }
  const BinaryMatrix m = simulate_matrix(star, BinaryCTMC(0.5),
                                         GammaRates::homogeneous(), 10000, 0.0, 7);
  std::size_t ones = 0;
  for (const char c : m.cells) {
    if (c == '1') ++ones;
  }
  const double fraction = static_cast<double>(ones) / m.cells.size();
  CHECK(fraction > 0.48);
  CHECK(fraction < 0.52);
}

TEST_CASE("simulation is deterministic given the seed") {
  const Tree t = oracles::random_binary_tree({"A", "B", "C", "D", "E"}, 3, 0.05, 0.3);
  const BinaryMatrix a =
      simulate_matrix(t, BinaryCTMC(0.3), discretize_gamma(0.5, 4), 200, 0.2, 42);
  const BinaryMatrix b =
      simulate_matrix(t, BinaryCTMC(0.3), discretize_gamma(0.5, 4), 200, 0.2, 42);
  CHECK(a.cells == b.cells);
  const BinaryMatrix c =
      simulate_matrix(t, BinaryCTMC(0.3), discretize_gamma(0.5, 4), 200, 0.2, 43);
  CHECK(a.cells != c.cells);
}

TEST_CASE("missing fraction is honored and no character is fully masked") {
  const Tree t = oracles::random_binary_tree({"A", "B", "C", "D", "E", "F"}, 9,
                                             0.05, 0.3);
  const BinaryMatrix m = simulate_matrix(t, BinaryCTMC(0.5),
                                         GammaRates::homogeneous(), 4000, 0.3, 11);
  m.validate();  // also checks no all-'?' character
  std::size_t missing = 0;
  for (const char c : m.cells) {
    if (c == '?') ++missing;
  }
  const double fraction = static_cast<double>(missing) / m.cells.size();
  CHECK(fraction > 0.27);
  CHECK(fraction < 0.33);
}

TEST_CASE("simulate_matrix validates its inputs") {
  const Tree no_lengths = parse_newick("((A,B),C,D);");
  CHECK_THROWS_AS(simulate_matrix(no_lengths, BinaryCTMC(0.5),
                                  GammaRates::homogeneous(), 10, 0.0, 1),
                  std::invalid_argument);
  const Tree t = parse_newick("((A:1,B:1):1,C:1,D:1);");
  CHECK_THROWS_AS(
      simulate_matrix(t, BinaryCTMC(0.5), GammaRates::homogeneous(), 0, 0.0, 1),
      std::invalid_argument);
}

TEST_CASE("simulated frequencies respond to pi1") {
  const Tree t = oracles::random_binary_tree({"A", "B", "C", "D"}, 31, 0.5, 2.0);
  const BinaryMatrix m = simulate_matrix(t, BinaryCTMC(0.8),
                                         GammaRates::homogeneous(), 5000, 0.0, 13);
  std::size_t ones = 0;
  for (const char c : m.cells) {
    if (c == '1') ++ones;
  }
  const double fraction = static_cast<double>(ones) / m.cells.size();
  CHECK(fraction > 0.74);
  CHECK(fraction < 0.86);
}
