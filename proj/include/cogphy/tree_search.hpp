#pragma once

#include <cstdint>

#include "cogphy/binary_matrix.hpp"
#include "cogphy/optimize.hpp"
#include "cogphy/tree.hpp"

namespace cogphy {

enum class StartKind { kRandom, kParsimony };

// Fitch parsimony score of the matrix on the tree ('?' never costs).
int parsimony_score(const Tree& tree, const BinaryMatrix& matrix);

// Random: uniform over unrooted topologies by stepwise attachment to a
// uniformly chosen edge. Parsimony: seeded random addition order, each
// taxon grafted where the Fitch score is lowest (ties: first edge in node
// order). Branch lengths start at 0.1.
Tree starting_tree(StartKind kind, const BinaryMatrix& matrix,
                   std::uint64_t seed);

struct NniMove {
  int edge_child = -1;  // v of the internal edge (parent(v), v)
  int inner = -1;       // child of v that swaps
  int outer = -1;       // child of parent(v) that swaps
};

// The two alternative topologies around each internal edge, in a fixed
// deterministic order.
std::vector<NniMove> nni_moves(const Tree& tree);
Tree apply_nni(const Tree& tree, const NniMove& move);

struct SearchOptions {
  int gamma_categories = 4;
  double min_improvement = 1e-6;  // logL gain required to accept an NNI
  FitOptions fit;
};

struct SearchResult {
  Tree tree;
  double log_lik = 0.0;
  BinaryCTMC model;
  GammaRates gamma;
  StartKind start = StartKind::kRandom;
};

struct MlSearchResult {
  Tree best_tree;
  double best_log_lik = 0.0;
  BinaryCTMC best_model;
  GammaRates best_gamma;
  std::vector<SearchResult> searches;
};

// Independent hill-climbing searches over NNI neighborhoods with local
// branch re-optimization; deterministic given the seed.
MlSearchResult ml_search(const BinaryMatrix& matrix, int n_random,
                         int n_parsimony, std::uint64_t seed,
                         const SearchOptions& options = {});

}  // namespace cogphy
