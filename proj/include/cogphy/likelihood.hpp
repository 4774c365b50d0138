#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cogphy/binary_matrix.hpp"
#include "cogphy/ctmc.hpp"
#include "cogphy/tree.hpp"

namespace cogphy {

// Felsenstein pruning over a fixed leaf set. Partials are cached per node
// and recomputed only along dirty paths, so branch-length tweaks during
// optimization cost one root path instead of a full traversal. Characters
// are vectorized: each node holds a (chars x 2k) array of conditional
// likelihoods, two states per Gamma category.
class LikelihoodEngine {
 public:
  LikelihoodEngine(const Tree& tree, const BinaryMatrix& matrix,
                   const BinaryCTMC& model, const GammaRates& gamma,
                   bool ascertainment_correction = false);

  // Replaces the topology (same leaf labels); full recompute on next call.
  void set_tree(const Tree& tree);

  void set_branch_length(int node, double length);
  double branch_length(int node) const { return lengths_[node]; }

  void set_model(const BinaryCTMC& model, const GammaRates& gamma);
  const BinaryCTMC& model() const { return model_; }
  const GammaRates& gamma() const { return gamma_; }

  double log_likelihood();

  // Current tree with the engine's branch lengths written back.
  Tree tree_with_lengths() const;

  int root() const { return root_; }
  int n_nodes() const { return static_cast<int>(parent_.size()); }
  int parent(int v) const { return parent_[v]; }

 private:
  void rebuild(const Tree& tree);
  void refresh_transition(int v);
  void mark_path_dirty(int v);
  void compute_partial(int v);

  BinaryMatrix matrix_;
  BinaryCTMC model_;
  GammaRates gamma_;
  bool ascertainment_;
  Eigen::Index n_cols_;  // data characters (+2 constant columns if correcting)

  Tree tree_;  // topology mirror; lengths live in lengths_
  int root_ = -1;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<double> lengths_;
  std::vector<int> postorder_;

  std::vector<Eigen::ArrayXXd> partials_;    // per node, chars x 2k
  std::vector<Eigen::Matrix2d> transition_;  // node * k + category
  std::vector<char> dirty_;
};

// One-shot convenience: pruning log-likelihood of the matrix on the tree.
// Leaves without data act as all-missing; every matrix taxon must be a leaf.
double log_likelihood(const Tree& tree, const BinaryMatrix& matrix,
                      const BinaryCTMC& model, const GammaRates& gamma,
                      bool ascertainment_correction = false);

}  // namespace cogphy
