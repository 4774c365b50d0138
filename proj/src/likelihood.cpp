#include "cogphy/likelihood.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace cogphy {

namespace {
constexpr double kTinyLikelihood = 1e-300;  // keeps log finite
}

LikelihoodEngine::LikelihoodEngine(const Tree& tree, const BinaryMatrix& matrix,
                                   const BinaryCTMC& model,
                                   const GammaRates& gamma,
                                   bool ascertainment_correction)
    : matrix_(matrix),
      model_(model),
      gamma_(gamma),
      ascertainment_(ascertainment_correction) {
  model_.validate();
  n_cols_ = static_cast<Eigen::Index>(matrix_.n_chars()) + (ascertainment_ ? 2 : 0);
  rebuild(tree);
}

void LikelihoodEngine::rebuild(const Tree& tree) {
  tree_ = tree;
  root_ = tree.root;
  const int n = static_cast<int>(tree.size());
  parent_.resize(n);
  children_.assign(n, {});
  lengths_.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    parent_[v] = tree.nodes[v].parent;
    children_[v] = tree.nodes[v].children;
    lengths_[v] = has_length(tree.nodes[v].length) ? tree.nodes[v].length : 0.0;
  }
  postorder_ = tree.postorder();

  const int k = static_cast<int>(gamma_.rates.size());
  partials_.assign(n, Eigen::ArrayXXd(n_cols_, 2 * k));
  transition_.assign(static_cast<std::size_t>(n) * k, Eigen::Matrix2d::Identity());
  dirty_.assign(n, 1);

  // leaf partials: fixed by the data, identical across categories
  std::map<std::string, std::size_t> taxon_row;
  for (std::size_t i = 0; i < matrix_.n_taxa(); ++i) {
    taxon_row[matrix_.taxa[i]] = i;
  }
  std::size_t found = 0;
  for (int v = 0; v < n; ++v) {
    if (!tree.is_leaf(v)) continue;
    auto& part = partials_[v];
    const auto it = taxon_row.find(tree.nodes[v].name);
    if (it == taxon_row.end()) {
      part.setOnes();  // leaf without data
    } else {
      ++found;
      for (std::size_t j = 0; j < matrix_.n_chars(); ++j) {
        const char state = matrix_.cell(it->second, j);
        const double p0 = (state == '0' || state == '?') ? 1.0 : 0.0;
        const double p1 = (state == '1' || state == '?') ? 1.0 : 0.0;
        for (int g = 0; g < k; ++g) {
          part(static_cast<Eigen::Index>(j), 2 * g) = p0;
          part(static_cast<Eigen::Index>(j), 2 * g + 1) = p1;
        }
      }
      if (ascertainment_) {
        for (int g = 0; g < k; ++g) {
          part(n_cols_ - 2, 2 * g) = 1.0;  // constant all-0 character
          part(n_cols_ - 2, 2 * g + 1) = 0.0;
          part(n_cols_ - 1, 2 * g) = 0.0;  // constant all-1 character
          part(n_cols_ - 1, 2 * g + 1) = 1.0;
        }
      }
    }
    dirty_[v] = 0;
  }
  if (found != matrix_.n_taxa()) {
    throw std::invalid_argument(
        "likelihood: matrix contains a taxon that is not a leaf of the tree");
  }
  for (int v = 0; v < n; ++v) refresh_transition(v);
}

void LikelihoodEngine::set_tree(const Tree& tree) { rebuild(tree); }

void LikelihoodEngine::refresh_transition(int v) {
  const int k = static_cast<int>(gamma_.rates.size());
  for (int g = 0; g < k; ++g) {
    transition_[static_cast<std::size_t>(v) * k + g] =
        transition_matrix(model_, lengths_[v], gamma_.rates[g]);
  }
}

void LikelihoodEngine::mark_path_dirty(int v) {
  for (int u = v; u >= 0; u = parent_[u]) dirty_[u] = 1;
}

void LikelihoodEngine::set_branch_length(int node, double length) {
  lengths_[node] = length;
  refresh_transition(node);
  if (parent_[node] >= 0) mark_path_dirty(parent_[node]);
}

void LikelihoodEngine::set_model(const BinaryCTMC& model, const GammaRates& gamma) {
  const bool category_count_changed = gamma.rates.size() != gamma_.rates.size();
  model_ = model;
  model_.validate();
  gamma_ = gamma;
  if (category_count_changed) {
    rebuild(tree_with_lengths());
    return;
  }
  for (int v = 0; v < n_nodes(); ++v) {
    refresh_transition(v);
    if (!children_[v].empty()) dirty_[v] = 1;
  }
}

void LikelihoodEngine::compute_partial(int v) {
  const int k = static_cast<int>(gamma_.rates.size());
  auto& part = partials_[v];
  bool first = true;
  for (const int c : children_[v]) {
    const auto& cp = partials_[c];
    for (int g = 0; g < k; ++g) {
      const Eigen::Matrix2d& p = transition_[static_cast<std::size_t>(c) * k + g];
      if (first) {
        part.col(2 * g) = p(0, 0) * cp.col(2 * g) + p(0, 1) * cp.col(2 * g + 1);
        part.col(2 * g + 1) = p(1, 0) * cp.col(2 * g) + p(1, 1) * cp.col(2 * g + 1);
      } else {
        part.col(2 * g) *= p(0, 0) * cp.col(2 * g) + p(0, 1) * cp.col(2 * g + 1);
        part.col(2 * g + 1) *= p(1, 0) * cp.col(2 * g) + p(1, 1) * cp.col(2 * g + 1);
      }
    }
    first = false;
  }
  dirty_[v] = 0;
}

double LikelihoodEngine::log_likelihood() {
  for (const int v : postorder_) {
    if (dirty_[v] && !children_[v].empty()) compute_partial(v);
  }
  const int k = static_cast<int>(gamma_.rates.size());
  const auto& rp = partials_[root_];

  Eigen::ArrayXd site_lik = Eigen::ArrayXd::Zero(n_cols_);
  for (int g = 0; g < k; ++g) {
    site_lik += gamma_.weights[static_cast<std::size_t>(g)] *
                (model_.pi0 * rp.col(2 * g) + model_.pi1 * rp.col(2 * g + 1));
  }
  site_lik = site_lik.max(kTinyLikelihood);

  const Eigen::Index n_data = static_cast<Eigen::Index>(matrix_.n_chars());
  double total = site_lik.head(n_data).log().sum();
  if (ascertainment_) {
    const double p_constant = site_lik(n_cols_ - 2) + site_lik(n_cols_ - 1);
    const double denom = std::max(1.0 - p_constant, kTinyLikelihood);
    total -= static_cast<double>(n_data) * std::log(denom);
  }
  return total;
}

Tree LikelihoodEngine::tree_with_lengths() const {
  Tree out = tree_;
  for (int v = 0; v < n_nodes(); ++v) {
    out.nodes[v].length = (v == root_) ? kNoBranchLength : lengths_[v];
  }
  return out;
}

double log_likelihood(const Tree& tree, const BinaryMatrix& matrix,
                      const BinaryCTMC& model, const GammaRates& gamma,
                      bool ascertainment_correction) {
  LikelihoodEngine engine(tree, matrix, model, gamma, ascertainment_correction);
  return engine.log_likelihood();
}

}  // namespace cogphy
