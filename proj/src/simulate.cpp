#include "cogphy/simulate.hpp"

#include <stdexcept>

#include "cogphy/rng.hpp"

namespace cogphy {

BinaryMatrix simulate_matrix(const Tree& tree, const BinaryCTMC& model,
                             const GammaRates& gamma, std::size_t n_chars,
                             double missing_fraction, std::uint64_t seed) {
  if (n_chars < 1) throw std::invalid_argument("simulate_matrix: n_chars >= 1");
  model.validate();
  for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
    if (v != tree.root && !has_length(tree.nodes[v].length)) {
      throw std::invalid_argument("simulate_matrix: tree lacks branch lengths");
    }
  }

  Rng rng(seed);
  const auto leaves = tree.leaves();
  const auto order = tree.postorder();  // preorder = reverse postorder here

  BinaryMatrix m;
  for (const int v : leaves) m.taxa.push_back(tree.nodes[v].name);
  m.characters.reserve(n_chars);
  m.cells.assign(m.taxa.size() * n_chars, '?');

  std::vector<int> state(tree.size(), 0);
  const int k = static_cast<int>(gamma.rates.size());

  for (std::size_t j = 0; j < n_chars; ++j) {
    m.characters.push_back("sim_" + std::to_string(j + 1));
    m.provenance.push_back(Provenance::kCognate);

    const double rate = gamma.rates[rng.uniform_int(static_cast<std::uint64_t>(k))];
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      if (v == tree.root) {
        state[v] = rng.bernoulli(model.pi1) ? 1 : 0;
        continue;
      }
      const Eigen::Matrix2d p =
          transition_matrix(model, tree.nodes[v].length, rate);
      state[v] = rng.bernoulli(p(state[tree.nodes[v].parent], 1)) ? 1 : 0;
    }

    while (true) {
      bool any_observed = false;
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        const bool masked = missing_fraction > 0.0 && rng.bernoulli(missing_fraction);
        m.cells[i * n_chars + j] = masked ? '?' : (state[leaves[i]] ? '1' : '0');
        if (!masked) any_observed = true;
      }
      if (any_observed) break;  // redraw fully masked characters
    }
  }
  return m;
}

}  // namespace cogphy
