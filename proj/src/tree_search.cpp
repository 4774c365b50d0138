#include "cogphy/tree_search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <stdexcept>

#include "cogphy/rng.hpp"

namespace cogphy {

namespace {

// Fitch state sets packed into 64-character words: one "can be 0" and one
// "can be 1" mask per word.
struct FitchScorer {
  std::size_t n_words = 0;
  std::uint64_t tail_mask = ~0ull;
  std::map<std::string, std::array<std::vector<std::uint64_t>, 2>> leaf_sets;

  explicit FitchScorer(const BinaryMatrix& matrix) {
    const std::size_t n = matrix.n_chars();
    n_words = (n + 63) / 64;
    const std::size_t tail = n % 64;
    tail_mask = tail ? ((1ull << tail) - 1) : ~0ull;
    for (std::size_t i = 0; i < matrix.n_taxa(); ++i) {
      std::array<std::vector<std::uint64_t>, 2> sets;
      sets[0].assign(n_words, 0);
      sets[1].assign(n_words, 0);
      for (std::size_t j = 0; j < n; ++j) {
        const char state = matrix.cell(i, j);
        if (state == '0' || state == '?') sets[0][j / 64] |= 1ull << (j % 64);
        if (state == '1' || state == '?') sets[1][j / 64] |= 1ull << (j % 64);
      }
      leaf_sets[matrix.taxa[i]] = std::move(sets);
    }
  }

  int score(const Tree& tree) const {
    std::vector<std::vector<std::uint64_t>> s0(tree.size()), s1(tree.size());
    int changes = 0;
    for (const int v : tree.postorder()) {
      if (tree.is_leaf(v)) {
        const auto it = leaf_sets.find(tree.nodes[v].name);
        if (it == leaf_sets.end()) {
          s0[v].assign(n_words, ~0ull);
          s1[v].assign(n_words, ~0ull);
        } else {
          s0[v] = it->second[0];
          s1[v] = it->second[1];
        }
        continue;
      }
      const auto& ch = tree.nodes[v].children;
      s0[v] = s0[ch[0]];
      s1[v] = s1[ch[0]];
      for (std::size_t ci = 1; ci < ch.size(); ++ci) {
        const auto& c0 = s0[ch[ci]];
        const auto& c1 = s1[ch[ci]];
        for (std::size_t w = 0; w < n_words; ++w) {
          const std::uint64_t inter0 = s0[v][w] & c0[w];
          const std::uint64_t inter1 = s1[v][w] & c1[w];
          const std::uint64_t has = inter0 | inter1;
          const std::uint64_t mask = (w + 1 == n_words) ? tail_mask : ~0ull;
          changes += std::popcount(~has & mask);
          s0[v][w] = inter0 | (~has & (s0[v][w] | c0[w]));
          s1[v][w] = inter1 | (~has & (s1[v][w] | c1[w]));
        }
      }
      // free children sets early
      for (const int c : ch) {
        s0[c].clear();
        s1[c].clear();
      }
    }
    return changes;
  }
};

Tree three_taxon_tree(const std::string& a, const std::string& b,
                      const std::string& c) {
  Tree tree;
  tree.root = tree.add_node(-1);
  for (const auto& name : {a, b, c}) {
    const int leaf = tree.add_node(tree.root);
    tree.nodes[leaf].name = name;
  }
  return tree;
}

// Grafts a new leaf onto the branch above node v: v's slot under its parent
// is taken by a fresh internal node with children {v, leaf}.
void graft_leaf(Tree& tree, int v, const std::string& name) {
  const int p = tree.nodes[v].parent;
  const int u = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{p, {v}, "", kNoBranchLength});
  auto& slot = tree.nodes[p].children;
  *std::find(slot.begin(), slot.end(), v) = u;
  tree.nodes[v].parent = u;
  const int leaf = tree.add_node(u);
  tree.nodes[leaf].name = name;
}

std::vector<int> attachment_points(const Tree& tree) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
    if (v != tree.root) out.push_back(v);
  }
  return out;
}

void set_all_lengths(Tree& tree, double value) {
  for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
    tree.nodes[v].length = (v == tree.root) ? kNoBranchLength : value;
  }
}

double empirical_pi1(const BinaryMatrix& matrix) {
  std::size_t ones = 0, states = 0;
  for (const char c : matrix.cells) {
    if (c == '0' || c == '1') {
      ++states;
      if (c == '1') ++ones;
    }
  }
  const double pi1 = states ? static_cast<double>(ones) / states : 0.5;
  return std::clamp(pi1, 0.05, 0.95);
}

}  // namespace

int parsimony_score(const Tree& tree, const BinaryMatrix& matrix) {
  return FitchScorer(matrix).score(tree);
}

Tree starting_tree(StartKind kind, const BinaryMatrix& matrix,
                   std::uint64_t seed) {
  const auto& taxa = matrix.taxa;
  if (taxa.size() < 3) {
    throw std::invalid_argument("starting_tree: need at least 3 taxa");
  }
  Rng rng(seed);

  if (kind == StartKind::kRandom) {
    // stepwise attachment to a uniform random edge is uniform over
    // unrooted topologies
    Tree tree = three_taxon_tree(taxa[0], taxa[1], taxa[2]);
    for (std::size_t i = 3; i < taxa.size(); ++i) {
      const auto points = attachment_points(tree);
      const int v = points[rng.uniform_int(points.size())];
      graft_leaf(tree, v, taxa[i]);
    }
    set_all_lengths(tree, 0.1);
    return tree;
  }

  FitchScorer scorer(matrix);
  std::vector<std::size_t> order(taxa.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);

  Tree tree =
      three_taxon_tree(taxa[order[0]], taxa[order[1]], taxa[order[2]]);
  for (std::size_t i = 3; i < order.size(); ++i) {
    const auto points = attachment_points(tree);
    int best_point = points.front();
    int best_score = std::numeric_limits<int>::max();
    for (const int v : points) {
      Tree candidate = tree;
      graft_leaf(candidate, v, taxa[order[i]]);
      const int s = scorer.score(candidate);
      if (s < best_score) {
        best_score = s;
        best_point = v;
      }
    }
    graft_leaf(tree, best_point, taxa[order[i]]);
  }
  set_all_lengths(tree, 0.1);
  return tree;
}

std::vector<NniMove> nni_moves(const Tree& tree) {
  std::vector<NniMove> moves;
  for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
    if (v == tree.root || tree.is_leaf(v)) continue;
    const int p = tree.nodes[v].parent;
    int outer = -1;
    for (const int c : tree.nodes[p].children) {
      if (c != v) {
        outer = c;
        break;
      }
    }
    if (outer < 0) continue;  // degree-2 parent, no swap partner
    for (const int inner : tree.nodes[v].children) {
      moves.push_back(NniMove{v, inner, outer});
    }
  }
  return moves;
}

Tree apply_nni(const Tree& tree, const NniMove& move) {
  Tree out = tree;
  const int p = out.nodes[move.edge_child].parent;
  auto& pc = out.nodes[p].children;
  auto& vc = out.nodes[move.edge_child].children;
  *std::find(pc.begin(), pc.end(), move.outer) = move.inner;
  *std::find(vc.begin(), vc.end(), move.inner) = move.outer;
  out.nodes[move.inner].parent = p;
  out.nodes[move.outer].parent = move.edge_child;
  return out;
}

namespace {

std::vector<int> nni_affected_nodes(const Tree& tree, const NniMove& move) {
  std::vector<int> nodes;
  const int v = move.edge_child;
  const int p = tree.nodes[v].parent;
  nodes.push_back(v);
  for (const int c : tree.nodes[v].children) nodes.push_back(c);
  for (const int c : tree.nodes[p].children) {
    if (c != v) nodes.push_back(c);
  }
  if (tree.nodes[p].parent >= 0) nodes.push_back(p);
  return nodes;
}

SearchResult run_single_search(const BinaryMatrix& matrix, StartKind kind,
                               std::uint64_t seed, const SearchOptions& opt) {
  const Tree start = starting_tree(kind, matrix, seed);
  const BinaryCTMC init_model(empirical_pi1(matrix));
  const GammaRates init_gamma = opt.gamma_categories > 1
                                    ? discretize_gamma(1.0, opt.gamma_categories)
                                    : GammaRates::homogeneous();

  FitResult fit = fit_parameters(start, matrix, init_model, init_gamma, opt.fit);

  LikelihoodEngine engine(fit.tree, matrix, fit.model, fit.gamma,
                          opt.fit.ascertainment_correction);
  Tree current = fit.tree;
  double current_loglik = fit.log_lik;

  while (true) {
    const auto moves = nni_moves(current);
    double best_loglik = current_loglik;
    Tree best_tree;
    bool improved = false;
    for (const auto& move : moves) {
      Tree candidate = apply_nni(current, move);
      engine.set_tree(candidate);
      const double ll =
          optimize_branch_subset(engine, nni_affected_nodes(candidate, move), opt.fit);
      if (ll > best_loglik + opt.min_improvement) {
        best_loglik = ll;
        best_tree = engine.tree_with_lengths();
        improved = true;
      }
    }
    if (!improved) break;
    current = best_tree;
    engine.set_tree(current);
    const double refit = optimize_rate_parameters(engine, opt.fit);
    current = engine.tree_with_lengths();
    current_loglik = std::max(best_loglik, refit);
  }

  // final polish on the winning topology
  FitResult final_fit =
      fit_parameters(current, matrix, engine.model(), engine.gamma(), opt.fit);
  SearchResult result;
  if (final_fit.log_lik >= current_loglik) {
    result.tree = final_fit.tree;
    result.log_lik = final_fit.log_lik;
    result.model = final_fit.model;
    result.gamma = final_fit.gamma;
  } else {
    result.tree = current;
    result.log_lik = current_loglik;
    result.model = engine.model();
    result.gamma = engine.gamma();
  }
  result.start = kind;
  return result;
}

}  // namespace

MlSearchResult ml_search(const BinaryMatrix& matrix, int n_random,
                         int n_parsimony, std::uint64_t seed,
                         const SearchOptions& opt) {
  if (matrix.n_taxa() < 4) {
    throw std::invalid_argument("ml_search: need at least 4 taxa");
  }
  MlSearchResult out;
  const int total = n_random + n_parsimony;
  for (int i = 0; i < total; ++i) {
    const StartKind kind = i < n_random ? StartKind::kRandom : StartKind::kParsimony;
    const std::uint64_t sub_seed =
        derive_seed(seed, "ml_search/" + std::to_string(i));
    out.searches.push_back(run_single_search(matrix, kind, sub_seed, opt));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.searches.size(); ++i) {
    if (out.searches[i].log_lik > out.searches[best].log_lik) best = i;
  }
  out.best_tree = out.searches[best].tree;
  out.best_log_lik = out.searches[best].log_lik;
  out.best_model = out.searches[best].model;
  out.best_gamma = out.searches[best].gamma;
  return out;
}

}  // namespace cogphy
