#include "cogphy/tree_compare.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace cogphy {

namespace {

// entry/exit timestamps plus binary lifting: O(1) ancestor tests and
// O(log n) LCA, cheap enough to rebuild per tree
struct LcaIndex {
  std::vector<int> tin, tout;
  std::vector<std::array<int, 16>> up;

  explicit LcaIndex(const Tree& tree)
      : tin(tree.size()), tout(tree.size()), up(tree.size()) {
    int timer = 0;
    std::vector<std::pair<int, bool>> stack{{tree.root, false}};
    while (!stack.empty()) {
      auto [v, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        tout[v] = timer++;
        continue;
      }
      tin[v] = timer++;
      stack.emplace_back(v, true);
      const int p = tree.nodes[v].parent;
      up[v][0] = p >= 0 ? p : v;
      for (int j = 1; j < 16; ++j) up[v][j] = up[up[v][j - 1]][j - 1];
      for (const int c : tree.nodes[v].children) stack.emplace_back(c, false);
    }
  }

  bool is_ancestor(int u, int v) const {
    return tin[u] <= tin[v] && tout[v] <= tout[u];
  }

  int lca(int u, int v) const {
    if (is_ancestor(u, v)) return u;
    if (is_ancestor(v, u)) return v;
    for (int j = 15; j >= 0; --j) {
      if (!is_ancestor(up[u][j], v)) u = up[u][j];
    }
    return up[u][0];
  }
};

// xy|zw holds when one cherry's join point has the other pair entirely
// outside its subtree; with the OR over both sides this is independent of
// where the tree is rooted.
bool pairing_resolved(const LcaIndex& idx, int x, int y, int z, int w) {
  const int u = idx.lca(x, y);
  if (!idx.is_ancestor(u, z) && !idx.is_ancestor(u, w)) return true;
  const int v = idx.lca(z, w);
  return !idx.is_ancestor(v, x) && !idx.is_ancestor(v, y);
}

QuartetTopology classify_quartet(const LcaIndex& idx, int a, int b, int c,
                                 int d) {
  if (pairing_resolved(idx, a, b, c, d)) return QuartetTopology::kAB_CD;
  if (pairing_resolved(idx, a, c, b, d)) return QuartetTopology::kAC_BD;
  if (pairing_resolved(idx, a, d, b, c)) return QuartetTopology::kAD_BC;
  return QuartetTopology::kStar;
}

std::map<std::string, int> leaf_index(const Tree& tree) {
  std::map<std::string, int> out;
  for (const int v : tree.leaves()) out[tree.nodes[v].name] = v;
  return out;
}

}  // namespace

std::set<Split> tree_splits(const Tree& tree) {
  const auto taxa = tree.taxa();
  if (taxa.size() < 4) {
    throw std::invalid_argument("tree_splits: need at least 4 taxa");
  }
  const std::string ref = *std::min_element(taxa.begin(), taxa.end());
  const std::set<std::string> all(taxa.begin(), taxa.end());

  std::vector<std::set<std::string>> below(tree.size());
  std::set<Split> splits;
  for (const int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      below[v] = {tree.nodes[v].name};
    } else {
      for (const int c : tree.nodes[v].children) {
        below[v].insert(below[c].begin(), below[c].end());
      }
    }
    if (v == tree.root) continue;
    if (below[v].size() < 2 || all.size() - below[v].size() < 2) continue;
    if (below[v].count(ref)) {
      Split other;
      for (const auto& t : all) {
        if (!below[v].count(t)) other.push_back(t);
      }
      splits.insert(std::move(other));
    } else {
      splits.insert(Split(below[v].begin(), below[v].end()));
    }
  }
  return splits;
}

double asdsf(const std::vector<std::vector<Tree>>& run_samples, double min_freq) {
  if (run_samples.size() < 2) {
    throw std::invalid_argument("asdsf: need at least 2 runs");
  }
  for (const auto& run : run_samples) {
    if (run.empty()) throw std::invalid_argument("asdsf: empty run");
  }

  const std::size_t n_runs = run_samples.size();
  std::map<Split, std::vector<double>> freq;
  for (std::size_t r = 0; r < n_runs; ++r) {
    for (const auto& tree : run_samples[r]) {
      for (auto& split : tree_splits(tree)) {
        auto& counts = freq.try_emplace(split, n_runs, 0.0).first->second;
        counts[r] += 1.0;
      }
    }
  }
  for (auto& [split, counts] : freq) {
    for (std::size_t r = 0; r < n_runs; ++r) {
      counts[r] /= static_cast<double>(run_samples[r].size());
    }
  }

  double total_sd = 0.0;
  std::size_t qualifying = 0;
  for (const auto& [split, counts] : freq) {
    if (*std::max_element(counts.begin(), counts.end()) < min_freq) continue;
    double mean = 0.0;
    for (const double f : counts) mean += f;
    mean /= static_cast<double>(n_runs);
    double ss = 0.0;
    for (const double f : counts) ss += (f - mean) * (f - mean);
    total_sd += std::sqrt(ss / static_cast<double>(n_runs - 1));
    ++qualifying;
  }
  return qualifying ? total_sd / static_cast<double>(qualifying) : 0.0;
}

QuartetTopology quartet_topology(const Tree& tree, const std::string& a,
                                 const std::string& b, const std::string& c,
                                 const std::string& d) {
  const auto index = leaf_index(tree);
  std::array<int, 4> ids{};
  const std::array<const std::string*, 4> names{&a, &b, &c, &d};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto it = index.find(*names[i]);
    if (it == index.end()) {
      throw std::invalid_argument("quartet_topology: taxon '" + *names[i] +
                                  "' not in tree");
    }
    ids[i] = it->second;
  }
  const LcaIndex idx(tree);
  return classify_quartet(idx, ids[0], ids[1], ids[2], ids[3]);
}

GqdResult gqd(const Tree& inferred, const Tree& gold) {
  const auto inf_taxa = inferred.taxa();
  const auto gold_taxa = gold.taxa();
  const std::set<std::string> gold_set(gold_taxa.begin(), gold_taxa.end());
  std::vector<std::string> common;
  for (const auto& t : inf_taxa) {
    if (gold_set.count(t)) common.push_back(t);
  }
  std::sort(common.begin(), common.end());
  if (common.size() < 4) {
    throw std::invalid_argument("gqd: fewer than 4 shared taxa");
  }

  const Tree inf_restricted = restrict_to_taxa(inferred, common);
  if (!is_binary_unrooted(inf_restricted)) {
    throw std::invalid_argument("gqd: inferred tree not binary on shared taxa");
  }
  const Tree gold_restricted = restrict_to_taxa(gold, common);

  const LcaIndex inf_idx(inf_restricted);
  const LcaIndex gold_idx(gold_restricted);
  const auto inf_leaves = leaf_index(inf_restricted);
  const auto gold_leaves = leaf_index(gold_restricted);

  const std::size_t n = common.size();
  std::vector<int> inf_id(n), gold_id(n);
  for (std::size_t i = 0; i < n; ++i) {
    inf_id[i] = inf_leaves.at(common[i]);
    gold_id[i] = gold_leaves.at(common[i]);
  }

  GqdResult result;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          const QuartetTopology tg = classify_quartet(gold_idx, gold_id[a],
                                                      gold_id[b], gold_id[c],
                                                      gold_id[d]);
          if (tg == QuartetTopology::kStar) continue;
          ++result.butterflies_gold;
          const QuartetTopology ti = classify_quartet(inf_idx, inf_id[a],
                                                      inf_id[b], inf_id[c],
                                                      inf_id[d]);
          if (ti != tg) ++result.discordant;
        }
      }
    }
  }
  if (result.butterflies_gold == 0) {
    throw std::runtime_error("gqd: gold tree resolves no quartet");
  }
  result.distance = static_cast<double>(result.discordant) /
                    static_cast<double>(result.butterflies_gold);
  return result;
}

double posterior_gqd_median(const std::vector<Tree>& samples, const Tree& gold) {
  if (samples.empty()) {
    throw std::invalid_argument("posterior_gqd_median: no samples");
  }
  std::vector<double> distances;
  distances.reserve(samples.size());
  for (const auto& tree : samples) {
    distances.push_back(gqd(tree, gold).distance);
  }
  std::sort(distances.begin(), distances.end());
  const std::size_t n = distances.size();
  if (n % 2 == 1) return distances[n / 2];
  return 0.5 * (distances[n / 2 - 1] + distances[n / 2]);
}

std::set<Split> frequent_splits(const std::vector<Tree>& samples,
                                double threshold) {
  std::map<Split, std::size_t> counts;
  for (const auto& tree : samples) {
    for (auto& split : tree_splits(tree)) ++counts[split];
  }
  std::set<Split> out;
  for (const auto& [split, count] : counts) {
    if (static_cast<double>(count) >
        threshold * static_cast<double>(samples.size())) {
      out.insert(split);
    }
  }
  return out;
}

}  // namespace cogphy
