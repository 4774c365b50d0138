#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "cogphy/alignment.hpp"
#include "cogphy/rng.hpp"

namespace cogphy::oracles {

double enumeration_log_likelihood(const Tree& tree, const BinaryMatrix& matrix,
                                  const BinaryCTMC& model,
                                  const GammaRates& gamma) {
  std::map<std::string, std::size_t> taxon_row;
  for (std::size_t i = 0; i < matrix.n_taxa(); ++i) taxon_row[matrix.taxa[i]] = i;

  const int n = static_cast<int>(tree.size());
  std::vector<int> free_nodes;  // unknown state: internals and missing leaves
  for (int v = 0; v < n; ++v) {
    if (!tree.is_leaf(v) || !taxon_row.count(tree.nodes[v].name)) {
      free_nodes.push_back(v);
    }
  }

  double total = 0.0;
  for (std::size_t j = 0; j < matrix.n_chars(); ++j) {
    double char_lik = 0.0;
    for (std::size_t g = 0; g < gamma.rates.size(); ++g) {
      // per-branch transition matrices for this category
      std::vector<Eigen::Matrix2d> p(n, Eigen::Matrix2d::Identity());
      for (int v = 0; v < n; ++v) {
        if (v == tree.root) continue;
        p[v] = transition_matrix(model, tree.nodes[v].length, gamma.rates[g]);
      }
      std::vector<int> state(n, 0);
      std::vector<int> enumerated = free_nodes;
      // '?' cells marginalize like missing leaves
      std::vector<int> fixed_leaves;
      for (int v = 0; v < n; ++v) {
        if (!tree.is_leaf(v)) continue;
        const auto it = taxon_row.find(tree.nodes[v].name);
        if (it == taxon_row.end()) continue;
        const char cell = matrix.cell(it->second, j);
        if (cell == '?') {
          enumerated.push_back(v);
        } else {
          state[v] = cell == '1' ? 1 : 0;
          fixed_leaves.push_back(v);
        }
      }
      double cat_lik = 0.0;
      const std::size_t combos = 1ull << enumerated.size();
      for (std::size_t mask = 0; mask < combos; ++mask) {
        for (std::size_t b = 0; b < enumerated.size(); ++b) {
          state[enumerated[b]] = (mask >> b) & 1;
        }
        double term = state[tree.root] ? model.pi1 : model.pi0;
        for (int v = 0; v < n && term > 0.0; ++v) {
          if (v == tree.root) continue;
          term *= p[v](state[tree.nodes[v].parent], state[v]);
        }
        cat_lik += term;
      }
      char_lik += gamma.weights[g] * cat_lik;
    }
    total += std::log(std::max(char_lik, 1e-300));
  }
  return total;
}

Eigen::Matrix2d expm_transition(const BinaryCTMC& model, double t, double r) {
  Eigen::Matrix2d q;
  q << -model.pi1, model.pi1, model.pi0, -model.pi0;
  q *= model.mu() * r * t;
  return q.exp();
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fb, double fm, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, fm, flm, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(b), f(m), tol, 40);
}

}  // namespace

std::vector<double> quadrature_gamma_rates(double alpha, int k) {
  // Gamma(alpha, rate alpha), mean 1. For alpha < 1 the pdf blows up at 0,
  // so integrate in u = x^alpha there; otherwise integrate in x directly.
  const double beta = alpha;
  const double log_const = alpha * std::log(beta) - std::lgamma(alpha);
  const bool substitute = alpha < 1.0;

  const auto cdf_integrand = [&](double u) {
    if (substitute) {
      const double x = std::pow(u, 1.0 / alpha);
      return std::exp(log_const - std::log(alpha) - beta * x);
    }
    if (u <= 0.0) return 0.0;
    return std::exp(log_const + (alpha - 1.0) * std::log(u) - beta * u);
  };
  const auto mean_integrand = [&](double u) {
    if (substitute) {
      const double x = std::pow(u, 1.0 / alpha);
      return x * std::exp(log_const - std::log(alpha) - beta * x);
    }
    if (u <= 0.0) return 0.0;
    return u * std::exp(log_const + (alpha - 1.0) * std::log(u) - beta * u);
  };
  const auto to_integration_var = [&](double x) {
    return substitute ? std::pow(x, alpha) : x;
  };
  const auto cdf = [&](double x) {
    return integrate(cdf_integrand, 0.0, to_integration_var(x));
  };

  // quantiles by bisection
  std::vector<double> bounds(k + 1, 0.0);
  for (int i = 1; i < k; ++i) {
    const double target = static_cast<double>(i) / k;
    double lo = 0.0, hi = 1.0;
    while (cdf(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < target ? lo : hi) = mid;
    }
    bounds[i] = 0.5 * (lo + hi);
  }

  std::vector<double> rates(k);
  double partial_mass = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    const double mass =
        integrate(mean_integrand, to_integration_var(bounds[i]),
                  to_integration_var(bounds[i + 1]));
    rates[i] = mass * k;
    partial_mass += mass;
  }
  rates[k - 1] = (1.0 - partial_mass) * k;  // total mean is exactly 1

  double mean = 0.0;
  for (const double r : rates) mean += r;
  mean /= k;
  for (double& r : rates) r /= mean;
  return rates;
}

namespace {

// leaf sets below every edge, as taxon-name sets
std::vector<std::set<std::string>> edge_sides(const Tree& tree) {
  std::vector<std::set<std::string>> below(tree.size());
  std::vector<std::set<std::string>> sides;
  for (const int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      below[v] = {tree.nodes[v].name};
    } else {
      for (const int c : tree.nodes[v].children) {
        below[v].insert(below[c].begin(), below[c].end());
      }
    }
    if (v != tree.root) sides.push_back(below[v]);
  }
  return sides;
}

QuartetTopology classify_by_sides(const std::vector<std::set<std::string>>& sides,
                                  const std::string& a, const std::string& b,
                                  const std::string& c, const std::string& d) {
  for (const auto& side : sides) {
    const bool ia = side.count(a), ib = side.count(b), ic = side.count(c),
               id = side.count(d);
    const int inside = ia + ib + ic + id;
    if (inside != 2) continue;
    if (ia && ib) return QuartetTopology::kAB_CD;
    if (ic && id) return QuartetTopology::kAB_CD;
    if (ia && ic) return QuartetTopology::kAC_BD;
    if (ib && id) return QuartetTopology::kAC_BD;
    if (ia && id) return QuartetTopology::kAD_BC;
    if (ib && ic) return QuartetTopology::kAD_BC;
  }
  return QuartetTopology::kStar;
}

}  // namespace

QuartetTopology split_quartet_topology(const Tree& tree, const std::string& a,
                                       const std::string& b,
                                       const std::string& c,
                                       const std::string& d) {
  return classify_by_sides(edge_sides(tree), a, b, c, d);
}

GqdResult split_gqd(const Tree& inferred, const Tree& gold) {
  const auto inf_taxa = inferred.taxa();
  const auto gold_taxa = gold.taxa();
  const std::set<std::string> gold_set(gold_taxa.begin(), gold_taxa.end());
  std::vector<std::string> common;
  for (const auto& t : inf_taxa) {
    if (gold_set.count(t)) common.push_back(t);
  }
  std::sort(common.begin(), common.end());
  if (common.size() < 4) throw std::invalid_argument("split_gqd: <4 shared taxa");

  const auto inf_sides = edge_sides(inferred);
  const auto gold_sides = edge_sides(gold);
  GqdResult result;
  const std::size_t n = common.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          const auto tg = classify_by_sides(gold_sides, common[a], common[b],
                                            common[c], common[d]);
          if (tg == QuartetTopology::kStar) continue;
          ++result.butterflies_gold;
          const auto ti = classify_by_sides(inf_sides, common[a], common[b],
                                            common[c], common[d]);
          if (ti != tg) ++result.discordant;
        }
      }
    }
  }
  if (result.butterflies_gold == 0) {
    throw std::runtime_error("split_gqd: gold resolves nothing");
  }
  result.distance = static_cast<double>(result.discordant) /
                    static_cast<double>(result.butterflies_gold);
  return result;
}

namespace {

bool sites_pairwise_compatible(const Site& a, const Site& b) {
  for (const auto& [lang, sound] : a.assignment) {
    const auto it = b.assignment.find(lang);
    if (it != b.assignment.end() && it->second != sound) return false;
  }
  return true;
}

void cover_search(const std::vector<Site>& sites, std::size_t next,
                  std::vector<std::vector<std::size_t>>& blocks,
                  std::size_t& best) {
  if (blocks.size() >= best) return;  // prune
  if (next == sites.size()) {
    best = blocks.size();
    return;
  }
  // index loop: recursion appends/removes blocks, invalidating references
  const std::size_t n_blocks = blocks.size();
  for (std::size_t bi = 0; bi < n_blocks; ++bi) {
    const bool ok =
        std::all_of(blocks[bi].begin(), blocks[bi].end(), [&](std::size_t i) {
          return sites_pairwise_compatible(sites[i], sites[next]);
        });
    if (ok) {
      blocks[bi].push_back(next);
      cover_search(sites, next + 1, blocks, best);
      blocks[bi].pop_back();
    }
  }
  blocks.push_back({next});
  cover_search(sites, next + 1, blocks, best);
  blocks.pop_back();
}

}  // namespace

std::size_t min_compatible_cover(const std::vector<Site>& sites) {
  if (sites.empty()) return 0;
  std::size_t best = sites.size();
  std::vector<std::vector<std::size_t>> blocks;
  cover_search(sites, 0, blocks, best);
  return best;
}

namespace {

double enumerate_alignment(const std::vector<std::string>& a,
                           const std::vector<std::string>& b, std::size_t i,
                           std::size_t j, const ScoringScheme& scheme) {
  if (i == a.size() && j == b.size()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  if (i < a.size() && j < b.size()) {
    best = std::max(best, scheme.score(a[i], b[j]) +
                              enumerate_alignment(a, b, i + 1, j + 1, scheme));
  }
  if (i < a.size()) {
    best = std::max(best,
                    scheme.gap + enumerate_alignment(a, b, i + 1, j, scheme));
  }
  if (j < b.size()) {
    best = std::max(best,
                    scheme.gap + enumerate_alignment(a, b, i, j + 1, scheme));
  }
  return best;
}

}  // namespace

double enumerate_alignment_score(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b,
                                 const ScoringScheme& scheme) {
  return enumerate_alignment(a, b, 0, 0, scheme);
}

double ks_test_pvalue(std::vector<double> samples,
                      const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    p += 2.0 * (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
  }
  return std::clamp(p, 0.0, 1.0);
}

Tree random_binary_tree(const std::vector<std::string>& taxa,
                        std::uint64_t seed, double min_length,
                        double max_length) {
  if (taxa.size() < 3) throw std::invalid_argument("random_binary_tree: <3 taxa");
  Rng rng(seed);
  Tree tree;
  tree.root = tree.add_node(-1);
  for (int i = 0; i < 3; ++i) {
    const int leaf = tree.add_node(tree.root);
    tree.nodes[leaf].name = taxa[static_cast<std::size_t>(i)];
  }
  for (std::size_t i = 3; i < taxa.size(); ++i) {
    std::vector<int> points;
    for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
      if (v != tree.root) points.push_back(v);
    }
    const int v = points[rng.uniform_int(points.size())];
    const int p = tree.nodes[v].parent;
    const int u = tree.add_node(-1);
    auto& slot = tree.nodes[p].children;
    *std::find(slot.begin(), slot.end(), v) = u;
    tree.nodes[u].parent = p;
    tree.nodes[u].children.push_back(v);
    tree.nodes[v].parent = u;
    const int leaf = tree.add_node(u);
    tree.nodes[leaf].name = taxa[i];
  }
  for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
    if (v != tree.root) {
      tree.nodes[v].length = rng.uniform(min_length, max_length);
    }
  }
  return tree;
}

bool same_unrooted_topology(const Tree& a, const Tree& b) {
  auto ta = a.taxa(), tb = b.taxa();
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  if (ta != tb) return false;
  return tree_splits(a) == tree_splits(b);
}

}  // namespace cogphy::oracles
