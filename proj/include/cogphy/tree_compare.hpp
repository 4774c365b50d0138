#pragma once

#include <set>
#include <string>
#include <vector>

#include "cogphy/tree.hpp"

namespace cogphy {

// Canonical non-trivial bipartition: the sorted side that does not contain
// the lexicographically smallest taxon.
using Split = std::vector<std::string>;

// One split per internal edge of the unrooted view; requires >= 4 taxa.
std::set<Split> tree_splits(const Tree& tree);

// Average standard deviation of split frequencies across independent runs,
// over splits reaching min_freq in at least one run; sd uses divisor
// (runs - 1). Zero when no split qualifies.
double asdsf(const std::vector<std::vector<Tree>>& run_samples,
             double min_freq = 0.1);

enum class QuartetTopology { kAB_CD, kAC_BD, kAD_BC, kStar };

// Induced topology on four named leaves after suppressing degree-2 nodes.
QuartetTopology quartet_topology(const Tree& tree, const std::string& a,
                                 const std::string& b, const std::string& c,
                                 const std::string& d);

struct GqdResult {
  double distance = 0.0;
  std::size_t butterflies_gold = 0;  // gold-resolved quartets
  std::size_t discordant = 0;        // resolved differently in the inferred tree
};

// Generalized quartet distance on the taxon intersection: the fraction of
// gold-resolved quartets the (binary) inferred tree resolves differently.
GqdResult gqd(const Tree& inferred, const Tree& gold);

// Median (midpoint for even counts) of gqd over posterior samples.
double posterior_gqd_median(const std::vector<Tree>& samples, const Tree& gold);

// Splits appearing in more than `threshold` of the samples.
std::set<Split> frequent_splits(const std::vector<Tree>& samples,
                                double threshold);

}  // namespace cogphy
