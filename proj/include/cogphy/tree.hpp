#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace cogphy {

inline constexpr double kNoBranchLength =
    std::numeric_limits<double>::quiet_NaN();

inline bool has_length(double length) { return !std::isnan(length); }

struct TreeNode {
  int parent = -1;
  std::vector<int> children;
  std::string name;                    // leaf label; may label internals too
  double length = kNoBranchLength;     // branch to parent
};

// Rooted representation; an unrooted tree is stored with a multifurcating
// root. Polytomies are allowed anywhere.
struct Tree {
  std::vector<TreeNode> nodes;
  int root = -1;

  int add_node(int parent) {
    nodes.push_back(TreeNode{parent, {}, "", kNoBranchLength});
    const int id = static_cast<int>(nodes.size()) - 1;
    if (parent >= 0) nodes[parent].children.push_back(id);
    return id;
  }

  bool is_leaf(int v) const { return nodes[v].children.empty(); }
  std::size_t size() const { return nodes.size(); }

  std::vector<int> leaves() const;
  std::vector<std::string> taxa() const;  // leaf names in node-index order
  std::vector<int> postorder() const;

  // degree in the unrooted view
  int unrooted_degree(int v) const {
    return static_cast<int>(nodes[v].children.size()) +
           (nodes[v].parent >= 0 ? 1 : 0);
  }

  int find_leaf(const std::string& name) const;  // -1 when absent
  double total_length() const;
};

// Newick with optional branch lengths; positions are 0-based offsets into
// the input.
Tree parse_newick(std::string_view text);
std::string write_newick(const Tree& tree);

Tree read_newick_file(const std::string& path);

// The subtree induced by the given taxa, with degree-2 nodes suppressed
// (branch lengths added through suppressed nodes).
Tree restrict_to_taxa(const Tree& tree, const std::vector<std::string>& taxa);

// True when every node of the unrooted view has degree 1 or 3.
bool is_binary_unrooted(const Tree& tree);

}  // namespace cogphy
