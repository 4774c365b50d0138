#include "cogphy/tree.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cogphy/wordlist.hpp"  // ParseError

namespace cogphy {

std::vector<int> Tree::leaves() const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    if (is_leaf(v)) out.push_back(v);
  }
  return out;
}

std::vector<std::string> Tree::taxa() const {
  std::vector<std::string> out;
  for (const int v : leaves()) out.push_back(nodes[v].name);
  return out;
}

std::vector<int> Tree::postorder() const {
  std::vector<int> order;
  order.reserve(nodes.size());
  std::vector<std::pair<int, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(v);
      continue;
    }
    stack.emplace_back(v, true);
    const auto& ch = nodes[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      stack.emplace_back(*it, false);
    }
  }
  return order;
}

int Tree::find_leaf(const std::string& name) const {
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    if (is_leaf(v) && nodes[v].name == name) return v;
  }
  return -1;
}

double Tree::total_length() const {
  double total = 0.0;
  for (const auto& n : nodes) {
    if (has_length(n.length)) total += n.length;
  }
  return total;
}

namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  Tree parse() {
    Tree tree;
    skip_space();
    tree.root = parse_subtree(tree, -1);
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ';') {
      fail("expected ';'");
    }
    ++pos_;
    skip_space();
    if (pos_ < text_.size()) fail("trailing characters after ';'");

    std::set<std::string> seen;
    for (const auto& n : tree.nodes) {
      if (n.children.empty()) {
        if (n.name.empty()) fail("unnamed leaf");
        if (!seen.insert(n.name).second) {
          throw ParseError("newick: duplicate leaf label '" + n.name + "'");
        }
      }
    }
    return tree;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("newick: " + message + " at position " +
                     std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  int parse_subtree(Tree& tree, int parent) {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const int node = tree.add_node(parent);
    if (text_[pos_] == '(') {
      ++pos_;
      while (true) {
        parse_subtree(tree, node);
        skip_space();
        if (pos_ >= text_.size()) fail("unbalanced parentheses");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    tree.nodes[node].name = parse_label();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      tree.nodes[node].length = parse_number();
      if (tree.nodes[node].length < 0.0) {
        fail("negative branch length");
      }
    }
    return node;
  }

  std::string parse_label() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      ++pos_;
      std::string out;
      while (pos_ < text_.size()) {
        if (text_[pos_] == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          return out;
        }
        out += text_[pos_++];
      }
      fail("unterminated quoted label");
    }
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      out += c;
      ++pos_;
    }
    return out;
  }

  double parse_number() {
    skip_space();
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{}) fail("expected a number");
    pos_ = static_cast<std::size_t>(result.ptr - text_.data());
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_length(double x) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

bool label_needs_quotes(const std::string& name) {
  return name.find_first_of("():,; \t'") != std::string::npos;
}

void write_subtree(const Tree& tree, int v, std::string& out) {
  const TreeNode& node = tree.nodes[v];
  if (!node.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) out += ',';
      write_subtree(tree, node.children[i], out);
    }
    out += ')';
  }
  if (!node.name.empty()) {
    if (label_needs_quotes(node.name)) {
      out += '\'';
      for (const char c : node.name) {
        out += c;
        if (c == '\'') out += '\'';
      }
      out += '\'';
    } else {
      out += node.name;
    }
  }
  if (has_length(node.length)) {
    out += ':';
    out += format_length(node.length);
  }
}

}  // namespace

Tree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::string write_newick(const Tree& tree) {
  if (tree.root < 0) throw std::invalid_argument("write_newick: empty tree");
  std::string out;
  write_subtree(tree, tree.root, out);
  out += ';';
  return out;
}

Tree read_newick_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open tree file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  return parse_newick(content);
}

Tree restrict_to_taxa(const Tree& tree, const std::vector<std::string>& taxa) {
  const std::set<std::string> wanted(taxa.begin(), taxa.end());

  // keep[v]: v has a wanted leaf below (or is one)
  std::vector<char> keep(tree.size(), 0);
  for (const int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      keep[v] = wanted.count(tree.nodes[v].name) ? 1 : 0;
    } else {
      for (const int c : tree.nodes[v].children) {
        if (keep[c]) keep[v] = 1;
      }
    }
  }
  if (!keep[tree.root]) {
    throw std::invalid_argument("restrict_to_taxa: no requested taxon present");
  }

  Tree out;
  // recursively copy, suppressing nodes that keep a single child
  struct Copier {
    const Tree& src;
    const std::vector<char>& keep;
    Tree& dst;

    // returns node id in dst; carried accumulates branch length through
    // suppressed degree-2 nodes
    int copy(int v, int dst_parent, double carried) {
      std::vector<int> kept_children;
      for (const int c : src.nodes[v].children) {
        if (keep[c]) kept_children.push_back(c);
      }
      if (kept_children.size() == 1) {
        if (dst_parent < 0) {
          // the restricted root is below; its branch disappears
          return copy(kept_children.front(), -1, 0.0);
        }
        const double len =
            has_length(src.nodes[v].length) ? src.nodes[v].length : 0.0;
        return copy(kept_children.front(), dst_parent, carried + len);
      }
      const int id = dst.add_node(dst_parent);
      dst.nodes[id].name = src.nodes[v].name;
      if (dst_parent >= 0 && (has_length(src.nodes[v].length) || carried > 0.0)) {
        const double len =
            has_length(src.nodes[v].length) ? src.nodes[v].length : 0.0;
        dst.nodes[id].length = len + carried;
      }
      for (const int c : kept_children) copy(c, id, 0.0);
      return id;
    }
  } copier{tree, keep, out};

  out.root = copier.copy(tree.root, -1, 0.0);
  return out;
}

bool is_binary_unrooted(const Tree& tree) {
  for (int v = 0; v < static_cast<int>(tree.size()); ++v) {
    const int deg = tree.unrooted_degree(v);
    if (v == tree.root) {
      // degree-2 roots are suppressed in the unrooted view
      if (deg != 2 && deg != 3) return false;
    } else if (deg != 1 && deg != 3) {
      return false;
    }
  }
  return true;
}

}  // namespace cogphy
