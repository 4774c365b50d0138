#include <doctest.h>

#include <algorithm>

#include "cogphy/tree.hpp"
#include "cogphy/wordlist.hpp"  // ParseError

using namespace cogphy;

TEST_CASE("parse_newick reads a rooted three-leaf tree") {
  const Tree t = parse_newick("((A:1,B:1):1,C:2);");
  CHECK(t.leaves().size() == 3);
  CHECK(t.nodes[t.root].children.size() == 2);
  auto taxa = t.taxa();
  std::sort(taxa.begin(), taxa.end());
  CHECK(taxa == std::vector<std::string>{"A", "B", "C"});
  CHECK(write_newick(t) == "((A:1,B:1):1,C:2);");
}

TEST_CASE("parse then write is the identity on structure") {
  const char* inputs[] = {
      "((A:0.5,B:0.25):0.125,C:2,(D:1,E:1):0.1);",
      "(A,B,(C,D));",
      "('a tricky name':1,B:2);",
  };
  for (const char* s : inputs) {
    const Tree t = parse_newick(s);
    const Tree u = parse_newick(write_newick(t));
    CHECK(write_newick(u) == write_newick(t));
    CHECK(u.size() == t.size());
  }
}

TEST_CASE("polytomies are preserved") {
  const Tree t = parse_newick("(A,B,C,D);");
  CHECK(t.nodes[t.root].children.size() == 4);
  CHECK(t.leaves().size() == 4);
}

TEST_CASE("parse_newick reports malformed input with a position") {
  CHECK_THROWS_AS(parse_newick("((A,B)"), ParseError);
  CHECK_THROWS_AS(parse_newick("(A,B));"), ParseError);
  CHECK_THROWS_AS(parse_newick("(A,B)"), ParseError);
  CHECK_THROWS_WITH_AS(parse_newick("(A,B,A);"), doctest::Contains("duplicate"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_newick("(A:-1,B:1);"), doctest::Contains("negative"),
                       ParseError);
}

TEST_CASE("branch lengths are optional") {
  const Tree t = parse_newick("((A,B),C);");
  for (const auto& n : t.nodes) CHECK_FALSE(has_length(n.length));
  CHECK(write_newick(t) == "((A,B),C);");
}

TEST_CASE("lengths survive the round trip exactly") {
  const Tree t = parse_newick("((A:0.1,B:0.30000000000000004):1e-05,C:2);");
  const Tree u = parse_newick(write_newick(t));
  const int a = t.find_leaf("A");
  const int a2 = u.find_leaf("A");
  CHECK(t.nodes[a].length == u.nodes[a2].length);
  const int b = t.find_leaf("B");
  CHECK(u.nodes[u.find_leaf("B")].length == t.nodes[b].length);
}

TEST_CASE("restrict_to_taxa prunes and suppresses") {
  const Tree t = parse_newick("(((A:1,C:2):3,B:4):5,(D:6,E:7):8);");
  const Tree r = restrict_to_taxa(t, {"A", "B", "D", "E"});
  auto taxa = r.taxa();
  std::sort(taxa.begin(), taxa.end());
  CHECK(taxa == std::vector<std::string>{"A", "B", "D", "E"});
  // the (A,C) node had one kept child: A's branch grows from 1 to 1+3
  CHECK(r.nodes[r.find_leaf("A")].length == doctest::Approx(4.0));
  CHECK(is_binary_unrooted(r));
}

TEST_CASE("restrict_to_taxa hoists a single kept root child") {
  const Tree t = parse_newick("((A:1,B:2):3,C:4);");
  const Tree r = restrict_to_taxa(t, {"A", "B"});
  CHECK(r.leaves().size() == 2);
  CHECK(r.nodes[r.root].children.size() == 2);
  CHECK_FALSE(has_length(r.nodes[r.root].length));
}

TEST_CASE("is_binary_unrooted flags polytomies") {
  CHECK(is_binary_unrooted(parse_newick("((A,B),(C,D));")));
  CHECK(is_binary_unrooted(parse_newick("(A,B,(C,D));")));
  CHECK_FALSE(is_binary_unrooted(parse_newick("(A,B,C,D);")));
  CHECK_FALSE(is_binary_unrooted(parse_newick("((A,B,C),(D,E));")));
}

TEST_CASE("postorder visits children before parents") {
  const Tree t = parse_newick("((A,B),(C,D));");
  const auto order = t.postorder();
  std::vector<int> position(t.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);
  for (int v = 0; v < static_cast<int>(t.size()); ++v) {
    for (const int c : t.nodes[v].children) {
      CHECK(position[c] < position[v]);
    }
  }
  CHECK(order.size() == t.size());
}
