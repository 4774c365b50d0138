#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogphy/wordlist.hpp"

namespace cogphy {

inline const std::string kGap = "-";

// Coarse sound class of a symbol: vowels collapse to V, consonants to
// manner/place groups, everything unknown maps to itself.
std::string default_sound_class(const std::string& symbol);

struct ScoringScheme {
  double match = 1.0;
  double mismatch = -1.0;
  double gap = -1.0;  // linear per-gap penalty, < 0
  // Overrides checked before the bundled table; empty means default only.
  std::map<std::string, std::string> class_map;

  std::string sound_class(const std::string& symbol) const;
  double score(const std::string& a, const std::string& b) const;
};

// One aligned cognate set. Rows keep the language order of the input forms;
// stripping gaps from a row recovers the original token sequence.
struct Alignment {
  std::string gloss;
  std::string cognate_id;
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;

  std::size_t width() const { return rows.empty() ? 0 : rows.front().second.size(); }
  double column_gap_fraction(std::size_t col) const;
};

struct PairwiseAlignment {
  std::vector<std::string> a;
  std::vector<std::string> b;
  double score = 0.0;
};

// Global alignment with linear gap penalties. Traceback ties prefer
// diagonal, then up (gap in b), then left (gap in a).
PairwiseAlignment pairwise_align(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b,
                                 const ScoringScheme& scheme);

// Progressive multiple alignment: average-linkage guide order over pairwise
// alignment distances, profile-profile merging. If a language contributes
// several forms only the first is kept.
Alignment progressive_msa(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& forms,
    const ScoringScheme& scheme, std::string gloss = "",
    std::string cognate_id = "");

// Removes columns whose gap fraction exceeds tau. If every column would go,
// the single column with the lowest gap fraction is kept (ties: leftmost).
Alignment trim_alignment(const Alignment& alignment, double tau);

// Aligns every cognate set of the wordlist; sets ordered by gloss
// first-appearance, then cognate id.
std::vector<Alignment> align_wordlist(const Wordlist& wl,
                                      const ScoringScheme& scheme);

// Dump format: per set a "# gloss<TAB>cognate_id" header, then
// "language<TAB>tokens-with-gaps" rows, blank line between blocks.
std::string write_alignments(const std::vector<Alignment>& alignments);
std::vector<Alignment> read_alignments(std::string_view text);

}  // namespace cogphy
