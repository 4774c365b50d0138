#pragma once

#include <map>
#include <string>
#include <vector>

#include "cogphy/alignment.hpp"

namespace cogphy {

// One alignment column viewed as a partial language -> sound map. The gap
// symbol is a legal sound value; absent languages are simply not in the map.
struct Site {
  std::string gloss;
  std::string cognate_id;
  std::size_t column = 0;
  std::map<std::string, std::string> assignment;
};

// A sound-correspondence pattern: the union assignment of its member sites,
// which are pairwise compatible.
struct Pattern {
  int id = 0;
  std::map<std::string, std::string> assignment;
  std::vector<Site> members;
};

// One site per column per alignment, in alignment order then column order.
// Columns where every present language shows a gap are skipped.
std::vector<Site> extract_sites(const std::vector<Alignment>& alignments);

// True iff the sounds agree on every language present in both assignments.
bool site_compatible(const Site& site, const Pattern& pattern);

// Greedy clustering: sites processed by descending assignment size (stable
// in extraction order), placed into the first compatible pattern when
// patterns are ranked by descending member count then id.
std::vector<Pattern> detect_patterns(const std::vector<Site>& sites);

// One line per pattern: id<TAB>size<TAB>language:sound pairs comma-separated.
std::string write_patterns(const std::vector<Pattern>& patterns);

}  // namespace cogphy
