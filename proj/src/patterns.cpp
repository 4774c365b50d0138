#include "cogphy/patterns.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cogphy {

std::vector<Site> extract_sites(const std::vector<Alignment>& alignments) {
  std::vector<Site> sites;
  for (const auto& aln : alignments) {
    for (std::size_t col = 0; col < aln.width(); ++col) {
      Site site;
      site.gloss = aln.gloss;
      site.cognate_id = aln.cognate_id;
      site.column = col;
      bool any_sound = false;
      for (const auto& [lang, tokens] : aln.rows) {
        site.assignment[lang] = tokens[col];
        if (tokens[col] != kGap) any_sound = true;
      }
      if (!any_sound) continue;  // all-gap column carries nothing
      sites.push_back(std::move(site));
    }
  }
  return sites;
}

bool site_compatible(const Site& site, const Pattern& pattern) {
  for (const auto& [lang, sound] : site.assignment) {
    const auto it = pattern.assignment.find(lang);
    if (it != pattern.assignment.end() && it->second != sound) return false;
  }
  return true;
}

std::vector<Pattern> detect_patterns(const std::vector<Site>& sites) {
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sites[a].assignment.size() > sites[b].assignment.size();
  });

  std::vector<Pattern> patterns;
  std::vector<std::size_t> rank;  // pattern indices, kept sorted for placement
  for (const std::size_t idx : order) {
    const Site& site = sites[idx];
    rank.resize(patterns.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
      if (patterns[a].members.size() != patterns[b].members.size()) {
        return patterns[a].members.size() > patterns[b].members.size();
      }
      return patterns[a].id < patterns[b].id;
    });

    bool placed = false;
    for (const std::size_t p : rank) {
      if (site_compatible(site, patterns[p])) {
        patterns[p].members.push_back(site);
        for (const auto& [lang, sound] : site.assignment) {
          patterns[p].assignment.emplace(lang, sound);
        }
        placed = true;
        break;
      }
    }
    if (!placed) {
      Pattern fresh;
      fresh.id = static_cast<int>(patterns.size());
      fresh.assignment = site.assignment;
      fresh.members.push_back(site);
      patterns.push_back(std::move(fresh));
    }
  }
  return patterns;
}

std::string write_patterns(const std::vector<Pattern>& patterns) {
  std::ostringstream os;
  for (const auto& p : patterns) {
    os << p.id << '\t' << p.members.size() << '\t';
    bool first = true;
    for (const auto& [lang, sound] : p.assignment) {
      if (!first) os << ',';
      first = false;
      os << lang << ':' << sound;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cogphy
