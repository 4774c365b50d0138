#pragma once

#include <string>
#include <vector>

#include "cogphy/patterns.hpp"
#include "cogphy/wordlist.hpp"

namespace cogphy {

enum class Provenance { kCognate, kPattern, kCombined };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

// taxa x characters over {'0','1','?'}.
struct BinaryMatrix {
  std::vector<std::string> taxa;
  std::vector<std::string> characters;
  std::vector<Provenance> provenance;  // one entry per character
  std::vector<char> cells;             // row-major, taxa x characters

  std::size_t n_taxa() const { return taxa.size(); }
  std::size_t n_chars() const { return characters.size(); }
  char cell(std::size_t taxon, std::size_t character) const {
    return cells[taxon * characters.size() + character];
  }
  char& cell(std::size_t taxon, std::size_t character) {
    return cells[taxon * characters.size() + character];
  }
  // checks cell symbols, unique taxa, and that no character is all-'?'
  void validate() const;
};

// One character per (gloss, cognate id): 1 when the taxon has a form in
// the set, 0 when it attests the gloss elsewhere, '?' when the gloss is
// missing for the taxon. Characters ordered by gloss, then cognate id.
BinaryMatrix encode_cognates(const Wordlist& wl);

// One character per pattern: 1 when the language is in the assignment, 0
// when it attests at least one of the member sites' concepts, '?' otherwise.
BinaryMatrix encode_patterns(const std::vector<Pattern>& patterns,
                             const Wordlist& wl);

// Taxa become the union (a's order, then b-only); characters a's then b's;
// cells for a taxon absent from one source are '?'.
BinaryMatrix concatenate(const BinaryMatrix& a, const BinaryMatrix& b);

}  // namespace cogphy
