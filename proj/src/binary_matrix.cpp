#include "cogphy/binary_matrix.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cogphy {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kCognate: return "cognate";
    case Provenance::kPattern: return "pattern";
    case Provenance::kCombined: return "combined";
  }
  return "cognate";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "cognate") return Provenance::kCognate;
  if (name == "pattern") return Provenance::kPattern;
  if (name == "combined") return Provenance::kCombined;
  throw std::invalid_argument("unknown provenance: " + name);
}

void BinaryMatrix::validate() const {
  if (cells.size() != taxa.size() * characters.size()) {
    throw std::runtime_error("binary matrix: cell count mismatch");
  }
  if (provenance.size() != characters.size()) {
    throw std::runtime_error("binary matrix: provenance count mismatch");
  }
  std::set<std::string> names(taxa.begin(), taxa.end());
  if (names.size() != taxa.size()) {
    throw std::runtime_error("binary matrix: duplicate taxon names");
  }
  for (const char c : cells) {
    if (c != '0' && c != '1' && c != '?') {
      throw std::runtime_error("binary matrix: illegal state symbol");
    }
  }
  for (std::size_t j = 0; j < n_chars(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n_taxa(); ++i) {
      if (cell(i, j) != '?') any = true;
    }
    if (!any) {
      throw std::runtime_error("binary matrix: character '" + characters[j] +
                               "' has no observed states");
    }
  }
}

BinaryMatrix encode_cognates(const Wordlist& wl) {
  BinaryMatrix m;
  m.taxa = wl.languages;

  // gloss -> taxa attesting it; (gloss, cogid) -> taxa in the set
  std::map<std::string, std::set<std::string>> attested;
  std::map<std::string, std::set<std::string>> set_members;  // key gloss\tcogid
  std::map<std::string, std::set<std::string>> concept_sets;
  for (const auto& f : wl.forms) {
    attested[f.gloss].insert(f.language);
    set_members[f.gloss + '\t' + f.cognate_id].insert(f.language);
    concept_sets[f.gloss].insert(f.cognate_id);
  }

  for (const auto& gloss : wl.concepts) {
    for (const auto& cogid : concept_sets[gloss]) {
      m.characters.push_back(gloss + ':' + cogid);
      m.provenance.push_back(Provenance::kCognate);
      const auto& members = set_members[gloss + '\t' + cogid];
      const auto& present = attested[gloss];
      for (const auto& taxon : m.taxa) {
        char state = '?';
        if (members.count(taxon)) {
          state = '1';
        } else if (present.count(taxon)) {
          state = '0';
        }
        m.cells.push_back(state);
      }
    }
  }

  // transpose: cells were appended character-major
  BinaryMatrix out;
  out.taxa = m.taxa;
  out.characters = m.characters;
  out.provenance = m.provenance;
  out.cells.resize(m.cells.size());
  for (std::size_t j = 0; j < out.n_chars(); ++j) {
    for (std::size_t i = 0; i < out.n_taxa(); ++i) {
      out.cells[i * out.n_chars() + j] = m.cells[j * out.n_taxa() + i];
    }
  }
  return out;
}

BinaryMatrix encode_patterns(const std::vector<Pattern>& patterns,
                             const Wordlist& wl) {
  BinaryMatrix m;
  m.taxa = wl.languages;
  m.characters.reserve(patterns.size());
  m.cells.assign(wl.languages.size() * patterns.size(), '?');

  std::map<std::string, std::set<std::string>> attested;  // gloss -> taxa
  for (const auto& f : wl.forms) attested[f.gloss].insert(f.language);

  for (std::size_t j = 0; j < patterns.size(); ++j) {
    const Pattern& p = patterns[j];
    m.characters.push_back("pat:" + std::to_string(p.id));
    m.provenance.push_back(Provenance::kPattern);

    std::set<std::string> source_concepts;
    for (const auto& site : p.members) source_concepts.insert(site.gloss);

    for (std::size_t i = 0; i < m.taxa.size(); ++i) {
      const std::string& taxon = m.taxa[i];
      char state = '?';
      if (p.assignment.count(taxon)) {
        state = '1';
      } else {
        for (const auto& gloss : source_concepts) {
          if (attested[gloss].count(taxon)) {
            state = '0';
            break;
          }
        }
      }
      m.cells[i * patterns.size() + j] = state;
    }
  }
  return m;
}

BinaryMatrix concatenate(const BinaryMatrix& a, const BinaryMatrix& b) {
  BinaryMatrix out;
  out.taxa = a.taxa;
  for (const auto& t : b.taxa) {
    if (std::find(out.taxa.begin(), out.taxa.end(), t) == out.taxa.end()) {
      out.taxa.push_back(t);
    }
  }
  out.characters = a.characters;
  out.characters.insert(out.characters.end(), b.characters.begin(),
                        b.characters.end());
  out.provenance = a.provenance;
  out.provenance.insert(out.provenance.end(), b.provenance.begin(),
                        b.provenance.end());

  out.cells.assign(out.n_taxa() * out.n_chars(), '?');
  auto copy_from = [&](const BinaryMatrix& src, std::size_t char_offset) {
    for (std::size_t i = 0; i < src.n_taxa(); ++i) {
      const auto it = std::find(out.taxa.begin(), out.taxa.end(), src.taxa[i]);
      const std::size_t row = static_cast<std::size_t>(it - out.taxa.begin());
      for (std::size_t j = 0; j < src.n_chars(); ++j) {
        out.cell(row, char_offset + j) = src.cell(i, j);
      }
    }
  };
  copy_from(a, 0);
  copy_from(b, a.n_chars());
  return out;
}

}  // namespace cogphy
