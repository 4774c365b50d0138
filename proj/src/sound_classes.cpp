#include "cogphy/alignment.hpp"

#include <unordered_map>

namespace cogphy {

namespace {

// Bundled coarse class table, keyed by single code points. V = vowel,
// P/T/K = labial/coronal/dorsal stops, S/F/H = sibilant/labial/guttural
// fricatives, D = dental fricatives, C = palatal affricates, N = nasal,
// L = lateral, R = rhotic, W/J = glides.
const std::unordered_map<std::string, std::string>& base_classes() {
  static const std::unordered_map<std::string, std::string> table = {
      // vowels
      {"a", "V"}, {"e", "V"}, {"i", "V"}, {"o", "V"}, {"u", "V"}, {"y", "V"},
      {"æ", "V"}, {"ø", "V"}, {"œ", "V"}, {"ɑ", "V"}, {"ɒ", "V"}, {"ɔ", "V"},
      {"ə", "V"}, {"ɛ", "V"}, {"ɜ", "V"}, {"ɪ", "V"}, {"ʊ", "V"}, {"ʌ", "V"},
      {"ɨ", "V"}, {"ʉ", "V"}, {"ɯ", "V"}, {"ɤ", "V"}, {"ɐ", "V"}, {"ɞ", "V"},
      {"ɵ", "V"}, {"ã", "V"}, {"ẽ", "V"}, {"ĩ", "V"}, {"õ", "V"}, {"ũ", "V"},
      {"á", "V"}, {"é", "V"}, {"í", "V"}, {"ó", "V"}, {"ú", "V"}, {"à", "V"},
      {"è", "V"}, {"ì", "V"}, {"ò", "V"}, {"ù", "V"}, {"ā", "V"}, {"ē", "V"},
      {"ī", "V"}, {"ō", "V"}, {"ū", "V"}, {"â", "V"}, {"ê", "V"}, {"î", "V"},
      {"ô", "V"}, {"û", "V"}, {"ä", "V"}, {"ö", "V"}, {"ü", "V"},
      // stops
      {"p", "P"}, {"b", "P"}, {"ɓ", "P"},
      {"t", "T"}, {"d", "T"}, {"ʈ", "T"}, {"ɖ", "T"}, {"ɗ", "T"},
      {"k", "K"}, {"g", "K"}, {"ɡ", "K"}, {"q", "K"}, {"ɢ", "K"}, {"ɠ", "K"},
      // affricates and palatals
      {"c", "C"}, {"ɟ", "C"}, {"ʧ", "C"}, {"ʤ", "C"},
      // fricatives
      {"s", "S"}, {"z", "S"}, {"ʃ", "S"}, {"ʒ", "S"}, {"ɕ", "S"}, {"ʑ", "S"},
      {"ʂ", "S"}, {"ʐ", "S"},
      {"f", "F"}, {"v", "F"}, {"ɸ", "F"}, {"β", "F"}, {"ʋ", "F"},
      {"θ", "D"}, {"ð", "D"},
      {"x", "H"}, {"ɣ", "H"}, {"χ", "H"}, {"ʁ", "H"}, {"h", "H"}, {"ɦ", "H"},
      {"ħ", "H"}, {"ʕ", "H"}, {"ʔ", "H"},
      // sonorants
      {"m", "N"}, {"n", "N"}, {"ŋ", "N"}, {"ɲ", "N"}, {"ɳ", "N"}, {"ɴ", "N"},
      {"l", "L"}, {"ʎ", "L"}, {"ɭ", "L"}, {"ɫ", "L"},
      {"r", "R"}, {"ɾ", "R"}, {"ɽ", "R"}, {"ʀ", "R"}, {"ɹ", "R"}, {"ɻ", "R"},
      {"w", "W"}, {"ʍ", "W"}, {"ɥ", "W"},
      {"j", "J"}, {"ʝ", "J"},
  };
  return table;
}

// First UTF-8 code point of s, as a string.
std::string first_codepoint(const std::string& s) {
  if (s.empty()) return s;
  const unsigned char lead = static_cast<unsigned char>(s[0]);
  std::size_t len = 1;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
  }
  return s.substr(0, std::min(len, s.size()));
}

}  // namespace

std::string default_sound_class(const std::string& symbol) {
  const auto& table = base_classes();
  auto it = table.find(symbol);
  if (it != table.end()) return it->second;
  it = table.find(first_codepoint(symbol));
  if (it != table.end()) return it->second;
  return symbol;
}

std::string ScoringScheme::sound_class(const std::string& symbol) const {
  const auto it = class_map.find(symbol);
  if (it != class_map.end()) return it->second;
  return default_sound_class(symbol);
}

double ScoringScheme::score(const std::string& a, const std::string& b) const {
  if (a == kGap && b == kGap) return 0.0;
  if (a == kGap || b == kGap) return gap;
  return sound_class(a) == sound_class(b) ? match : mismatch;
}

}  // namespace cogphy
