#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cogphy {

struct WordForm {
  std::string id;
  std::string language;
  std::string gloss;
  std::vector<std::string> tokens;  // sound symbols, non-empty
  std::string cognate_id;           // scoped per gloss
};

// Cognate-coded wordlist. Languages and concepts are kept in first-appearance
// order; form ids are unique.
struct Wordlist {
  std::vector<WordForm> forms;
  std::vector<std::string> languages;
  std::vector<std::string> concepts;
};

struct SummaryStats {
  std::size_t words = 0;
  std::size_t concepts = 0;
  std::size_t languages = 0;
  double avg_distance = 0.0;     // mean pairwise shared-cognate distance
  double avg_sounds = 0.0;       // mean distinct-sound inventory per language
  double avg_word_length = 0.0;  // mean token count per form
};

// Thrown by the parsers in this library; the message carries the location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses a tab-separated wordlist with header columns ID, LANGUAGE, CONCEPT,
// TOKENS (space-separated symbols) and COGID. Lines starting with '#' are
// comments; LF and CRLF both accepted. Data rows are numbered from 1 in
// error messages.
Wordlist parse_wordlist(std::string_view text);

// Inverse of parse_wordlist (identity on round trip).
std::string write_wordlist(const Wordlist& wl);

Wordlist read_wordlist_file(const std::string& path);

SummaryStats summarize(const Wordlist& wl);

// 1 - (shared cognate concepts) / (concepts attested in both languages).
// Throws if either language is unattested or the pair shares no gloss.
double cognate_distance(const Wordlist& wl, const std::string& lang_a,
                        const std::string& lang_b);

}  // namespace cogphy
