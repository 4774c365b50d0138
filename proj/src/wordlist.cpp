#include "cogphy/wordlist.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cogphy {

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Wordlist parse_wordlist(std::string_view text) {
  Wordlist wl;
  std::set<std::string> seen_ids;
  std::set<std::string> seen_langs, seen_concepts;

  std::vector<std::string> header;
  std::size_t col_id = 0, col_lang = 0, col_concept = 0, col_tokens = 0,
              col_cogid = 0;
  bool have_header = false;
  std::size_t row_number = 0;  // data rows, 1-based

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        (nl == std::string_view::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    line = strip_cr(line);
    if (line.empty() || line.front() == '#') continue;

    if (!have_header) {
      header = split_tabs(line);
      auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
          throw ParseError("wordlist: missing required column " + name);
        }
        return static_cast<std::size_t>(it - header.begin());
      };
      col_id = find_col("ID");
      col_lang = find_col("LANGUAGE");
      col_concept = find_col("CONCEPT");
      col_tokens = find_col("TOKENS");
      col_cogid = find_col("COGID");
      have_header = true;
      continue;
    }

    ++row_number;
    const auto fields = split_tabs(line);
    auto field = [&](std::size_t col) -> std::string {
      return col < fields.size() ? fields[col] : std::string();
    };

    WordForm form;
    form.id = field(col_id);
    form.language = field(col_lang);
    form.gloss = field(col_concept);
    form.tokens = split_spaces(field(col_tokens));
    form.cognate_id = field(col_cogid);

    const std::string where = " in row " + std::to_string(row_number);
    if (form.id.empty()) throw ParseError("wordlist: empty ID" + where);
    if (form.language.empty()) throw ParseError("wordlist: empty LANGUAGE" + where);
    if (form.gloss.empty()) throw ParseError("wordlist: empty CONCEPT" + where);
    if (form.tokens.empty()) throw ParseError("wordlist: empty TOKENS" + where);
    if (form.cognate_id.empty()) throw ParseError("wordlist: empty COGID" + where);
    if (!seen_ids.insert(form.id).second) {
      throw ParseError("wordlist: duplicate ID '" + form.id + "'" + where);
    }
    if (seen_langs.insert(form.language).second) {
      wl.languages.push_back(form.language);
    }
    if (seen_concepts.insert(form.gloss).second) {
      wl.concepts.push_back(form.gloss);
    }
    wl.forms.push_back(std::move(form));
  }

  if (!have_header) throw ParseError("wordlist: missing header line");
  return wl;
}

std::string write_wordlist(const Wordlist& wl) {
  std::ostringstream out;
  out << "ID\tLANGUAGE\tCONCEPT\tTOKENS\tCOGID\n";
  for (const auto& f : wl.forms) {
    out << f.id << '\t' << f.language << '\t' << f.gloss << '\t';
    for (std::size_t i = 0; i < f.tokens.size(); ++i) {
      if (i) out << ' ';
      out << f.tokens[i];
    }
    out << '\t' << f.cognate_id << '\n';
  }
  return out.str();
}

Wordlist read_wordlist_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wordlist file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_wordlist(buf.str());
}

double cognate_distance(const Wordlist& wl, const std::string& lang_a,
                        const std::string& lang_b) {
  const bool a_known = std::find(wl.languages.begin(), wl.languages.end(),
                                 lang_a) != wl.languages.end();
  const bool b_known = std::find(wl.languages.begin(), wl.languages.end(),
                                 lang_b) != wl.languages.end();
  if (!a_known || !b_known) {
    throw std::invalid_argument("cognate_distance: unattested language " +
                                (a_known ? lang_b : lang_a));
  }

  // gloss -> cognate ids per language
  std::map<std::string, std::set<std::string>> sets_a, sets_b;
  for (const auto& f : wl.forms) {
    if (f.language == lang_a) sets_a[f.gloss].insert(f.cognate_id);
    if (f.language == lang_b) sets_b[f.gloss].insert(f.cognate_id);
  }

  std::size_t common = 0, shared = 0;
  for (const auto& [gloss, ids_a] : sets_a) {
    const auto it = sets_b.find(gloss);
    if (it == sets_b.end()) continue;
    ++common;
    const auto& ids_b = it->second;
    const bool overlap = std::any_of(ids_a.begin(), ids_a.end(),
                                     [&](const std::string& id) {
                                       return ids_b.count(id) > 0;
                                     });
    if (overlap) ++shared;
  }
  if (common == 0) {
    throw std::runtime_error("cognate_distance: no shared concepts between " +
                             lang_a + " and " + lang_b);
  }
  return 1.0 - static_cast<double>(shared) / static_cast<double>(common);
}

SummaryStats summarize(const Wordlist& wl) {
  if (wl.forms.empty()) throw std::invalid_argument("summarize: empty wordlist");

  SummaryStats s;
  s.words = wl.forms.size();
  s.concepts = wl.concepts.size();
  s.languages = wl.languages.size();

  double total_tokens = 0.0;
  std::map<std::string, std::set<std::string>> inventory;
  for (const auto& f : wl.forms) {
    total_tokens += static_cast<double>(f.tokens.size());
    auto& inv = inventory[f.language];
    inv.insert(f.tokens.begin(), f.tokens.end());
  }
  s.avg_word_length = total_tokens / static_cast<double>(s.words);

  double total_sounds = 0.0;
  for (const auto& lang : wl.languages) {
    total_sounds += static_cast<double>(inventory[lang].size());
  }
  s.avg_sounds = total_sounds / static_cast<double>(s.languages);

  double dist_sum = 0.0;
  std::size_t dist_count = 0;
  for (std::size_t i = 0; i < wl.languages.size(); ++i) {
    for (std::size_t j = i + 1; j < wl.languages.size(); ++j) {
      try {
        dist_sum += cognate_distance(wl, wl.languages[i], wl.languages[j]);
        ++dist_count;
      } catch (const std::runtime_error&) {
        // pair with no shared concepts: distance undefined, skipped
      }
    }
  }
  s.avg_distance = dist_count ? dist_sum / static_cast<double>(dist_count) : 0.0;
  return s;
}

}  // namespace cogphy
