#include "cogphy/nexus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cogphy {

namespace {

bool needs_quotes(const std::string& label) {
  return !std::all_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isalnum(c) != 0;
  });
}

std::string quoted(const std::string& label) {
  if (!needs_quotes(label)) return label;
  std::string out = "'";
  for (const char c : label) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
  return out;
}

struct Token {
  std::string text;
  std::size_t line = 0;
  bool was_quoted = false;
};

// Tokens are quoted strings, punctuation (';' '=' ','), or runs of other
// non-space characters. Bracketed comments are skipped, except that a
// leading PROVENANCE comment is captured for round-tripping.
struct Tokenizer {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::string provenance_comment;

  [[noreturn]] void fail(const std::string& message, std::size_t at_line) const {
    throw ParseError("nexus: " + message + " at line " + std::to_string(at_line));
  }

  bool next(Token& tok) {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == '[') {
        const std::size_t start_line = line;
        std::string body;
        ++pos;
        while (pos < text.size() && text[pos] != ']') {
          if (text[pos] == '\n') ++line;
          body += text[pos++];
        }
        if (pos >= text.size()) fail("unterminated comment", start_line);
        ++pos;
        if (body.rfind("PROVENANCE", 0) == 0) provenance_comment = body;
      } else {
        break;
      }
    }
    if (pos >= text.size()) return false;

    tok.line = line;
    tok.was_quoted = false;
    const char c = text[pos];
    if (c == '\'') {
      ++pos;
      std::string out;
      while (pos < text.size()) {
        if (text[pos] == '\'') {
          if (pos + 1 < text.size() && text[pos + 1] == '\'') {
            out += '\'';
            pos += 2;
            continue;
          }
          ++pos;
          tok.text = std::move(out);
          tok.was_quoted = true;
          return true;
        }
        if (text[pos] == '\n') ++line;
        out += text[pos++];
      }
      fail("unterminated quoted label", tok.line);
    }
    if (c == ';' || c == '=' || c == ',') {
      tok.text.assign(1, c);
      ++pos;
      return true;
    }
    std::string out;
    while (pos < text.size()) {
      const char d = text[pos];
      if (std::isspace(static_cast<unsigned char>(d)) || d == ';' || d == '=' ||
          d == ',' || d == '[' || d == '\'') {
        break;
      }
      out += d;
      ++pos;
    }
    tok.text = std::move(out);
    return true;
  }
};

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

}  // namespace

std::string write_nexus(const BinaryMatrix& m) {
  m.validate();
  std::ostringstream os;
  os << "#NEXUS\n";
  os << "BEGIN DATA;\n";
  os << "DIMENSIONS NTAX=" << m.n_taxa() << " NCHAR=" << m.n_chars() << ";\n";
  os << "FORMAT DATATYPE=STANDARD SYMBOLS=\"01\" MISSING=? GAP=-;\n";
  os << "[PROVENANCE";
  for (const auto p : m.provenance) os << ' ' << provenance_name(p);
  os << "]\n";
  os << "CHARSTATELABELS\n";
  for (std::size_t j = 0; j < m.n_chars(); ++j) {
    os << "  " << (j + 1) << ' ' << quoted(m.characters[j]);
    os << (j + 1 < m.n_chars() ? ",\n" : ";\n");
  }
  os << "MATRIX\n";
  std::size_t widest = 0;
  for (const auto& t : m.taxa) widest = std::max(widest, quoted(t).size());
  for (std::size_t i = 0; i < m.n_taxa(); ++i) {
    const std::string label = quoted(m.taxa[i]);
    os << label << std::string(widest - label.size() + 2, ' ');
    for (std::size_t j = 0; j < m.n_chars(); ++j) os << m.cell(i, j);
    os << '\n';
  }
  os << ";\n";
  os << "END;\n";
  return os.str();
}

BinaryMatrix read_nexus(std::string_view text) {
  Tokenizer tz{text};
  Token tok;

  auto expect = [&](const char* what) {
    if (!tz.next(tok)) {
      throw ParseError(std::string("nexus: unexpected end of input, expected ") +
                       what);
    }
    return tok;
  };

  // scan forward to BEGIN DATA;
  bool in_data = false;
  while (tz.next(tok)) {
    if (upper(tok.text) == "BEGIN") {
      const Token what = expect("block name");
      expect(";");
      if (upper(what.text) == "DATA" || upper(what.text) == "CHARACTERS") {
        in_data = true;
        break;
      }
    }
  }
  if (!in_data) throw ParseError("nexus: no DATA block found");

  BinaryMatrix m;
  std::size_t ntax = 0, nchar = 0;
  bool have_dimensions = false;
  bool done = false;

  while (!done) {
    const Token cmd = expect("block command");
    const std::string name = upper(cmd.text);
    if (name == "DIMENSIONS") {
      while (true) {
        const Token key = expect("dimension key");
        if (key.text == ";") break;
        const Token eq = expect("=");
        if (eq.text != "=") tz.fail("expected '='", eq.line);
        const Token value = expect("dimension value");
        const std::string k = upper(key.text);
        std::size_t parsed = 0;
        try {
          parsed = static_cast<std::size_t>(std::stoul(value.text));
        } catch (const std::exception&) {
          tz.fail("bad dimension value '" + value.text + "'", value.line);
        }
        if (k == "NTAX") ntax = parsed;
        if (k == "NCHAR") nchar = parsed;
      }
      if (ntax == 0 || nchar == 0) tz.fail("missing NTAX/NCHAR", cmd.line);
      have_dimensions = true;
    } else if (name == "FORMAT") {
      while (expect("format item").text != ";") {
      }
    } else if (name == "CHARSTATELABELS") {
      if (!have_dimensions) tz.fail("CHARSTATELABELS before DIMENSIONS", cmd.line);
      m.characters.assign(nchar, "");
      while (true) {
        const Token idx = expect("character index");
        if (idx.text == ";") break;
        std::size_t index = 0;
        try {
          index = static_cast<std::size_t>(std::stoul(idx.text));
        } catch (const std::exception&) {
          tz.fail("bad character index '" + idx.text + "'", idx.line);
        }
        if (index < 1 || index > nchar) {
          tz.fail("character index out of range", idx.line);
        }
        const Token label = expect("character label");
        m.characters[index - 1] = label.text;
        Token sep = expect(", or ;");
        if (sep.text == ";") break;
        if (sep.text != ",") tz.fail("expected ',' or ';'", sep.line);
      }
    } else if (name == "MATRIX") {
      if (!have_dimensions) tz.fail("MATRIX before DIMENSIONS", cmd.line);
      if (m.characters.empty()) {
        for (std::size_t j = 0; j < nchar; ++j) {
          m.characters.push_back("char" + std::to_string(j + 1));
        }
      }
      m.cells.assign(ntax * nchar, '?');
      std::size_t row = 0;
      while (true) {
        const Token first = expect("taxon label or ';'");
        if (first.text == ";" && !first.was_quoted) break;
        if (row >= ntax) {
          tz.fail("more taxa than NTAX=" + std::to_string(ntax), first.line);
        }
        m.taxa.push_back(first.text);
        std::size_t filled = 0;
        while (filled < nchar) {
          const Token states = expect("character states");
          if (states.text == ";" && !states.was_quoted) {
            throw ParseError("nexus: row for taxon '" + first.text + "' has " +
                             std::to_string(filled) + " states, expected " +
                             std::to_string(nchar) + " at line " +
                             std::to_string(states.line));
          }
          for (const char c : states.text) {
            if (filled >= nchar) {
              tz.fail("row for taxon '" + first.text + "' exceeds NCHAR",
                      states.line);
            }
            char state = c;
            if (state == '-') state = '?';  // gap counts as missing here
            if (state != '0' && state != '1' && state != '?') {
              tz.fail(std::string("illegal state symbol '") + c + "'",
                      states.line);
            }
            m.cell(row, filled++) = state;
          }
        }
        ++row;
      }
      if (row != ntax) {
        throw ParseError("nexus: matrix has " + std::to_string(row) +
                         " taxa, header declares " + std::to_string(ntax));
      }
    } else if (name == "END" || name == "ENDBLOCK") {
      expect(";");
      done = true;
    } else {
      // unknown command: skip to its terminating ';'
      while (expect("command body").text != ";") {
      }
    }
  }

  if (m.taxa.empty()) throw ParseError("nexus: DATA block has no MATRIX");

  m.provenance.assign(m.n_chars(), Provenance::kCognate);
  if (!tz.provenance_comment.empty()) {
    std::istringstream ps(tz.provenance_comment);
    std::string word;
    ps >> word;  // PROVENANCE
    std::size_t j = 0;
    while (ps >> word && j < m.n_chars()) {
      m.provenance[j++] = provenance_from_name(word);
    }
  }
  m.validate();
  return m;
}

BinaryMatrix read_nexus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open nexus file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_nexus(buf.str());
}

}  // namespace cogphy
