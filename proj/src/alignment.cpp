#include "cogphy/alignment.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cogphy {

double Alignment::column_gap_fraction(std::size_t col) const {
  if (rows.empty()) return 0.0;
  std::size_t gaps = 0;
  for (const auto& [lang, tokens] : rows) {
    if (tokens[col] == kGap) ++gaps;
  }
  return static_cast<double>(gaps) / static_cast<double>(rows.size());
}

namespace {

// Profile = stack of equal-width gapped rows. Pairwise alignment is the
// 1-row special case, so one DP covers both.
using Profile = std::vector<std::vector<std::string>>;

double column_pair_score(const Profile& pa, std::size_t ca, const Profile& pb,
                         std::size_t cb, const ScoringScheme& scheme) {
  double total = 0.0;
  for (const auto& row_a : pa) {
    for (const auto& row_b : pb) {
      total += scheme.score(row_a[ca], row_b[cb]);
    }
  }
  return total / static_cast<double>(pa.size() * pb.size());
}

// Global profile-profile alignment; returns per-profile column index lists
// where -1 marks an inserted gap column. Traceback ties prefer diagonal,
// then up (gap in b), then left (gap in a).
struct ProfileAlignment {
  std::vector<int> cols_a;
  std::vector<int> cols_b;
  double score = 0.0;
};

ProfileAlignment align_profiles(const Profile& pa, const Profile& pb,
                                const ScoringScheme& scheme) {
  const std::size_t n = pa.empty() ? 0 : pa.front().size();
  const std::size_t m = pb.empty() ? 0 : pb.front().size();

  std::vector<std::vector<double>> score(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i) score[i][0] = score[i - 1][0] + scheme.gap;
  for (std::size_t j = 1; j <= m; ++j) score[0][j] = score[0][j - 1] + scheme.gap;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag =
          score[i - 1][j - 1] + column_pair_score(pa, i - 1, pb, j - 1, scheme);
      const double up = score[i - 1][j] + scheme.gap;
      const double left = score[i][j - 1] + scheme.gap;
      score[i][j] = std::max({diag, up, left});
    }
  }

  ProfileAlignment out;
  out.score = score[n][m];
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        score[i][j] == score[i - 1][j - 1] +
                           column_pair_score(pa, i - 1, pb, j - 1, scheme)) {
      out.cols_a.push_back(static_cast<int>(i - 1));
      out.cols_b.push_back(static_cast<int>(j - 1));
      --i;
      --j;
    } else if (i > 0 && score[i][j] == score[i - 1][j] + scheme.gap) {
      out.cols_a.push_back(static_cast<int>(i - 1));
      out.cols_b.push_back(-1);
      --i;
    } else {
      out.cols_a.push_back(-1);
      out.cols_b.push_back(static_cast<int>(j - 1));
      --j;
    }
  }
  std::reverse(out.cols_a.begin(), out.cols_a.end());
  std::reverse(out.cols_b.begin(), out.cols_b.end());
  return out;
}

Profile expand_profile(const Profile& p, const std::vector<int>& cols) {
  Profile out(p.size());
  for (std::size_t r = 0; r < p.size(); ++r) {
    out[r].reserve(cols.size());
    for (const int c : cols) {
      out[r].push_back(c < 0 ? kGap : p[r][static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

double normalized_distance(const PairwiseAlignment& aln, std::size_t len_a,
                           std::size_t len_b, const ScoringScheme& scheme) {
  const std::size_t longest = std::max(len_a, len_b);
  if (longest == 0) return 0.0;
  const double norm = aln.score / (scheme.match * static_cast<double>(longest));
  return std::max(0.0, 1.0 - norm);
}

}  // namespace

PairwiseAlignment pairwise_align(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b,
                                 const ScoringScheme& scheme) {
  const Profile pa = {a}, pb = {b};
  const ProfileAlignment pr = align_profiles(pa, pb, scheme);
  PairwiseAlignment out;
  out.score = pr.score;
  out.a = expand_profile(pa, pr.cols_a).front();
  out.b = expand_profile(pb, pr.cols_b).front();
  return out;
}

Alignment progressive_msa(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& forms,
    const ScoringScheme& scheme, std::string gloss, std::string cognate_id) {
  if (forms.empty()) {
    throw std::invalid_argument("progressive_msa: no forms given");
  }

  // one row per language, first synonym wins
  std::vector<std::pair<std::string, std::vector<std::string>>> kept;
  std::set<std::string> seen;
  for (const auto& f : forms) {
    if (seen.insert(f.first).second) kept.push_back(f);
  }

  Alignment result;
  result.gloss = std::move(gloss);
  result.cognate_id = std::move(cognate_id);

  const std::size_t n = kept.size();
  if (n == 1) {
    result.rows.push_back(kept.front());
    return result;
  }

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto aln = pairwise_align(kept[i].second, kept[j].second, scheme);
      dist[i][j] = dist[j][i] = normalized_distance(
          aln, kept[i].second.size(), kept[j].second.size(), scheme);
    }
  }

  // average-linkage agglomeration; ties pick the lexicographically smallest
  // (i, j) over the active cluster list
  struct Cluster {
    std::vector<std::size_t> members;  // row indices into kept
    Profile profile;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) {
    active.push_back({{i}, {kept[i].second}});
  }

  auto cluster_distance = [&](const Cluster& x, const Cluster& y) {
    double total = 0.0;
    for (const std::size_t a : x.members) {
      for (const std::size_t b : y.members) total += dist[a][b];
    }
    return total / static_cast<double>(x.members.size() * y.members.size());
  };

  while (active.size() > 1) {
    std::size_t best_i = 0, best_j = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = cluster_distance(active[i], active[j]);
        if (d < best) {
          best = d;
          best_i = i;
          best_j = j;
        }
      }
    }
    const ProfileAlignment pr =
        align_profiles(active[best_i].profile, active[best_j].profile, scheme);
    Cluster merged;
    merged.members = active[best_i].members;
    merged.members.insert(merged.members.end(), active[best_j].members.begin(),
                          active[best_j].members.end());
    Profile ea = expand_profile(active[best_i].profile, pr.cols_a);
    Profile eb = expand_profile(active[best_j].profile, pr.cols_b);
    merged.profile = std::move(ea);
    merged.profile.insert(merged.profile.end(), eb.begin(), eb.end());
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
    active[best_i] = std::move(merged);
  }

  // restore input row order
  const Cluster& final_cluster = active.front();
  std::vector<std::size_t> order(final_cluster.members.size());
  for (std::size_t pos = 0; pos < final_cluster.members.size(); ++pos) {
    order[final_cluster.members[pos]] = pos;
  }
  for (std::size_t i = 0; i < n; ++i) {
    result.rows.emplace_back(kept[i].first, final_cluster.profile[order[i]]);
  }

  // drop any column that is gaps only (cannot arise from the profile DP,
  // but the invariant is cheap to enforce)
  Alignment cleaned = result;
  cleaned.rows.clear();
  std::vector<std::size_t> keep_cols;
  for (std::size_t c = 0; c < result.width(); ++c) {
    if (result.column_gap_fraction(c) < 1.0) keep_cols.push_back(c);
  }
  if (keep_cols.size() == result.width()) return result;
  for (const auto& [lang, tokens] : result.rows) {
    std::vector<std::string> trimmed;
    trimmed.reserve(keep_cols.size());
    for (const std::size_t c : keep_cols) trimmed.push_back(tokens[c]);
    cleaned.rows.emplace_back(lang, std::move(trimmed));
  }
  return cleaned;
}

Alignment trim_alignment(const Alignment& alignment, double tau) {
  if (tau < 0.0 || tau > 1.0) {
    throw std::invalid_argument("trim_alignment: tau must lie in [0,1]");
  }
  const std::size_t w = alignment.width();
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < w; ++c) {
    if (alignment.column_gap_fraction(c) <= tau) keep.push_back(c);
  }
  if (keep.empty() && w > 0) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < w; ++c) {
      if (alignment.column_gap_fraction(c) < alignment.column_gap_fraction(best)) {
        best = c;
      }
    }
    keep.push_back(best);
  }

  Alignment out;
  out.gloss = alignment.gloss;
  out.cognate_id = alignment.cognate_id;
  for (const auto& [lang, tokens] : alignment.rows) {
    std::vector<std::string> kept;
    kept.reserve(keep.size());
    for (const std::size_t c : keep) kept.push_back(tokens[c]);
    out.rows.emplace_back(lang, std::move(kept));
  }
  return out;
}

std::vector<Alignment> align_wordlist(const Wordlist& wl,
                                      const ScoringScheme& scheme) {
  // (gloss order, cognate id) -> forms in input order
  std::vector<Alignment> out;
  for (const auto& gloss : wl.concepts) {
    std::set<std::string> cogids;
    for (const auto& f : wl.forms) {
      if (f.gloss == gloss) cogids.insert(f.cognate_id);
    }
    for (const auto& cogid : cogids) {
      std::vector<std::pair<std::string, std::vector<std::string>>> forms;
      for (const auto& f : wl.forms) {
        if (f.gloss == gloss && f.cognate_id == cogid) {
          forms.emplace_back(f.language, f.tokens);
        }
      }
      out.push_back(progressive_msa(forms, scheme, gloss, cogid));
    }
  }
  return out;
}

std::string write_alignments(const std::vector<Alignment>& alignments) {
  std::ostringstream os;
  bool first = true;
  for (const auto& aln : alignments) {
    if (!first) os << '\n';
    first = false;
    os << "# " << aln.gloss << '\t' << aln.cognate_id << '\n';
    for (const auto& [lang, tokens] : aln.rows) {
      os << lang << '\t';
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) os << ' ';
        os << tokens[i];
      }
      os << '\n';
    }
  }
  return os.str();
}

std::vector<Alignment> read_alignments(std::string_view text) {
  std::vector<Alignment> out;
  Alignment current;
  bool in_block = false;

  auto flush = [&]() {
    if (in_block && !current.rows.empty()) out.push_back(std::move(current));
    current = Alignment{};
    in_block = false;
  };

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      flush();
      std::string header(line.substr(1));
      const std::size_t tab = header.find('\t');
      if (tab == std::string::npos) {
        throw ParseError("alignments: malformed block header at line " +
                         std::to_string(line_no));
      }
      current.gloss = header.substr(0, tab);
      current.cognate_id = header.substr(tab + 1);
      while (!current.gloss.empty() && current.gloss.front() == ' ') {
        current.gloss.erase(current.gloss.begin());
      }
      in_block = true;
      continue;
    }
    if (!in_block) {
      throw ParseError("alignments: row outside block at line " +
                       std::to_string(line_no));
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("alignments: missing tab at line " + std::to_string(line_no));
    }
    std::string lang(line.substr(0, tab));
    std::string toks(line.substr(tab + 1));
    std::istringstream ts(toks);
    std::vector<std::string> tokens;
    std::string tok;
    while (ts >> tok) tokens.push_back(tok);
    if (!current.rows.empty() && tokens.size() != current.width()) {
      throw ParseError("alignments: ragged row at line " + std::to_string(line_no));
    }
    current.rows.emplace_back(std::move(lang), std::move(tokens));
  }
  flush();
  return out;
}

}  // namespace cogphy
