#include "cogphy/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cogphy/nexus.hpp"
#include "cogphy/rng.hpp"
#include "cogphy/tree_compare.hpp"

namespace cogphy {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

[[noreturn]] void stage_error(const std::string& stage, const std::exception& e) {
  throw std::runtime_error("pipeline stage '" + stage + "' failed: " + e.what());
}

std::string trace_header() {
  return "generation\tlog_posterior\tlog_likelihood\talpha\tpi1\tclock_rate\troot_age\n";
}

std::string trace_row(const McmcSample& s) {
  std::string row = std::to_string(s.generation);
  for (const double v : {s.log_posterior, s.log_likelihood, s.alpha, s.pi1,
                         s.clock_rate, s.root_age}) {
    row += '\t';
    row += format_double(v);
  }
  row += '\n';
  return row;
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;

  PipelineConfig cfg;
  const std::set<std::string> known = {
      "wordlist",       "gold_tree",       "output_dir",
      "dataset_name",   "seed",            "trim_tau",
      "scoring",        "character_types", "inference",
      "ml",             "gamma_categories", "ascertainment_correction",
      "mcmc",           "posterior_draws"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }

  cfg.wordlist_path = j.at("wordlist").get<std::string>();
  if (j.contains("gold_tree")) cfg.gold_tree_path = j["gold_tree"].get<std::string>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("dataset_name")) cfg.dataset_name = j["dataset_name"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("trim_tau")) cfg.trim_tau = j["trim_tau"].get<double>();
  if (j.contains("scoring")) {
    const auto& s = j["scoring"];
    if (s.contains("match")) cfg.scoring.match = s["match"].get<double>();
    if (s.contains("mismatch")) cfg.scoring.mismatch = s["mismatch"].get<double>();
    if (s.contains("gap")) cfg.scoring.gap = s["gap"].get<double>();
    if (s.contains("class_map")) {
      for (const auto& [symbol, cls] : s["class_map"].items()) {
        cfg.scoring.class_map[symbol] = cls.get<std::string>();
      }
    }
  }
  if (j.contains("character_types")) {
    cfg.character_types = j["character_types"].get<std::vector<std::string>>();
  }
  if (j.contains("inference")) cfg.inference = j["inference"].get<std::string>();
  if (j.contains("ml")) {
    const auto& m = j["ml"];
    if (m.contains("random_starts")) cfg.ml_random_starts = m["random_starts"].get<int>();
    if (m.contains("parsimony_starts")) {
      cfg.ml_parsimony_starts = m["parsimony_starts"].get<int>();
    }
  }
  if (j.contains("gamma_categories")) {
    cfg.gamma_categories = j["gamma_categories"].get<int>();
  }
  if (j.contains("ascertainment_correction")) {
    cfg.ascertainment_correction = j["ascertainment_correction"].get<bool>();
  }
  if (j.contains("mcmc")) {
    const auto& m = j["mcmc"];
    if (m.contains("generations_max")) {
      cfg.mcmc.generations_max = m["generations_max"].get<std::int64_t>();
    }
    if (m.contains("sample_every")) cfg.mcmc.sample_every = m["sample_every"].get<int>();
    if (m.contains("burnin_fraction")) {
      cfg.mcmc.burnin_fraction = m["burnin_fraction"].get<double>();
    }
    if (m.contains("asdsf_target")) cfg.mcmc.asdsf_target = m["asdsf_target"].get<double>();
    if (m.contains("runs")) cfg.mcmc.runs = m["runs"].get<int>();
    if (m.contains("check_every")) cfg.mcmc.check_every = m["check_every"].get<std::int64_t>();
    if (m.contains("alpha_prior")) {
      const std::string prior = m["alpha_prior"].get<std::string>();
      if (prior == "uniform") {
        cfg.mcmc.alpha_prior = AlphaPrior::kUniform;
      } else if (prior == "exponential") {
        cfg.mcmc.alpha_prior = AlphaPrior::kExponential;
      } else {
        throw std::runtime_error("config: alpha_prior must be uniform or exponential");
      }
    }
  }
  if (j.contains("posterior_draws")) {
    cfg.posterior_draws = j["posterior_draws"].get<std::size_t>();
  }

  for (const auto& t : cfg.character_types) {
    if (t != "cognates" && t != "patterns" && t != "combined") {
      throw std::runtime_error("config: unknown character type '" + t + "'");
    }
  }
  if (cfg.inference != "ml" && cfg.inference != "mcmc" && cfg.inference != "both") {
    throw std::runtime_error("config: inference must be ml, mcmc or both");
  }
  return cfg;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::string out = "dataset\tcharacter_type\tstatistic\tvalue\n";
  for (const auto& r : rows) {
    out += r.dataset + '\t' + r.character_type + '\t' + r.statistic + '\t' +
           r.value + '\n';
  }
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);

  std::string dataset = cfg.dataset_name;
  if (dataset.empty()) dataset = fs::path(cfg.wordlist_path).stem().string();

  auto add_row = [&](const std::string& type, const std::string& stat,
                     const std::string& value) {
    result.report.push_back({dataset, type, stat, value});
  };

  // --- corpus ---
  Wordlist wl;
  try {
    wl = read_wordlist_file(cfg.wordlist_path);
    const SummaryStats stats = summarize(wl);
    add_row("-", "words", std::to_string(stats.words));
    add_row("-", "concepts", std::to_string(stats.concepts));
    add_row("-", "languages", std::to_string(stats.languages));
    add_row("-", "avg_distance", format_double(stats.avg_distance));
    add_row("-", "avg_sounds", format_double(stats.avg_sounds));
    add_row("-", "avg_word_length", format_double(stats.avg_word_length));
  } catch (const std::exception& e) {
    stage_error("parse", e);
  }

  Tree gold;
  const bool have_gold = !cfg.gold_tree_path.empty();
  if (have_gold) {
    try {
      gold = read_newick_file(cfg.gold_tree_path);
    } catch (const std::exception& e) {
      stage_error("gold-tree", e);
    }
  }

  // --- align + trim ---
  std::vector<Alignment> trimmed;
  try {
    const auto alignments = align_wordlist(wl, cfg.scoring);
    write_file(out_dir / "alignments.txt", write_alignments(alignments));
    trimmed.reserve(alignments.size());
    for (const auto& a : alignments) {
      trimmed.push_back(trim_alignment(a, cfg.trim_tau));
    }
    write_file(out_dir / "alignments_trimmed.txt", write_alignments(trimmed));
  } catch (const std::exception& e) {
    stage_error("align", e);
  }

  // --- patterns ---
  std::vector<Pattern> patterns;
  try {
    patterns = detect_patterns(extract_sites(trimmed));
    write_file(out_dir / "patterns.tsv", write_patterns(patterns));
  } catch (const std::exception& e) {
    stage_error("patterns", e);
  }

  // --- encode ---
  auto wants = [&](const char* t) {
    return std::find(cfg.character_types.begin(), cfg.character_types.end(),
                     t) != cfg.character_types.end();
  };
  const bool want_cognates = wants("cognates");
  const bool want_patterns = wants("patterns");
  const bool want_combined = wants("combined");

  BinaryMatrix cognate_matrix, pattern_matrix, combined_matrix;
  try {
    cognate_matrix = encode_cognates(wl);
    pattern_matrix = encode_patterns(patterns, wl);
    for (auto& p : pattern_matrix.provenance) p = Provenance::kPattern;
    combined_matrix = concatenate(cognate_matrix, pattern_matrix);
    if (want_cognates) {
      write_file(out_dir / "matrix_cognates.nex", write_nexus(cognate_matrix));
    }
    if (want_patterns) {
      write_file(out_dir / "matrix_patterns.nex", write_nexus(pattern_matrix));
    }
    if (want_combined) {
      write_file(out_dir / "matrix_combined.nex", write_nexus(combined_matrix));
    }
  } catch (const std::exception& e) {
    stage_error("encode", e);
  }

  // --- inference + evaluation, fixed report order ---
  const bool run_ml = cfg.inference == "ml" || cfg.inference == "both";
  const bool run_mcmc = cfg.inference == "mcmc" || cfg.inference == "both";

  for (const char* type : {"cognates", "patterns", "combined"}) {
    if (std::find(cfg.character_types.begin(), cfg.character_types.end(),
                  type) == cfg.character_types.end()) {
      continue;
    }
    const BinaryMatrix& matrix = std::string(type) == "cognates"
                                     ? cognate_matrix
                                     : (std::string(type) == "patterns"
                                            ? pattern_matrix
                                            : combined_matrix);
    add_row(type, "nchar", std::to_string(matrix.n_chars()));
    const fs::path type_dir = out_dir / type;
    fs::create_directories(type_dir);

    if (run_ml) {
      try {
        SearchOptions opt;
        opt.gamma_categories = cfg.gamma_categories;
        opt.fit.ascertainment_correction = cfg.ascertainment_correction;
        const MlSearchResult ml = ml_search(
            matrix, cfg.ml_random_starts, cfg.ml_parsimony_starts,
            derive_seed(cfg.seed, std::string("infer-ml/") + type), opt);
        write_file(type_dir / "ml_best.nwk", write_newick(ml.best_tree) + "\n");
        std::string table = "search\tstart\tlog_likelihood\talpha\tpi1\n";
        for (std::size_t i = 0; i < ml.searches.size(); ++i) {
          const auto& s = ml.searches[i];
          table += std::to_string(i) + '\t' +
                   (s.start == StartKind::kRandom ? "random" : "parsimony") +
                   '\t' + format_double(s.log_lik) + '\t' +
                   format_double(s.gamma.k > 1 ? s.gamma.alpha : 0.0) + '\t' +
                   format_double(s.model.pi1) + '\n';
        }
        write_file(type_dir / "ml_searches.tsv", table);
        add_row(type, "ml_log_likelihood", format_double(ml.best_log_lik));
        add_row(type, "ml_alpha", format_double(ml.best_gamma.alpha));
        add_row(type, "ml_pi1", format_double(ml.best_model.pi1));
        if (have_gold) {
          add_row(type, "ml_gqd", format_double(gqd(ml.best_tree, gold).distance));
        }
      } catch (const std::exception& e) {
        stage_error(std::string("infer-ml/") + type, e);
      }
    }

    if (run_mcmc) {
      try {
        McmcConfig mcfg = cfg.mcmc;
        mcfg.gamma_categories = cfg.gamma_categories;
        mcfg.seed = derive_seed(cfg.seed, std::string("infer-mcmc/") + type);
        const McmcResult mc = mcmc_run(matrix, mcfg);
        for (std::size_t r = 0; r < mc.runs.size(); ++r) {
          std::string trees, trace = trace_header();
          for (const auto& s : mc.runs[r].samples) {
            trees += write_newick(s.tree) + "\n";
            trace += trace_row(s);
          }
          const std::string k = std::to_string(r + 1);
          write_file(type_dir / ("mcmc_run" + k + ".trees"), trees);
          write_file(type_dir / ("mcmc_run" + k + ".trace.tsv"), trace);
        }
        add_row(type, "mcmc_converged", mc.converged ? "yes" : "no");
        add_row(type, "mcmc_asdsf", format_double(mc.final_asdsf));
        add_row(type, "mcmc_generations", std::to_string(mc.generations));

        std::vector<double> alphas;
        for (const auto& run : mc.retained(mcfg.burnin_fraction)) {
          for (const auto& s : run) alphas.push_back(s.alpha);
        }
        std::sort(alphas.begin(), alphas.end());
        if (!alphas.empty()) {
          const std::size_t n = alphas.size();
          const double median = n % 2 ? alphas[n / 2]
                                      : 0.5 * (alphas[n / 2 - 1] + alphas[n / 2]);
          add_row(type, "mcmc_alpha_median", format_double(median));
        }
        if (have_gold) {
          const auto draws = mc.draw_evaluation_trees(
              cfg.posterior_draws, mcfg.burnin_fraction,
              derive_seed(cfg.seed, std::string("posterior-draw/") + type));
          std::string dump;
          for (const auto& t : draws) dump += write_newick(t) + "\n";
          write_file(type_dir / "posterior_draws.trees", dump);
          add_row(type, "mcmc_gqd_median",
                  format_double(posterior_gqd_median(draws, gold)));
        }
      } catch (const std::exception& e) {
        stage_error(std::string("infer-mcmc/") + type, e);
      }
    }
  }

  write_file(out_dir / "report.tsv", format_report(result.report));
  return result;
}

}  // namespace cogphy
