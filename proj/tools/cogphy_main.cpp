#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cogphy/nexus.hpp"
#include "cogphy/pipeline.hpp"
#include "cogphy/rng.hpp"
#include "cogphy/simulate.hpp"
#include "cogphy/tree_compare.hpp"

namespace {

using namespace cogphy;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct CommonScoring {
  double match = 1.0;
  double mismatch = -1.0;
  double gap = -1.0;

  ScoringScheme scheme() const {
    ScoringScheme s;
    s.match = match;
    s.mismatch = mismatch;
    s.gap = gap;
    return s;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--match", match, "match score");
    cmd->add_option("--mismatch", mismatch, "mismatch score");
    cmd->add_option("--gap", gap, "linear gap penalty");
  }
};

int run(int argc, char** argv) {
  CLI::App app{"cognate and sound-correspondence phylogenetics toolkit"};
  app.require_subcommand(1);

  // --- summarize ---
  std::string wordlist_path, out_path, alignments_path, gold_path, tree_path;
  auto* summarize_cmd = app.add_subcommand("summarize", "wordlist summary statistics");
  summarize_cmd->add_option("--wordlist", wordlist_path, "wordlist TSV")->required();
  summarize_cmd->callback([&]() {
    const auto wl = read_wordlist_file(wordlist_path);
    const auto s = summarize(wl);
    std::printf("words\t%zu\nconcepts\t%zu\nlanguages\t%zu\n", s.words,
                s.concepts, s.languages);
    std::printf("avg_distance\t%.4f\navg_sounds\t%.4f\navg_word_length\t%.4f\n",
                s.avg_distance, s.avg_sounds, s.avg_word_length);
  });

  // --- align ---
  CommonScoring align_scoring;
  auto* align_cmd = app.add_subcommand("align", "align every cognate set");
  align_cmd->add_option("--wordlist", wordlist_path, "wordlist TSV")->required();
  align_cmd->add_option("--out", out_path, "alignment dump")->required();
  align_scoring.attach(align_cmd);
  align_cmd->callback([&]() {
    const auto wl = read_wordlist_file(wordlist_path);
    spit(out_path, write_alignments(align_wordlist(wl, align_scoring.scheme())));
  });

  // --- trim ---
  double tau = 0.5;
  auto* trim_cmd = app.add_subcommand("trim", "drop gap-heavy alignment columns");
  trim_cmd->add_option("--alignments", alignments_path, "alignment dump")->required();
  trim_cmd->add_option("--out", out_path, "trimmed dump")->required();
  trim_cmd->add_option("--tau", tau, "gap-fraction threshold");
  trim_cmd->callback([&]() {
    auto alignments = read_alignments(slurp(alignments_path));
    std::vector<Alignment> trimmed;
    trimmed.reserve(alignments.size());
    for (const auto& a : alignments) trimmed.push_back(trim_alignment(a, tau));
    spit(out_path, write_alignments(trimmed));
  });

  // --- patterns ---
  auto* patterns_cmd =
      app.add_subcommand("patterns", "detect sound-correspondence patterns");
  patterns_cmd->add_option("--alignments", alignments_path, "trimmed dump")->required();
  patterns_cmd->add_option("--out", out_path, "pattern table")->required();
  patterns_cmd->callback([&]() {
    const auto alignments = read_alignments(slurp(alignments_path));
    spit(out_path, write_patterns(detect_patterns(extract_sites(alignments))));
  });

  // --- encode ---
  std::string char_type = "cognates";
  auto* encode_cmd = app.add_subcommand("encode", "binary presence-absence matrix");
  encode_cmd->add_option("--wordlist", wordlist_path, "wordlist TSV")->required();
  encode_cmd->add_option("--alignments", alignments_path,
                         "trimmed dump (required for patterns/combined)");
  encode_cmd->add_option("--type", char_type, "cognates | patterns | combined");
  encode_cmd->add_option("--out", out_path, "nexus file")->required();
  encode_cmd->callback([&]() {
    const auto wl = read_wordlist_file(wordlist_path);
    BinaryMatrix matrix;
    if (char_type == "cognates") {
      matrix = encode_cognates(wl);
    } else {
      if (alignments_path.empty()) {
        throw std::runtime_error("--alignments required for type " + char_type);
      }
      const auto alignments = read_alignments(slurp(alignments_path));
      const auto patterns = detect_patterns(extract_sites(alignments));
      if (char_type == "patterns") {
        matrix = encode_patterns(patterns, wl);
      } else if (char_type == "combined") {
        matrix = concatenate(encode_cognates(wl), encode_patterns(patterns, wl));
      } else {
        throw std::runtime_error("unknown character type " + char_type);
      }
    }
    spit(out_path, write_nexus(matrix));
  });

  // --- infer-ml ---
  std::string matrix_path, results_path;
  std::uint64_t seed = 1;
  int n_random = 10, n_parsimony = 10, gamma_k = 4;
  bool ascertainment = false;
  auto* ml_cmd = app.add_subcommand("infer-ml", "maximum-likelihood tree search");
  ml_cmd->add_option("--matrix", matrix_path, "nexus matrix")->required();
  ml_cmd->add_option("--out-tree", out_path, "best tree (newick)")->required();
  ml_cmd->add_option("--out-searches", results_path, "per-search table");
  ml_cmd->add_option("--seed", seed, "random seed");
  ml_cmd->add_option("--random-starts", n_random, "searches from random trees");
  ml_cmd->add_option("--parsimony-starts", n_parsimony,
                     "searches from stepwise parsimony trees");
  ml_cmd->add_option("--gamma-categories", gamma_k, "1 disables rate heterogeneity");
  ml_cmd->add_flag("--ascertainment-correction", ascertainment,
                   "condition on variable characters");
  ml_cmd->callback([&]() {
    const auto matrix = read_nexus_file(matrix_path);
    SearchOptions opt;
    opt.gamma_categories = gamma_k;
    opt.fit.ascertainment_correction = ascertainment;
    const auto ml = ml_search(matrix, n_random, n_parsimony, seed, opt);
    spit(out_path, write_newick(ml.best_tree) + "\n");
    std::printf("log_likelihood\t%.6f\nalpha\t%.6g\npi1\t%.6g\n", ml.best_log_lik,
                ml.best_gamma.alpha, ml.best_model.pi1);
    if (!results_path.empty()) {
      std::string table = "search\tstart\tlog_likelihood\talpha\tpi1\n";
      for (std::size_t i = 0; i < ml.searches.size(); ++i) {
        const auto& s = ml.searches[i];
        char row[160];
        std::snprintf(row, sizeof row, "%zu\t%s\t%.6f\t%.6g\t%.6g\n", i,
                      s.start == StartKind::kRandom ? "random" : "parsimony",
                      s.log_lik, s.gamma.alpha, s.model.pi1);
        table += row;
      }
      spit(results_path, table);
    }
  });

  // --- infer-mcmc ---
  std::string out_prefix = "mcmc";
  McmcConfig mcfg;
  std::string alpha_prior = "uniform";
  auto* mcmc_cmd = app.add_subcommand("infer-mcmc", "Bayesian strict-clock sampling");
  mcmc_cmd->add_option("--matrix", matrix_path, "nexus matrix")->required();
  mcmc_cmd->add_option("--out-prefix", out_prefix, "output path prefix")->required();
  mcmc_cmd->add_option("--seed", mcfg.seed, "random seed");
  mcmc_cmd->add_option("--generations", mcfg.generations_max, "generation cap");
  mcmc_cmd->add_option("--sample-every", mcfg.sample_every, "thinning interval");
  mcmc_cmd->add_option("--runs", mcfg.runs, "independent runs");
  mcmc_cmd->add_option("--burnin", mcfg.burnin_fraction, "burn-in fraction");
  mcmc_cmd->add_option("--asdsf-target", mcfg.asdsf_target, "convergence target");
  mcmc_cmd->add_option("--alpha-prior", alpha_prior, "uniform | exponential");
  mcmc_cmd->add_option("--gamma-categories", mcfg.gamma_categories, "rate categories");
  mcmc_cmd->callback([&]() {
    const auto matrix = read_nexus_file(matrix_path);
    mcfg.alpha_prior = alpha_prior == "exponential" ? AlphaPrior::kExponential
                                                    : AlphaPrior::kUniform;
    const auto mc = mcmc_run(matrix, mcfg);
    for (std::size_t r = 0; r < mc.runs.size(); ++r) {
      std::string trees;
      std::string trace =
          "generation\tlog_posterior\tlog_likelihood\talpha\tpi1\tclock_rate\troot_age\n";
      for (const auto& s : mc.runs[r].samples) {
        trees += write_newick(s.tree) + "\n";
        char row[256];
        std::snprintf(row, sizeof row, "%lld\t%.6f\t%.6f\t%.6g\t%.6g\t%.6g\t%.6g\n",
                      static_cast<long long>(s.generation), s.log_posterior,
                      s.log_likelihood, s.alpha, s.pi1, s.clock_rate, s.root_age);
        trace += row;
      }
      const std::string k = std::to_string(r + 1);
      spit(out_prefix + "_run" + k + ".trees", trees);
      spit(out_prefix + "_run" + k + ".trace.tsv", trace);
    }
    std::printf("converged\t%s\nasdsf\t%.6g\ngenerations\t%lld\n",
                mc.converged ? "yes" : "no", mc.final_asdsf,
                static_cast<long long>(mc.generations));
  });

  // --- gqd ---
  std::string inferred_path, samples_path;
  auto* gqd_cmd = app.add_subcommand("gqd", "generalized quartet distance to a gold tree");
  gqd_cmd->add_option("--inferred", inferred_path, "inferred tree (newick)");
  gqd_cmd->add_option("--trees", samples_path, "newick file, one tree per line (median)");
  gqd_cmd->add_option("--gold", gold_path, "gold tree (newick)")->required();
  gqd_cmd->callback([&]() {
    const Tree gold = read_newick_file(gold_path);
    if (!inferred_path.empty()) {
      const auto r = gqd(read_newick_file(inferred_path), gold);
      std::printf("gqd\t%.6f\nbutterflies_gold\t%zu\ndiscordant\t%zu\n",
                  r.distance, r.butterflies_gold, r.discordant);
    } else if (!samples_path.empty()) {
      std::istringstream in(slurp(samples_path));
      std::string line;
      std::vector<Tree> samples;
      while (std::getline(in, line)) {
        if (!line.empty()) samples.push_back(parse_newick(line));
      }
      std::printf("gqd_median\t%.6f\n", posterior_gqd_median(samples, gold));
    } else {
      throw std::runtime_error("gqd: need --inferred or --trees");
    }
  });

  // --- simulate ---
  std::size_t n_chars = 100;
  double pi1 = 0.5, sim_alpha = 0.0, missing = 0.0;
  auto* sim_cmd = app.add_subcommand("simulate", "evolve binary characters on a tree");
  sim_cmd->add_option("--tree", tree_path, "newick tree with branch lengths")->required();
  sim_cmd->add_option("--out", out_path, "nexus file")->required();
  sim_cmd->add_option("--chars", n_chars, "character count");
  sim_cmd->add_option("--pi1", pi1, "stationary frequency of state 1");
  sim_cmd->add_option("--alpha", sim_alpha, "gamma shape (0 = homogeneous)");
  sim_cmd->add_option("--missing", missing, "missing-data fraction");
  sim_cmd->add_option("--seed", seed, "random seed");
  sim_cmd->callback([&]() {
    const Tree tree = read_newick_file(tree_path);
    const GammaRates gamma = sim_alpha > 0.0 ? discretize_gamma(sim_alpha, 4)
                                             : GammaRates::homogeneous();
    const auto matrix =
        simulate_matrix(tree, BinaryCTMC(pi1), gamma, n_chars, missing, seed);
    spit(out_path, write_nexus(matrix));
  });

  // --- pipeline ---
  std::string config_path;
  bool have_seed_override = false;
  std::uint64_t seed_override = 0;
  auto* pipe_cmd = app.add_subcommand("pipeline", "full workflow from a config file");
  pipe_cmd->add_option("--config", config_path, "JSON config")->required();
  pipe_cmd->add_option("--seed", seed_override, "override config seed")
      ->each([&](const std::string&) { have_seed_override = true; });
  pipe_cmd->callback([&]() {
    PipelineConfig cfg = load_pipeline_config(config_path);
    if (have_seed_override) cfg.seed = seed_override;
    const auto result = run_pipeline(cfg);
    std::fputs(format_report(result.report).c_str(), stdout);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
