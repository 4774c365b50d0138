#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cogphy/alignment.hpp"
#include "cogphy/mcmc.hpp"
#include "cogphy/tree_search.hpp"

namespace cogphy {

struct PipelineConfig {
  std::string wordlist_path;
  std::string gold_tree_path;  // empty: skip evaluation
  std::string output_dir = "out";
  std::string dataset_name;  // default: wordlist file stem
  std::uint64_t seed = 1;

  double trim_tau = 0.5;
  ScoringScheme scoring;
  // subset of {cognates, patterns, combined}, report order is fixed
  std::vector<std::string> character_types = {"cognates", "patterns",
                                              "combined"};
  std::string inference = "ml";  // ml | mcmc | both
  int ml_random_starts = 10;
  int ml_parsimony_starts = 10;
  int gamma_categories = 4;
  bool ascertainment_correction = false;
  McmcConfig mcmc;
  std::size_t posterior_draws = 1000;
};

// JSON config; unknown keys rejected so typos fail loudly.
PipelineConfig load_pipeline_config(const std::string& path);

struct ReportRow {
  std::string dataset;
  std::string character_type;
  std::string statistic;
  std::string value;
};

struct PipelineResult {
  std::vector<ReportRow> report;
};

// parse -> align -> trim -> patterns -> encode -> infer -> evaluate, with
// all artifacts written under the output directory. Identical config and
// seed give byte-identical outputs.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string format_report(const std::vector<ReportRow>& rows);

}  // namespace cogphy
