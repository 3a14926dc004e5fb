#pragma once

#include <map>
#include <string>
#include <vector>

#include "tablesem/dataset.hpp"
#include "tablesem/derivation.hpp"
#include "tablesem/knn.hpp"
#include "tablesem/learner.hpp"
#include "tablesem/macro.hpp"
#include "tablesem/report.hpp"

namespace tablesem {

struct TrainingConfig {
  int beam_size = 100;   // derivations kept per chart cell
  int k_neighbors = 40;  // triggering neighbors
  int k_max = 100;       // precomputed neighbor list length
  int passes = 3;
  std::vector<long> t_schedule = {5000, 0, 0};  // per-pass fallback caps
  long fallback_limit = -1;                     // total fallback calls; -1 unlimited
  double lambda = 1e-5;
  double eta = 0.1;
  int max_size = 12;
  unsigned seed = 1;
  std::string objective = "pairwise";  // pairwise | marginal
  std::string grammar_mode = "macro";  // macro | base-only
  double min_doc_freq = 0.02;

  void validate() const;  // throws ConfigError
};

// key=value lines; '#' starts a comment. Shared with the flag layer so both
// spellings behave identically. Throws ConfigError on unknown keys or
// unparseable values.
void apply_config_entry(TrainingConfig& cfg, const std::string& key, const std::string& value);
TrainingConfig load_config_file(const std::string& path);

struct TrainState {
  Model model;
  MacroStore store;
  std::map<std::string, double> doc_freq;
};

struct ExampleTrace {
  std::string id;
  int pass = 0;
  std::string path;  // macro-update | fallback-induction | skip
  bool covered = false;
  long partial_lfs = 0;
  double ms = 0.0;
};

TrainReport train(const Dataset& dataset, TableRegistry& tables, const TrainingConfig& cfg,
                  TrainState& state, std::vector<ExampleTrace>* traces = nullptr);

struct Prediction {
  bool answered = false;
  ValueSet denotation;
  DerivPtr derivation;
  long partial_lfs = 0;
  long base_rule_applications = 0;
};

// Triggers macro rules against the associations in state and parses with
// them alone (base-only mode parses with the compositional grammar
// instead). Never updates state.
Prediction predict(const std::string& utterance, const KnowledgeBase& kb, const TrainState& state,
                   const TrainingConfig& cfg);

struct ArtifactPaths {
  std::string model;
  std::string macros;
  std::string associations;
  std::string vocab;
  std::string report;

  explicit ArtifactPaths(const std::string& dir);
};

void save_state(const TrainState& state, const ArtifactPaths& paths);
TrainState load_state(const ArtifactPaths& paths);

}  // namespace tablesem
