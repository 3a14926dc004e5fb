#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tablesem {

struct PassStats {
  int pass = 0;
  long covered = 0;
  long macro_path = 0;
  long fallback_induction = 0;
  long skipped = 0;
  double avg_partial_lfs = 0.0;
  double avg_ms = 0.0;
};

struct TrainReport {
  std::string objective;
  std::string grammar_mode;
  unsigned seed = 0;
  long examples = 0;
  std::vector<PassStats> passes;
  double coverage = 0.0;         // final pass, fraction of examples
  double avg_partial_lfs = 0.0;  // final pass
  double avg_ms_per_example = 0.0;
  long fallback_calls = 0;
  long macro_count = 0;
  long macro_rule_count = 0;
  std::vector<std::pair<std::string, long>> macro_frequencies;  // template, freq
};

struct EvalReport {
  std::string grammar_mode;
  long examples = 0;
  long correct = 0;
  long answered = 0;
  double accuracy = 0.0;
  double coverage = 0.0;  // fraction with a nonempty prediction
  double train_avg_partial_lfs = 0.0;
  double predict_avg_partial_lfs = 0.0;
  double avg_ms_per_example = 0.0;
  long base_rule_applications = 0;
  std::vector<std::pair<std::string, long>> macro_frequencies;
};

// Versioned JSON with deterministic key order. Parsers throw ConfigError on
// a missing or mismatched schema tag.
std::string train_report_to_json(const TrainReport& r);
TrainReport train_report_from_json(const std::string& text);
std::string eval_report_to_json(const EvalReport& r);
EvalReport eval_report_from_json(const std::string& text);

}  // namespace tablesem
