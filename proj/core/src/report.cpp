#include "tablesem/report.hpp"

#include <json.hpp>

#include "tablesem/errors.hpp"

namespace tablesem {
namespace {

using nlohmann::json;

json parse_with_schema(const std::string& text, const std::string& kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid report JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != "tablesem-report/1" ||
      j.value("kind", "") != kind) {
    throw ConfigError("unrecognized report schema");
  }
  return j;
}

json freq_to_json(const std::vector<std::pair<std::string, long>>& freqs) {
  json arr = json::array();
  for (const auto& [tmpl, freq] : freqs) {
    arr.push_back(json{{"template", tmpl}, {"freq", freq}});
  }
  return arr;
}

std::vector<std::pair<std::string, long>> freq_from_json(const json& arr) {
  std::vector<std::pair<std::string, long>> out;
  for (const auto& item : arr) {
    out.emplace_back(item.at("template").get<std::string>(), item.at("freq").get<long>());
  }
  return out;
}

}  // namespace

std::string train_report_to_json(const TrainReport& r) {
  json passes = json::array();
  for (const PassStats& p : r.passes) {
    passes.push_back(json{{"pass", p.pass},
                          {"covered", p.covered},
                          {"macro_path", p.macro_path},
                          {"fallback_induction", p.fallback_induction},
                          {"skipped", p.skipped},
                          {"avg_partial_lfs", p.avg_partial_lfs},
                          {"avg_ms", p.avg_ms}});
  }
  json j{{"schema", "tablesem-report/1"},
         {"kind", "train"},
         {"objective", r.objective},
         {"grammar_mode", r.grammar_mode},
         {"seed", r.seed},
         {"examples", r.examples},
         {"passes", passes},
         {"coverage", r.coverage},
         {"avg_partial_lfs", r.avg_partial_lfs},
         {"avg_ms_per_example", r.avg_ms_per_example},
         {"fallback_calls", r.fallback_calls},
         {"macro_count", r.macro_count},
         {"macro_rule_count", r.macro_rule_count},
         {"macro_frequencies", freq_to_json(r.macro_frequencies)}};
  return j.dump(2) + "\n";
}

TrainReport train_report_from_json(const std::string& text) {
  json j = parse_with_schema(text, "train");
  TrainReport r;
  r.objective = j.value("objective", "");
  r.grammar_mode = j.value("grammar_mode", "");
  r.seed = j.value("seed", 0u);
  r.examples = j.value("examples", 0L);
  for (const auto& pj : j.value("passes", json::array())) {
    PassStats p;
    p.pass = pj.value("pass", 0);
    p.covered = pj.value("covered", 0L);
    p.macro_path = pj.value("macro_path", 0L);
    p.fallback_induction = pj.value("fallback_induction", 0L);
    p.skipped = pj.value("skipped", 0L);
    p.avg_partial_lfs = pj.value("avg_partial_lfs", 0.0);
    p.avg_ms = pj.value("avg_ms", 0.0);
    r.passes.push_back(p);
  }
  r.coverage = j.value("coverage", 0.0);
  r.avg_partial_lfs = j.value("avg_partial_lfs", 0.0);
  r.avg_ms_per_example = j.value("avg_ms_per_example", 0.0);
  r.fallback_calls = j.value("fallback_calls", 0L);
  r.macro_count = j.value("macro_count", 0L);
  r.macro_rule_count = j.value("macro_rule_count", 0L);
  r.macro_frequencies = freq_from_json(j.value("macro_frequencies", json::array()));
  return r;
}

std::string eval_report_to_json(const EvalReport& r) {
  json j{{"schema", "tablesem-report/1"},
         {"kind", "eval"},
         {"grammar_mode", r.grammar_mode},
         {"examples", r.examples},
         {"correct", r.correct},
         {"answered", r.answered},
         {"accuracy", r.accuracy},
         {"coverage", r.coverage},
         {"train_avg_partial_lfs", r.train_avg_partial_lfs},
         {"predict_avg_partial_lfs", r.predict_avg_partial_lfs},
         {"avg_ms_per_example", r.avg_ms_per_example},
         {"base_rule_applications", r.base_rule_applications},
         {"macro_frequencies", freq_to_json(r.macro_frequencies)}};
  return j.dump(2) + "\n";
}

EvalReport eval_report_from_json(const std::string& text) {
  json j = parse_with_schema(text, "eval");
  EvalReport r;
  r.grammar_mode = j.value("grammar_mode", "");
  r.examples = j.value("examples", 0L);
  r.correct = j.value("correct", 0L);
  r.answered = j.value("answered", 0L);
  r.accuracy = j.value("accuracy", 0.0);
  r.coverage = j.value("coverage", 0.0);
  r.train_avg_partial_lfs = j.value("train_avg_partial_lfs", 0.0);
  r.predict_avg_partial_lfs = j.value("predict_avg_partial_lfs", 0.0);
  r.avg_ms_per_example = j.value("avg_ms_per_example", 0.0);
  r.base_rule_applications = j.value("base_rule_applications", 0L);
  r.macro_frequencies = freq_from_json(j.value("macro_frequencies", json::array()));
  return r;
}

}  // namespace tablesem
