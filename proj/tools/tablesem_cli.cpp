#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tablesem/dataset.hpp"
#include "tablesem/errors.hpp"
#include "tablesem/execute.hpp"
#include "tablesem/logical_form.hpp"
#include "tablesem/macro.hpp"
#include "tablesem/report.hpp"
#include "tablesem/synthetic.hpp"
#include "tablesem/table.hpp"
#include "tablesem/train.hpp"

namespace ts = tablesem;
namespace fs = std::filesystem;

namespace {

// Flags override whatever the config file set; only flags the user actually
// passed are applied.
struct ConfigFlags {
  std::string config_path;
  int beam = 0;
  int k = 0;
  std::string t_schedule;
  int passes = 0;
  long fallback_limit = 0;
  double lambda = 0.0;
  double eta = 0.0;
  int max_size = 0;
  unsigned seed = 0;
  std::string objective;
  std::string grammar;

  CLI::Option* o_beam = nullptr;
  CLI::Option* o_k = nullptr;
  CLI::Option* o_sched = nullptr;
  CLI::Option* o_passes = nullptr;
  CLI::Option* o_m = nullptr;
  CLI::Option* o_lambda = nullptr;
  CLI::Option* o_eta = nullptr;
  CLI::Option* o_max_size = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_objective = nullptr;
  CLI::Option* o_grammar = nullptr;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    o_beam = cmd->add_option("--beam,-B", beam, "beam size per chart cell");
    o_k = cmd->add_option("--neighbors,-K", k, "triggering neighbors");
    o_sched = cmd->add_option("--t-schedule", t_schedule,
                              "comma-separated fallback caps, one per pass");
    o_passes = cmd->add_option("--passes", passes, "training passes");
    o_m = cmd->add_option("--fallback-limit,-m", fallback_limit,
                          "total fallback calls allowed, -1 for unlimited");
    o_lambda = cmd->add_option("--lambda", lambda, "L1 strength");
    o_eta = cmd->add_option("--eta", eta, "learning rate");
    o_max_size = cmd->add_option("--max-size", max_size, "largest derivation size");
    o_seed = cmd->add_option("--seed", seed, "run seed recorded in the report");
    o_objective = cmd->add_option("--objective", objective, "pairwise | marginal");
    o_grammar = cmd->add_option("--grammar", grammar, "macro | base-only");
  }

  ts::TrainingConfig resolve() const {
    ts::TrainingConfig cfg;
    if (!config_path.empty()) cfg = ts::load_config_file(config_path);
    if (o_beam->count()) cfg.beam_size = beam;
    if (o_k->count()) cfg.k_neighbors = k;
    if (o_sched->count()) ts::apply_config_entry(cfg, "t_schedule", t_schedule);
    if (o_passes->count()) cfg.passes = passes;
    if (o_m->count()) cfg.fallback_limit = fallback_limit;
    if (o_lambda->count()) cfg.lambda = lambda;
    if (o_eta->count()) cfg.eta = eta;
    if (o_max_size->count()) cfg.max_size = max_size;
    if (o_seed->count()) cfg.seed = seed;
    if (o_objective->count()) cfg.objective = objective;
    if (o_grammar->count()) cfg.grammar_mode = grammar;
    return cfg;
  }
};

std::string join_pipe(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += '|';
    out += parts[i];
  }
  return out;
}

int cmd_train(const std::string& examples, const std::string& tables, const std::string& out,
              const ConfigFlags& flags) {
  ts::TrainingConfig cfg = flags.resolve();
  cfg.validate();
  ts::Dataset dataset = ts::load_dataset(examples, tables);
  ts::TableRegistry registry(tables);
  ts::TrainState state;
  ts::TrainReport report = ts::train(dataset, registry, cfg, state);

  fs::create_directories(out);
  ts::ArtifactPaths paths(out);
  ts::save_state(state, paths);
  ts::write_text_file(paths.report, ts::train_report_to_json(report));

  std::printf("trained %ld examples, %d passes\n", report.examples, cfg.passes);
  std::printf("coverage %.1f%%, %.1f partial forms/example, %.1f ms/example (final pass)\n",
              100.0 * report.coverage, report.avg_partial_lfs, report.avg_ms_per_example);
  std::printf("%ld macros, %ld macro rules, %ld fallback calls\n", report.macro_count,
              report.macro_rule_count, report.fallback_calls);
  std::printf("artifacts in %s\n", out.c_str());
  return 0;
}

int cmd_eval(const std::string& examples, const std::string& tables, const std::string& model_dir,
             const std::string& out, const ConfigFlags& flags) {
  ts::TrainingConfig cfg = flags.resolve();
  cfg.validate();
  ts::ArtifactPaths model_paths(model_dir);
  ts::TrainState state = ts::load_state(model_paths);
  ts::Dataset dataset = ts::load_dataset(examples, tables);
  ts::TableRegistry registry(tables);

  ts::EvalReport report;
  report.grammar_mode = cfg.grammar_mode;
  report.examples = static_cast<long>(dataset.examples.size());
  try {
    ts::TrainReport tr = ts::train_report_from_json(ts::read_text_file(model_paths.report));
    report.train_avg_partial_lfs = tr.avg_partial_lfs;
  } catch (const ts::Error&) {
    // no train report next to the model; leave the field zero
  }

  if (!dataset.examples.empty()) {
    const ts::Example& warm = dataset.examples.front();
    ts::predict(warm.utterance, registry.get(warm.table_path), state, cfg);
  }

  std::ostringstream tsv;
  double ms_sum = 0.0;
  double partial_sum = 0.0;
  for (const ts::Example& ex : dataset.examples) {
    const ts::KnowledgeBase& kb = registry.get(ex.table_path);
    auto t0 = std::chrono::steady_clock::now();
    ts::Prediction p = ts::predict(ex.utterance, kb, state, cfg);
    auto t1 = std::chrono::steady_clock::now();
    ms_sum += std::chrono::duration<double, std::milli>(t1 - t0).count();
    partial_sum += static_cast<double>(p.partial_lfs);
    report.base_rule_applications += p.base_rule_applications;

    bool correct = p.answered && ts::is_consistent(p.denotation, ex.targets);
    if (p.answered) ++report.answered;
    if (correct) ++report.correct;
    tsv << ex.id << '\t' << join_pipe(ts::denotation_strings(p.denotation)) << '\t'
        << join_pipe(ex.targets) << '\t' << (correct ? 1 : 0) << '\n';
  }
  const double n = static_cast<double>(std::max<long>(report.examples, 1));
  report.accuracy = static_cast<double>(report.correct) / n;
  report.coverage = static_cast<double>(report.answered) / n;
  report.predict_avg_partial_lfs = partial_sum / n;
  report.avg_ms_per_example = ms_sum / n;
  for (const ts::MacroEntry* e : state.store.by_frequency())
    report.macro_frequencies.emplace_back(e->template_str, e->freq);

  fs::create_directories(out);
  ts::write_text_file((fs::path(out) / "predictions.tsv").string(), tsv.str());
  ts::write_text_file((fs::path(out) / "report.json").string(), ts::eval_report_to_json(report));

  std::printf("evaluated %ld examples\n", report.examples);
  std::printf("accuracy %.1f%%, coverage %.1f%%\n", 100.0 * report.accuracy,
              100.0 * report.coverage);
  std::printf("%.1f partial forms/example, %.1f ms/example, %ld base rule applications\n",
              report.predict_avg_partial_lfs, report.avg_ms_per_example,
              report.base_rule_applications);
  std::printf("predictions in %s\n", out.c_str());
  return 0;
}

int cmd_predict(const std::string& model_dir, const std::string& table_path,
                const std::string& utterance, bool show_form, const ConfigFlags& flags) {
  ts::TrainingConfig cfg = flags.resolve();
  cfg.validate();
  ts::TrainState state = ts::load_state(ts::ArtifactPaths(model_dir));
  ts::TableFormat fmt = ts::TableFormat::Csv;
  if (table_path.size() >= 4 && table_path.compare(table_path.size() - 4, 4, ".tsv") == 0)
    fmt = ts::TableFormat::Tsv;
  ts::KnowledgeBase kb = ts::load_table(ts::read_text_file(table_path), fmt);

  ts::Prediction p = ts::predict(utterance, kb, state, cfg);
  if (!p.answered) {
    std::fprintf(stderr, "no prediction\n");
    return 0;
  }
  if (show_form) std::printf("%s\n", ts::display_string(p.derivation->lf).c_str());
  std::printf("%s\n", join_pipe(ts::denotation_strings(p.denotation)).c_str());
  return 0;
}

int cmd_inspect_macros(const std::string& macros_path) {
  ts::MacroStore store = ts::MacroStore::load(macros_path);
  std::vector<const ts::MacroEntry*> entries = store.by_frequency();
  const double total = static_cast<double>(std::max<long>(store.total_freq(), 1));
  std::printf("%-5s %-6s %-6s %s\n", "rank", "freq", "cum%", "template");
  long running = 0;
  int rank = 0;
  for (const ts::MacroEntry* e : entries) {
    running += e->freq;
    std::printf("%-5d %-6ld %-6.1f %s\n", ++rank, e->freq, 100.0 * running / total,
                e->template_str.c_str());
  }
  std::printf("%zu macros, %zu rules, total frequency %ld\n", store.macro_count(),
              store.rule_count(), store.total_freq());
  return 0;
}

int cmd_gen_synthetic(const std::string& out, long size, unsigned seed, long per_table) {
  ts::SyntheticConfig cfg;
  cfg.out_dir = out;
  cfg.size = size;
  cfg.seed = seed;
  cfg.examples_per_table = per_table;
  ts::SyntheticStats stats = ts::gen_synthetic(cfg);
  std::printf("wrote %ld examples over %ld tables to %s\n", stats.examples, stats.tables,
              out.c_str());
  for (const auto& [name, count] : stats.per_template)
    std::printf("  %-22s %ld\n", name.c_str(), count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic parser over single-table knowledge bases"};
  app.require_subcommand(1);

  auto* train_cmd = app.add_subcommand("train", "train a model from question/answer pairs");
  std::string tr_examples, tr_tables, tr_out;
  train_cmd->add_option("--examples", tr_examples, "examples TSV")->required();
  train_cmd->add_option("--tables", tr_tables, "directory table paths resolve against")
      ->required();
  train_cmd->add_option("--out", tr_out, "artifact output directory")->required();
  ConfigFlags tr_flags;
  tr_flags.add_to(train_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
  std::string ev_examples, ev_tables, ev_model, ev_out;
  eval_cmd->add_option("--examples", ev_examples, "examples TSV")->required();
  eval_cmd->add_option("--tables", ev_tables, "directory table paths resolve against")
      ->required();
  eval_cmd->add_option("--model-dir", ev_model, "directory holding training artifacts")
      ->required();
  eval_cmd->add_option("--out", ev_out, "output directory for predictions and report")
      ->required();
  ConfigFlags ev_flags;
  ev_flags.add_to(eval_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "answer one question against one table");
  std::string pr_model, pr_table, pr_utterance;
  bool pr_show_form = false;
  predict_cmd->add_option("--model-dir", pr_model, "directory holding training artifacts")
      ->required();
  predict_cmd->add_option("--table", pr_table, "table file (.csv or .tsv)")->required();
  predict_cmd->add_option("--utterance", pr_utterance, "question text")->required();
  predict_cmd->add_flag("--show-form", pr_show_form, "also print the logical form");
  ConfigFlags pr_flags;
  pr_flags.add_to(predict_cmd);

  auto* inspect_cmd = app.add_subcommand("inspect-macros", "rank stored macros by frequency");
  std::string in_macros;
  inspect_cmd->add_option("--macros", in_macros, "macro store file")->required();

  auto* gen_cmd = app.add_subcommand("gen-synthetic", "generate a synthetic corpus");
  std::string gn_out;
  long gn_size = 500;
  unsigned gn_seed = 7;
  long gn_per_table = 5;
  gen_cmd->add_option("--out", gn_out, "output directory")->required();
  gen_cmd->add_option("--size", gn_size, "number of examples");
  gen_cmd->add_option("--seed", gn_seed, "generator seed");
  gen_cmd->add_option("--per-table", gn_per_table, "examples sharing each table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(tr_examples, tr_tables, tr_out, tr_flags);
    if (eval_cmd->parsed()) return cmd_eval(ev_examples, ev_tables, ev_model, ev_out, ev_flags);
    if (predict_cmd->parsed())
      return cmd_predict(pr_model, pr_table, pr_utterance, pr_show_form, pr_flags);
    if (inspect_cmd->parsed()) return cmd_inspect_macros(in_macros);
    if (gen_cmd->parsed()) return cmd_gen_synthetic(gn_out, gn_size, gn_seed, gn_per_table);
  } catch (const ts::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ts::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
