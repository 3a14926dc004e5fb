#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tablesem/dataset.hpp"
#include "tablesem/errors.hpp"
#include "tablesem/report.hpp"
#include "tablesem/synthetic.hpp"
#include "tablesem/train.hpp"

using namespace tablesem;
namespace fs = std::filesystem;

namespace {

// Shared generated corpus; built once, removed at process exit.
struct Corpus {
  fs::path dir = "train_synth_tmp";
  Dataset ds;
  Corpus() {
    fs::remove_all(dir);
    SyntheticConfig cfg;
    cfg.size = 35;
    cfg.seed = 3;
    cfg.examples_per_table = 5;
    cfg.out_dir = dir.string();
    gen_synthetic(cfg);
    ds = load_dataset((dir / "examples.tsv").string(), dir.string());
  }
  ~Corpus() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

const Corpus& corpus() {
  static Corpus c;
  return c;
}

TableRegistry& registry() {
  static TableRegistry reg(corpus().ds.base_dir);
  return reg;
}

TrainingConfig small_cfg() {
  TrainingConfig cfg;
  cfg.beam_size = 30;
  cfg.k_neighbors = 10;
  cfg.k_max = 50;
  cfg.passes = 2;
  cfg.t_schedule = {4000, 4000};
  cfg.max_size = 10;
  cfg.seed = 5;
  return cfg;
}

void zero_timings(TrainReport& r) {
  r.avg_ms_per_example = 0.0;
  for (PassStats& p : r.passes) p.avg_ms = 0.0;
}

}  // namespace

TEST_CASE("config entries accept both spellings and choke on junk") {
  TrainingConfig cfg;
  apply_config_entry(cfg, "beam", "25");
  CHECK(cfg.beam_size == 25);
  apply_config_entry(cfg, "beam_size", "40");
  CHECK(cfg.beam_size == 40);
  apply_config_entry(cfg, "k", "7");
  CHECK(cfg.k_neighbors == 7);
  apply_config_entry(cfg, "t_schedule", "100, 200 ,0");
  CHECK(cfg.t_schedule == std::vector<long>{100, 200, 0});
  apply_config_entry(cfg, "m", "9");
  CHECK(cfg.fallback_limit == 9);
  apply_config_entry(cfg, "grammar", "base-only");
  CHECK(cfg.grammar_mode == "base-only");
  apply_config_entry(cfg, "lambda", "1e-4");
  CHECK(cfg.lambda == 1e-4);
  apply_config_entry(cfg, "seed", "17");
  CHECK(cfg.seed == 17u);

  CHECK_THROWS_AS(apply_config_entry(cfg, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "beam", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "beam", "5x"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "lambda", "1e-5x"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "t_schedule", ""), ConfigError);
}

TEST_CASE("config files parse comments, blanks, and padding") {
  const std::string path = "train_cfg_tmp.cfg";
  {
    std::ofstream out(path);
    out << "# training setup\n"
        << "beam = 25\n"
        << "\n"
        << "k=7   # neighbors\n"
        << "t_schedule = 100, 200 , 0\n"
        << "passes=3\n"
        << "grammar=base-only\n";
  }
  TrainingConfig cfg = load_config_file(path);
  CHECK(cfg.beam_size == 25);
  CHECK(cfg.k_neighbors == 7);
  CHECK(cfg.t_schedule == std::vector<long>{100, 200, 0});
  CHECK(cfg.passes == 3);
  CHECK(cfg.grammar_mode == "base-only");
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_config_file("no_such_config.cfg"), ConfigError);
  {
    std::ofstream out(path);
    out << "beam 25\n";
  }
  CHECK_THROWS_AS(load_config_file(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("configuration validation catches each bad field") {
  TrainingConfig good;
  CHECK_NOTHROW(good.validate());

  auto broken = [](auto&& tweak) {
    TrainingConfig c;
    tweak(c);
    return c;
  };
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.beam_size = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.k_neighbors = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.k_max = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.passes = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.passes = 2; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.t_schedule = {5000, -1, 0}; }).validate(),
                  ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.fallback_limit = -2; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.lambda = -1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.eta = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.max_size = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.objective = "hinge"; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.grammar_mode = "macros"; }).validate(),
                  ConfigError);
  CHECK_THROWS_AS(broken([](TrainingConfig& c) { c.min_doc_freq = 1.5; }).validate(), ConfigError);
}

TEST_CASE("training rejects empty datasets and bad configs") {
  Dataset empty;
  TrainState state;
  CHECK_THROWS_AS(train(empty, registry(), small_cfg(), state), ConfigError);

  TrainingConfig bad = small_cfg();
  bad.t_schedule = {4000};  // two passes, one cap
  CHECK_THROWS_AS(train(corpus().ds, registry(), bad, state), ConfigError);
}

TEST_CASE("zero fallback budget on a cold start covers nothing") {
  TrainingConfig cfg = small_cfg();
  cfg.passes = 1;
  cfg.t_schedule = {0};
  TrainState state;
  TrainReport report = train(corpus().ds, registry(), cfg, state);
  CHECK(report.examples == 35);
  CHECK(report.coverage == 0.0);
  CHECK(report.fallback_calls == 0);
  CHECK(report.macro_count == 0);
  CHECK(report.passes[0].skipped == 35);
  CHECK(report.passes[0].macro_path == 0);
  CHECK(state.model.weights.empty());
}

TEST_CASE("fallback_limit caps total base-grammar parses") {
  TrainingConfig cfg = small_cfg();
  cfg.passes = 1;
  cfg.t_schedule = {4000};
  cfg.fallback_limit = 0;
  TrainState state;
  TrainReport report = train(corpus().ds, registry(), cfg, state);
  CHECK(report.fallback_calls == 0);
  CHECK(report.coverage == 0.0);

  cfg.fallback_limit = 2;
  TrainState state2;
  TrainReport r2 = train(corpus().ds, registry(), cfg, state2);
  CHECK(r2.fallback_calls >= 1);
  CHECK(r2.fallback_calls <= 2);
}

TEST_CASE("macro training covers examples and is deterministic") {
  TrainingConfig cfg = small_cfg();

  std::vector<ExampleTrace> traces;
  TrainState state;
  TrainReport report = train(corpus().ds, registry(), cfg, state, &traces);

  CHECK(report.examples == 35);
  CHECK(report.grammar_mode == "macro");
  REQUIRE(report.passes.size() == 2);
  CHECK(report.coverage > 0.0);
  CHECK(report.macro_count >= 1);
  CHECK(report.macro_rule_count >= 1);
  CHECK(report.fallback_calls >= 1);
  CHECK(report.macro_frequencies.size() == static_cast<size_t>(report.macro_count));

  REQUIRE(traces.size() == 70);
  // With nothing associated yet, the very first example cannot take the
  // macro path.
  CHECK(traces[0].pass == 1);
  CHECK(traces[0].path != "macro-update");
  for (const ExampleTrace& t : traces) {
    CAPTURE(t.id);
    bool known = t.path == "macro-update" || t.path == "fallback-induction" || t.path == "skip";
    CHECK(known);
    CHECK(t.covered == (t.path != "skip"));
  }
  // Once macros exist, the second pass exercises the triggered path.
  CHECK(report.passes[1].macro_path >= 1);

  // Same dataset, same config, fresh state: identical counts, weights, and
  // macros. Only wall-clock timings may differ.
  TrainState state_b;
  TrainReport rb = train(corpus().ds, registry(), cfg, state_b);
  zero_timings(report);
  zero_timings(rb);
  CHECK(train_report_to_json(rb) == train_report_to_json(report));
  CHECK(state_b.model.weights == state.model.weights);
  CHECK(state_b.model.accum == state.model.accum);
  CHECK(state_b.store.macro_count() == state.store.macro_count());
  CHECK(state_b.store.associations().size() == state.store.associations().size());
}

TEST_CASE("a warm store keeps covering with the fallback switched off") {
  TrainingConfig cfg = small_cfg();
  TrainState state;
  train(corpus().ds, registry(), cfg, state);
  REQUIRE(state.store.macro_count() >= 1);

  TrainingConfig warm = small_cfg();
  warm.passes = 1;
  warm.t_schedule = {0};
  TrainReport report = train(corpus().ds, registry(), warm, state);
  CHECK(report.fallback_calls == 0);
  CHECK(report.coverage > 0.0);
  // With the base grammar off, every covered example went through macros.
  CHECK(report.passes[0].macro_path == report.passes[0].covered);
}

TEST_CASE("base-only training updates the model without a store") {
  TrainingConfig cfg = small_cfg();
  cfg.grammar_mode = "base-only";
  cfg.passes = 1;
  cfg.t_schedule = {4000};

  std::vector<ExampleTrace> traces;
  TrainState state;
  TrainReport report = train(corpus().ds, registry(), cfg, state, &traces);
  CHECK(report.coverage > 0.0);
  CHECK(report.macro_count == 0);
  CHECK(report.fallback_calls == 0);
  for (const ExampleTrace& t : traces) {
    CHECK((t.path == "base-update" || t.path == "skip"));
  }
  CHECK_FALSE(state.model.weights.empty());
}

TEST_CASE("marginal objective trains end to end") {
  TrainingConfig cfg = small_cfg();
  cfg.objective = "marginal";
  cfg.passes = 1;
  cfg.t_schedule = {4000};
  TrainState state;
  TrainReport report = train(corpus().ds, registry(), cfg, state);
  CHECK(report.objective == "marginal");
  CHECK(report.coverage > 0.0);
}

TEST_CASE("artifact paths hang off the output directory") {
  ArtifactPaths p("out");
  CHECK(p.model == "out/model.tsv");
  CHECK(p.macros == "out/macros.tsv");
  CHECK(p.associations == "out/associations.tsv");
  CHECK(p.vocab == "out/vocab.tsv");
  CHECK(p.report == "out/report.json");
  ArtifactPaths slash("out/");
  CHECK(slash.model == "out/model.tsv");
}

TEST_CASE("saved state restores and predicts identically") {
  TrainingConfig cfg = small_cfg();
  TrainState state;
  train(corpus().ds, registry(), cfg, state);

  fs::path dir = "train_state_tmp";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ArtifactPaths paths(dir.string());
  save_state(state, paths);

  TrainState loaded = load_state(paths);
  CHECK(loaded.model.weights == state.model.weights);
  CHECK(loaded.model.accum == state.model.accum);
  CHECK(loaded.doc_freq == state.doc_freq);
  CHECK(loaded.store.macro_count() == state.store.macro_count());
  CHECK(loaded.store.rule_count() == state.store.rule_count());
  CHECK(loaded.store.associations().size() == state.store.associations().size());

  for (size_t i = 0; i < 5; ++i) {
    const Example& ex = corpus().ds.examples[i];
    CAPTURE(ex.id);
    const KnowledgeBase& kb = registry().get(ex.table_path);
    Prediction a = predict(ex.utterance, kb, state, cfg);
    Prediction b = predict(ex.utterance, kb, loaded, cfg);
    CHECK(a.answered == b.answered);
    CHECK(a.denotation == b.denotation);
    CHECK(a.partial_lfs == b.partial_lfs);
  }

  // Corrupting the vocabulary file breaks loading.
  write_text_file(paths.vocab, "token without tab\n");
  CHECK_THROWS_AS(load_state(paths), MissingModel);
  fs::remove(paths.vocab);
  CHECK_THROWS_AS(load_state(paths), MissingModel);
  fs::remove_all(dir);
}

TEST_CASE("macro-mode prediction never touches compositional rules") {
  TrainingConfig cfg = small_cfg();
  TrainState state;
  train(corpus().ds, registry(), cfg, state);

  long answered = 0;
  for (size_t i = 0; i < 10; ++i) {
    const Example& ex = corpus().ds.examples[i];
    const KnowledgeBase& kb = registry().get(ex.table_path);
    Prediction p = predict(ex.utterance, kb, state, cfg);
    CHECK(p.base_rule_applications == 0);
    if (p.answered) {
      ++answered;
      CHECK_FALSE(p.denotation.empty());
    }
  }
  CHECK(answered > 0);

  // A cold state triggers nothing and stays silent.
  TrainState cold;
  const Example& ex = corpus().ds.examples[0];
  Prediction p = predict(ex.utterance, registry().get(ex.table_path), cold, cfg);
  CHECK_FALSE(p.answered);
  CHECK(p.partial_lfs >= 0);

  // Base-only prediction works from a cold start and composes freely.
  TrainingConfig base_cfg = small_cfg();
  base_cfg.grammar_mode = "base-only";
  Prediction pb = predict(ex.utterance, registry().get(ex.table_path), cold, base_cfg);
  CHECK(pb.answered);
  CHECK(pb.base_rule_applications > 0);
}
