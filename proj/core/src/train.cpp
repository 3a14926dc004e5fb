#include "tablesem/train.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tablesem/errors.hpp"
#include "tablesem/execute.hpp"
#include "tablesem/grammar.hpp"
#include "tablesem/parse.hpp"
#include "tablesem/text.hpp"

namespace tablesem {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + value);
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + value);
  }
}

const std::vector<const Rule*>& base_rule_ptrs() {
  static const std::vector<const Rule*> ptrs = [] {
    std::vector<const Rule*> v;
    for (const Rule& r : base_rules()) v.push_back(&r);
    return v;
  }();
  return ptrs;
}

// Union of the macro rules behind the triggered utterances, deduped and
// ordered by rule id so the active grammar never depends on neighbor order.
std::vector<const Rule*> triggered_rules(const MacroStore& store,
                                         const std::vector<std::string>& ids) {
  std::map<std::string, const Rule*> by_id;
  for (const std::string& id : ids) {
    auto it = store.associations().find(id);
    if (it == store.associations().end()) continue;
    for (const Rule* r : store.rules_for(it->second.macro_serial)) by_id.emplace(r->id, r);
  }
  std::vector<const Rule*> out;
  out.reserve(by_id.size());
  for (const auto& [id, r] : by_id) out.push_back(r);
  return out;
}

DerivPtr first_consistent(const std::vector<DerivPtr>& candidates,
                          const std::vector<std::string>& targets) {
  for (const DerivPtr& d : candidates)
    if (is_consistent(d->denotation, targets)) return d;
  return nullptr;
}

DerivPtr first_inconsistent(const std::vector<DerivPtr>& candidates,
                            const std::vector<std::string>& targets) {
  for (const DerivPtr& d : candidates)
    if (!is_consistent(d->denotation, targets)) return d;
  return nullptr;
}

void update_model(Model& model, const std::string& objective,
                  const std::vector<std::string>& lemmas,
                  const std::vector<DerivPtr>& candidates,
                  const std::vector<std::string>& targets) {
  if (objective == "pairwise") {
    DerivPtr pos = first_consistent(candidates, targets);
    DerivPtr neg = first_inconsistent(candidates, targets);
    if (!pos || !neg) return;
    FeatureVector fp = featurize(lemmas, *pos);
    FeatureVector fn = featurize(lemmas, *neg);
    ascend(model, pairwise_gradient(fp, pos->score, fn, neg->score));
    return;
  }
  std::vector<FeatureVector> feats;
  std::vector<double> scores;
  std::vector<bool> flags;
  feats.reserve(candidates.size());
  for (const DerivPtr& d : candidates) {
    feats.push_back(featurize(lemmas, *d));
    scores.push_back(d->score);
    flags.push_back(is_consistent(d->denotation, targets));
  }
  ascend(model, marginal_gradient(feats, scores, flags));
}

struct TrainContext {
  const TrainingConfig& cfg;
  TrainState& state;
  const KnnIndex& index;
  const std::map<std::string, std::vector<std::string>>& trig;
  std::set<std::string>& associated;
  long& fallback_calls;
  long fallback_cap_this_pass = 0;
};

// One Algorithm-1 step: trigger, parse with the triggered macro rules,
// update on a consistent hit, otherwise fall back to the base grammar under
// the cap and induce a macro from whatever it finds.
void train_example_macro(const Example& ex, const KnowledgeBase& kb, TrainContext& ctx,
                         ExampleTrace& trace) {
  const TrainingConfig& cfg = ctx.cfg;
  std::vector<std::string> tokens = tokenize(ex.utterance);
  std::vector<std::string> lemmas = feature_lemmas(tokens);
  DerivationScorer scorer = [&](const Derivation& d) {
    return ctx.state.model.score(featurize(lemmas, d));
  };

  std::vector<std::string> near =
      nearest_in_set(ctx.index, ex.id, ctx.associated, cfg.k_neighbors);
  std::vector<const Rule*> rules = triggered_rules(ctx.state.store, near);

  ParseOptions macro_opts;
  macro_opts.beam_size = cfg.beam_size;
  macro_opts.max_size = cfg.max_size;
  ParseResult res = parse(kb, tokens, rules, scorer, macro_opts);
  trace.partial_lfs += res.partial_lfs_generated;

  DerivPtr top = first_consistent(res.candidates, ex.targets);
  if (top) {
    update_model(ctx.state.model, cfg.objective, lemmas, res.candidates, ex.targets);
    Macro m = extract_macro(top);
    ctx.state.store.add_or_bump(m);
    ctx.state.store.associate({ex.id, ctx.trig.at(ex.id), m.serialization, top->canon});
    ctx.associated.insert(ex.id);
    trace.path = "macro-update";
    trace.covered = true;
    return;
  }

  long t_cap = ctx.fallback_cap_this_pass;
  bool budget_left =
      cfg.fallback_limit < 0 || ctx.fallback_calls < cfg.fallback_limit;
  if (t_cap == 0 || !budget_left) {
    trace.path = "skip";
    return;
  }

  ++ctx.fallback_calls;
  StopHook stop = [&](const DerivPtr& d) { return is_consistent(d->denotation, ex.targets); };
  ParseOptions base_opts;
  base_opts.beam_size = cfg.beam_size;
  base_opts.max_size = cfg.max_size;
  base_opts.lf_cap = t_cap;
  ParseResult fres = parse(kb, tokens, base_rule_ptrs(), scorer, base_opts, stop);
  trace.partial_lfs += fres.partial_lfs_generated;

  DerivPtr hit = first_consistent(fres.candidates, ex.targets);
  if (hit) {
    // the parameters are deliberately left alone on this path
    Macro m = extract_macro(hit);
    ctx.state.store.add_or_bump(m);
    ctx.state.store.associate({ex.id, ctx.trig.at(ex.id), m.serialization, hit->canon});
    ctx.associated.insert(ex.id);
    trace.path = "fallback-induction";
    trace.covered = true;
    return;
  }
  trace.path = "skip";
}

// Baseline: every example parses with the full compositional grammar and
// updates the model on a consistent hit. No store, no triggering.
void train_example_base(const Example& ex, const KnowledgeBase& kb, TrainContext& ctx,
                        ExampleTrace& trace) {
  const TrainingConfig& cfg = ctx.cfg;
  std::vector<std::string> tokens = tokenize(ex.utterance);
  std::vector<std::string> lemmas = feature_lemmas(tokens);
  DerivationScorer scorer = [&](const Derivation& d) {
    return ctx.state.model.score(featurize(lemmas, d));
  };
  ParseOptions opts;
  opts.beam_size = cfg.beam_size;
  opts.max_size = cfg.max_size;
  ParseResult res = parse(kb, tokens, base_rule_ptrs(), scorer, opts);
  trace.partial_lfs += res.partial_lfs_generated;
  if (first_consistent(res.candidates, ex.targets)) {
    update_model(ctx.state.model, cfg.objective, lemmas, res.candidates, ex.targets);
    trace.path = "base-update";
    trace.covered = true;
  } else {
    trace.path = "skip";
  }
}

}  // namespace

void TrainingConfig::validate() const {
  if (beam_size < 1) throw ConfigError("beam_size must be at least 1");
  if (k_neighbors < 1) throw ConfigError("k_neighbors must be at least 1");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (passes < 1) throw ConfigError("passes must be at least 1");
  if (static_cast<int>(t_schedule.size()) != passes)
    throw ConfigError("t_schedule has " + std::to_string(t_schedule.size()) +
                      " entries for " + std::to_string(passes) + " passes");
  for (long t : t_schedule)
    if (t < 0) throw ConfigError("t_schedule entries must be nonnegative");
  if (fallback_limit < -1) throw ConfigError("fallback_limit must be -1 or nonnegative");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (eta <= 0.0) throw ConfigError("eta must be positive");
  if (max_size < 1) throw ConfigError("max_size must be at least 1");
  if (objective != "pairwise" && objective != "marginal")
    throw ConfigError("objective must be pairwise or marginal");
  if (grammar_mode != "macro" && grammar_mode != "base-only")
    throw ConfigError("grammar must be macro or base-only");
  if (min_doc_freq < 0.0 || min_doc_freq > 1.0)
    throw ConfigError("min_doc_freq must be in [0, 1]");
}

void apply_config_entry(TrainingConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "beam" || key == "beam_size") {
    cfg.beam_size = static_cast<int>(parse_long(key, value));
  } else if (key == "k" || key == "k_neighbors") {
    cfg.k_neighbors = static_cast<int>(parse_long(key, value));
  } else if (key == "k_max") {
    cfg.k_max = static_cast<int>(parse_long(key, value));
  } else if (key == "passes") {
    cfg.passes = static_cast<int>(parse_long(key, value));
  } else if (key == "t_schedule") {
    std::vector<long> sched;
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) sched.push_back(parse_long(key, trim(part)));
    if (sched.empty()) throw ConfigError("t_schedule must list at least one cap");
    cfg.t_schedule = sched;
  } else if (key == "fallback_limit" || key == "m") {
    cfg.fallback_limit = parse_long(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_double(key, value);
  } else if (key == "eta") {
    cfg.eta = parse_double(key, value);
  } else if (key == "max_size") {
    cfg.max_size = static_cast<int>(parse_long(key, value));
  } else if (key == "seed") {
    cfg.seed = static_cast<unsigned>(parse_long(key, value));
  } else if (key == "objective") {
    cfg.objective = value;
  } else if (key == "grammar" || key == "grammar_mode") {
    cfg.grammar_mode = value;
  } else if (key == "min_doc_freq") {
    cfg.min_doc_freq = parse_double(key, value);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

TrainingConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  TrainingConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

TrainReport train(const Dataset& dataset, TableRegistry& tables, const TrainingConfig& cfg,
                  TrainState& state, std::vector<ExampleTrace>* traces) {
  cfg.validate();
  if (dataset.examples.empty()) throw ConfigError("dataset has no examples");

  state.model.lambda = cfg.lambda;
  state.model.eta = cfg.eta;

  std::vector<std::vector<std::string>> docs;
  docs.reserve(dataset.examples.size());
  for (const Example& ex : dataset.examples) docs.push_back(tokenize(ex.utterance));
  state.doc_freq = compute_doc_freq(docs);

  std::map<std::string, std::vector<std::string>> trig;
  for (size_t i = 0; i < dataset.examples.size(); ++i)
    trig[dataset.examples[i].id] =
        trigger_tokens(docs[i], state.doc_freq, cfg.min_doc_freq);

  KnnIndex index = KnnIndex::build(trig, cfg.k_max);

  std::set<std::string> associated;
  for (const auto& [id, a] : state.store.associations()) associated.insert(id);

  long fallback_calls = 0;
  TrainContext ctx{cfg, state, index, trig, associated, fallback_calls};

  TrainReport report;
  report.objective = cfg.objective;
  report.grammar_mode = cfg.grammar_mode;
  report.seed = cfg.seed;
  report.examples = static_cast<long>(dataset.examples.size());

  for (int pass = 0; pass < cfg.passes; ++pass) {
    ctx.fallback_cap_this_pass = cfg.t_schedule[pass];
    PassStats ps;
    ps.pass = pass + 1;
    double partial_sum = 0.0;
    double ms_sum = 0.0;
    for (const Example& ex : dataset.examples) {
      auto t0 = std::chrono::steady_clock::now();
      ExampleTrace trace;
      trace.id = ex.id;
      trace.pass = pass + 1;
      const KnowledgeBase& kb = tables.get(ex.table_path);
      if (cfg.grammar_mode == "base-only")
        train_example_base(ex, kb, ctx, trace);
      else
        train_example_macro(ex, kb, ctx, trace);
      auto t1 = std::chrono::steady_clock::now();
      trace.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

      if (trace.covered) ++ps.covered;
      if (trace.path == "macro-update" || trace.path == "base-update") ++ps.macro_path;
      if (trace.path == "fallback-induction") ++ps.fallback_induction;
      if (trace.path == "skip") ++ps.skipped;
      partial_sum += static_cast<double>(trace.partial_lfs);
      ms_sum += trace.ms;
      if (traces) traces->push_back(trace);
    }
    double n = static_cast<double>(dataset.examples.size());
    ps.avg_partial_lfs = partial_sum / n;
    ps.avg_ms = ms_sum / n;
    report.passes.push_back(ps);
  }

  const PassStats& last = report.passes.back();
  report.coverage = static_cast<double>(last.covered) / static_cast<double>(report.examples);
  report.avg_partial_lfs = last.avg_partial_lfs;
  report.avg_ms_per_example = last.avg_ms;
  report.fallback_calls = fallback_calls;
  report.macro_count = static_cast<long>(state.store.macro_count());
  report.macro_rule_count = static_cast<long>(state.store.rule_count());
  for (const MacroEntry* e : state.store.by_frequency())
    report.macro_frequencies.emplace_back(e->template_str, e->freq);
  return report;
}

Prediction predict(const std::string& utterance, const KnowledgeBase& kb, const TrainState& state,
                   const TrainingConfig& cfg) {
  std::vector<std::string> tokens = tokenize(utterance);
  std::vector<std::string> lemmas = feature_lemmas(tokens);
  DerivationScorer scorer = [&](const Derivation& d) {
    return state.model.score(featurize(lemmas, d));
  };

  std::vector<const Rule*> rules;
  if (cfg.grammar_mode == "base-only") {
    rules = base_rule_ptrs();
  } else {
    std::vector<std::string> query = trigger_tokens(tokens, state.doc_freq, cfg.min_doc_freq);
    std::map<std::string, std::vector<std::string>> candidates;
    for (const auto& [id, a] : state.store.associations()) candidates[id] = a.trigger_toks;
    std::vector<std::string> near = nearest_by_tokens(query, candidates, cfg.k_neighbors);
    rules = triggered_rules(state.store, near);
  }

  ParseOptions opts;
  opts.beam_size = cfg.beam_size;
  opts.max_size = cfg.max_size;
  ParseResult res = parse(kb, tokens, rules, scorer, opts);

  Prediction p;
  p.partial_lfs = res.partial_lfs_generated;
  p.base_rule_applications = res.base_compositional_applications;
  if (!res.candidates.empty()) {
    p.answered = true;
    p.derivation = res.candidates.front();
    p.denotation = res.candidates.front()->denotation;
  }
  return p;
}

ArtifactPaths::ArtifactPaths(const std::string& dir) {
  std::string base = dir;
  if (!base.empty() && base.back() != '/') base += '/';
  model = base + "model.tsv";
  macros = base + "macros.tsv";
  associations = base + "associations.tsv";
  vocab = base + "vocab.tsv";
  report = base + "report.json";
}

void save_state(const TrainState& state, const ArtifactPaths& paths) {
  save_model(state.model, paths.model);
  state.store.save(paths.macros);
  state.store.save_associations(paths.associations);
  std::ostringstream out;
  char buf[64];
  for (const auto& [token, freq] : state.doc_freq) {
    std::snprintf(buf, sizeof(buf), "%.17g", freq);
    out << token << '\t' << buf << '\n';
  }
  write_text_file(paths.vocab, out.str());
}

TrainState load_state(const ArtifactPaths& paths) {
  TrainState state;
  state.model = load_model(paths.model);
  state.store = MacroStore::load(paths.macros);
  state.store.load_associations(paths.associations);
  std::ifstream in(paths.vocab);
  if (!in) throw MissingModel("cannot read vocabulary: " + paths.vocab);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) throw MissingModel("malformed vocabulary line: " + line);
    state.doc_freq[line.substr(0, tab)] = std::strtod(line.c_str() + tab + 1, nullptr);
  }
  return state;
}

}  // namespace tablesem
