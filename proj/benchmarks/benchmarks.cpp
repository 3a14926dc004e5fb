#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "tablesem/execute.hpp"
#include "tablesem/grammar.hpp"
#include "tablesem/knn.hpp"
#include "tablesem/macro.hpp"
#include "tablesem/parse.hpp"
#include "tablesem/table.hpp"
#include "tablesem/text.hpp"

using namespace tablesem;

namespace {

const char* kMedalCsv =
    "Rank,Nation,Gold,Silver,Bronze\n"
    "1,France,3,1,1\n"
    "2,Ukraine,2,1,2\n"
    "3,Turkey,2,0,1\n"
    "4,Sweden,2,0,0\n"
    "5,Iran,1,2,1\n";

const KnowledgeBase& medal_kb() {
  static const KnowledgeBase kb = load_table(kMedalCsv, TableFormat::Csv);
  return kb;
}

double zero_score(const Derivation&) { return 0.0; }

std::vector<const Rule*> base_ptrs() {
  std::vector<const Rule*> out;
  for (const Rule& r : base_rules()) out.push_back(&r);
  return out;
}

}  // namespace

static void BM_LoadTable(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(load_table(kMedalCsv, TableFormat::Csv));
  }
}
BENCHMARK(BM_LoadTable);

static void BM_ExecuteChain(benchmark::State& state) {
  const KnowledgeBase& kb = medal_kb();
  LfPtr z = parse_lf("(R nation).(R Next).nation.'Turkey'", &kb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(execute(z, kb));
  }
}
BENCHMARK(BM_ExecuteChain);

static void BM_Levenshtein(benchmark::State& state) {
  std::vector<std::string> a = tokenize("which nation won the most gold medals");
  std::vector<std::string> b = tokenize("which nation came right after turkey");
  for (auto _ : state) {
    benchmark::DoNotOptimize(levenshtein_tokens(a, b));
  }
}
BENCHMARK(BM_Levenshtein);

// Full compositional search versus the per-example grammar built from one
// triggered macro, over the same utterance and beam.
static void BM_ParseBase(benchmark::State& state) {
  const KnowledgeBase& kb = medal_kb();
  std::vector<std::string> tokens = tokenize("which nation came right after turkey");
  std::vector<const Rule*> rules = base_ptrs();
  ParseOptions opts;
  opts.beam_size = 50;
  long partials = 0;
  for (auto _ : state) {
    ParseResult r = parse(kb, tokens, rules, zero_score, opts);
    partials = r.partial_lfs_generated;
    benchmark::DoNotOptimize(r);
  }
  state.counters["partial_lfs"] = static_cast<double>(partials);
}
BENCHMARK(BM_ParseBase);

static void BM_ParseMacro(benchmark::State& state) {
  const KnowledgeBase& kb = medal_kb();
  std::vector<std::string> tokens = tokenize("which nation came right after turkey");
  Macro m = macro_from_serialization(
      "(root (rjoin {Rel#1} (rjoin {Rel#2} (join {Rel#1} (ent2set {Ent#3})))))");
  std::vector<Rule> rules = decompose(m);
  std::vector<const Rule*> ptrs;
  for (const Rule& r : rules) ptrs.push_back(&r);
  ParseOptions opts;
  opts.beam_size = 50;
  long partials = 0;
  for (auto _ : state) {
    ParseResult r = parse(kb, tokens, ptrs, zero_score, opts);
    partials = r.partial_lfs_generated;
    benchmark::DoNotOptimize(r);
  }
  state.counters["partial_lfs"] = static_cast<double>(partials);
}
BENCHMARK(BM_ParseMacro);

static void BM_KnnBuild(benchmark::State& state) {
  static const std::vector<std::string> vocab = {
      "which", "nation", "won",  "most", "gold", "medals", "how",
      "many",  "rows",   "have", "more", "than", "two",    "after"};
  std::map<std::string, std::vector<std::string>> corpus;
  std::mt19937 rng(static_cast<unsigned>(state.range(0)));
  for (long i = 0; i < state.range(0); ++i) {
    std::vector<std::string> toks(3 + rng() % 5);
    for (auto& t : toks) t = vocab[rng() % vocab.size()];
    corpus["u" + std::to_string(i)] = toks;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(KnnIndex::build(corpus, 100));
  }
}
BENCHMARK(BM_KnnBuild)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
