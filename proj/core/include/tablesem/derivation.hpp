#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tablesem/grammar.hpp"
#include "tablesem/logical_form.hpp"
#include "tablesem/value.hpp"

namespace tablesem {

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  const Rule* rule = nullptr;
  std::vector<DerivPtr> children;
  LfPtr lf;
  std::string category;
  int size = 1;  // 1 for leaves, else 1 + sum of child sizes
  int span_begin = -1;
  int span_end = -1;
  std::string span_text;
  ValueSet denotation;
  bool exec_ok = false;  // relations and failed executions leave this false
  double score = 0.0;
  std::string canon;  // cached canonical logical form, the dedup key
};

// Fills in the score of a freshly built derivation. Children are already
// scored when this runs.
using DerivationScorer = std::function<double(const Derivation&)>;

// Checked on every completed root derivation; returning true stops the
// parse with that derivation included in the candidates.
using StopHook = std::function<bool(const DerivPtr&)>;

struct ParseOptions {
  int beam_size = 100;
  int max_size = 7;
  long lf_cap = -1;  // built-form budget: -1 no cap, 0 short-circuits empty
  bool prune_empty = true;
};

struct ParseResult {
  std::vector<DerivPtr> candidates;  // root derivations, best first
  long partial_lfs_generated = 0;
  long beams_pruned = 0;  // derivations cut by beam limits
  long base_compositional_applications = 0;
  bool truncated = false;  // the cap fired before the chart was complete
  bool stopped = false;    // the stop hook fired
};

}  // namespace tablesem
