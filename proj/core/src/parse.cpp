#include "tablesem/parse.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "tablesem/errors.hpp"
#include "tablesem/execute.hpp"

namespace tablesem {
namespace {

bool singleton_number(const DerivPtr& d) {
  return d->exec_ok && d->denotation.size() == 1 && d->denotation[0].kind == Value::Kind::Number;
}

bool small_value_set(const DerivPtr& d) {
  return d->exec_ok && !d->denotation.empty() && d->denotation.size() <= 3;
}

bool all_numbers(const DerivPtr& d) {
  if (!d->exec_ok || d->denotation.empty()) return false;
  for (const Value& v : d->denotation) {
    if (v.kind != Value::Kind::Number) return false;
  }
  return true;
}

bool guard_allows(const Rule& rule, const std::vector<DerivPtr>& children) {
  switch (rule.guard) {
    case GuardKind::None:
      return true;
    case GuardKind::SubNumeric:
      return singleton_number(children[0]) && singleton_number(children[1]);
    case GuardKind::AggNumeric:
      return all_numbers(children[0]);
    case GuardKind::CmpPivot:
      return singleton_number(children[0]);
    case GuardKind::SmallValueSets:
      return small_value_set(children[0]) && small_value_set(children[1]);
  }
  return true;
}

// Within a chart cell: best score first, canonical string as the
// deterministic tie-break.
bool cell_order(const DerivPtr& a, const DerivPtr& b) {
  if (a->score != b->score) return a->score > b->score;
  return a->canon < b->canon;
}

void finalize_cell(std::vector<DerivPtr>& cell, int beam_size, long& beams_pruned) {
  std::stable_sort(cell.begin(), cell.end(), cell_order);
  std::set<std::string> seen;
  std::vector<DerivPtr> kept;
  kept.reserve(cell.size());
  for (auto& d : cell) {
    if (!seen.insert(d->canon).second) continue;
    kept.push_back(std::move(d));
  }
  if (static_cast<int>(kept.size()) > beam_size) {
    beams_pruned += static_cast<long>(kept.size()) - beam_size;
    kept.resize(static_cast<size_t>(beam_size));
  }
  cell = std::move(kept);
}

DerivPtr make_terminal(const KnowledgeBase& kb, const TerminalCandidate& c, bool prune_empty) {
  auto d = std::make_shared<Derivation>();
  d->rule = c.rule;
  d->lf = c.lf;
  d->category = c.category;
  d->size = 1;
  d->span_begin = c.span_begin;
  d->span_end = c.span_end;
  d->span_text = c.span_text;
  if (d->category != kCatRel) {
    if (!try_execute(d->lf, kb, d->denotation)) return nullptr;
    d->exec_ok = true;
    if (prune_empty && d->denotation.empty()) return nullptr;
  }
  d->canon = canonical_string(d->lf);
  return d;
}

}  // namespace

DerivPtr apply_rule(const KnowledgeBase& kb, const Rule* rule, std::vector<DerivPtr> children,
                    bool prune_empty, bool* constructed) {
  if (constructed != nullptr) *constructed = false;
  if (!guard_allows(*rule, children)) return nullptr;
  std::vector<LfPtr> child_lfs;
  child_lfs.reserve(children.size());
  for (const auto& c : children) child_lfs.push_back(c->lf);
  LfPtr z = substitute_holes(rule->tmpl, child_lfs);
  if (constructed != nullptr) *constructed = true;
  auto d = std::make_shared<Derivation>();
  d->rule = rule;
  d->children = std::move(children);
  d->lf = z;
  d->category = rule->out;
  d->size = 1;
  for (const auto& c : d->children) d->size += c->size;
  if (d->category != kCatRel) {
    if (!try_execute(z, kb, d->denotation)) return nullptr;
    d->exec_ok = true;
    if (prune_empty && d->denotation.empty() && d->category != kCatRoot) return nullptr;
  }
  d->canon = canonical_string(z);
  return d;
}

ParseResult parse(const KnowledgeBase& kb, const std::vector<std::string>& tokens,
                  const std::vector<const Rule*>& rules, const DerivationScorer& scorer,
                  const ParseOptions& opts, const StopHook& stop) {
  if (opts.beam_size < 1) throw InvalidBeam("beam size must be at least 1");
  ParseResult res;
  const bool capped = opts.lf_cap >= 0;
  if (capped && opts.lf_cap == 0) {
    res.truncated = true;
    return res;
  }

  std::map<std::pair<std::string, int>, std::vector<DerivPtr>> chart;
  DerivPtr stop_hit;
  bool done = false;

  // True when the budget is spent; generating one more would exceed it.
  auto budget_spent = [&] {
    if (capped && res.partial_lfs_generated >= opts.lf_cap) {
      res.truncated = true;
      done = true;
      return true;
    }
    return false;
  };

  for (const TerminalCandidate& c : terminal_candidates(kb, tokens)) {
    if (budget_spent()) break;
    ++res.partial_lfs_generated;
    DerivPtr d = make_terminal(kb, c, opts.prune_empty);
    if (d == nullptr) continue;
    std::const_pointer_cast<Derivation>(d)->score = scorer ? scorer(*d) : 0.0;
    chart[{d->category, 1}].push_back(std::move(d));
  }
  for (auto& [key, cell] : chart) finalize_cell(cell, opts.beam_size, res.beams_pruned);

  for (int size = 2; size <= opts.max_size && !done; ++size) {
    std::map<std::string, std::vector<DerivPtr>> fresh;
    auto emit = [&](const Rule* rule, std::vector<DerivPtr> kids) {
      if (done || budget_spent()) return;
      bool constructed = false;
      DerivPtr d = apply_rule(kb, rule, std::move(kids), opts.prune_empty, &constructed);
      if (constructed) {
        ++res.partial_lfs_generated;
        if (!rule->is_macro) ++res.base_compositional_applications;
      }
      if (d == nullptr) return;
      std::const_pointer_cast<Derivation>(d)->score = scorer ? scorer(*d) : 0.0;
      if (d->category == kCatRoot && stop && stop(d)) {
        res.stopped = true;
        stop_hit = d;
        done = true;
      }
      fresh[d->category].push_back(std::move(d));
    };

    // Macro rules may take any number of children, so child sizes are
    // enumerated as ordered compositions of size-1.
    std::vector<DerivPtr> picked;
    std::function<void(const Rule*, size_t, int)> combine = [&](const Rule* rule, size_t arg,
                                                                int remaining) {
      if (done) return;
      const size_t arity = rule->args.size();
      if (arg == arity) {
        if (remaining == 0) emit(rule, picked);
        return;
      }
      const int reserve = static_cast<int>(arity - arg - 1);
      for (int sz = 1; sz <= remaining - reserve && !done; ++sz) {
        auto it = chart.find({rule->args[arg], sz});
        if (it == chart.end()) continue;
        for (const DerivPtr& d : it->second) {
          if (done) break;
          picked.push_back(d);
          combine(rule, arg + 1, remaining - sz);
          picked.pop_back();
        }
      }
    };
    for (const Rule* rule : rules) {
      if (done) break;
      if (rule->args.empty()) continue;
      combine(rule, 0, size - 1);
    }
    for (auto& [cat, cell] : fresh) {
      finalize_cell(cell, opts.beam_size, res.beams_pruned);
      chart[{cat, size}] = std::move(cell);
    }
  }

  for (const auto& [key, cell] : chart) {
    if (key.first != kCatRoot) continue;
    res.candidates.insert(res.candidates.end(), cell.begin(), cell.end());
  }
  if (stop_hit != nullptr) {
    bool present = false;
    for (const auto& d : res.candidates) {
      if (d->canon == stop_hit->canon) {
        present = true;
        break;
      }
    }
    if (!present) res.candidates.push_back(stop_hit);
  }
  std::stable_sort(res.candidates.begin(), res.candidates.end(), cell_order);
  std::set<std::string> seen;
  std::vector<DerivPtr> unique;
  for (auto& d : res.candidates) {
    if (seen.insert(d->canon).second) unique.push_back(std::move(d));
  }
  res.candidates = std::move(unique);
  return res;
}

}  // namespace tablesem
