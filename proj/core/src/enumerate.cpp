#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "tablesem/errors.hpp"
#include "tablesem/execute.hpp"
#include "tablesem/parse.hpp"

namespace tablesem {
namespace {

DerivPtr leaf_from(const KnowledgeBase& kb, const TerminalCandidate& c) {
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
    if (d->denotation.empty()) return nullptr;
  }
  d->canon = canonical_string(d->lf);
  return d;
}

void dedup_by_canon(std::vector<DerivPtr>& items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const DerivPtr& a, const DerivPtr& b) { return a->canon < b->canon; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const DerivPtr& a, const DerivPtr& b) { return a->canon == b->canon; }),
              items.end());
}

}  // namespace

std::vector<DerivPtr> enumerate_exhaustive(const KnowledgeBase& kb,
                                           const std::vector<std::string>& tokens,
                                           const std::vector<const Rule*>& rules, int max_size,
                                           long cap) {
  std::map<std::pair<std::string, int>, std::vector<DerivPtr>> memo;
  long total = 0;

  std::map<std::string, std::vector<DerivPtr>> leaves;
  for (const TerminalCandidate& c : terminal_candidates(kb, tokens)) {
    DerivPtr d = leaf_from(kb, c);
    if (d != nullptr) leaves[d->category].push_back(std::move(d));
  }
  for (auto& [cat, items] : leaves) dedup_by_canon(items);

  std::function<const std::vector<DerivPtr>&(const std::string&, int)> derive =
      [&](const std::string& cat, int size) -> const std::vector<DerivPtr>& {
    auto key = std::make_pair(cat, size);
    auto found = memo.find(key);
    if (found != memo.end()) return found->second;
    std::vector<DerivPtr> out;
    if (size == 1) {
      auto it = leaves.find(cat);
      if (it != leaves.end()) out = it->second;
    } else {
      std::vector<DerivPtr> picked;
      std::function<void(const Rule*, size_t, int)> combine = [&](const Rule* rule, size_t arg,
                                                                  int remaining) {
        if (arg == rule->args.size()) {
          if (remaining != 0) return;
          DerivPtr d = apply_rule(kb, rule, picked, true);
          if (d != nullptr) out.push_back(std::move(d));
          return;
        }
        const int reserve = static_cast<int>(rule->args.size() - arg - 1);
        for (int sz = 1; sz <= remaining - reserve; ++sz) {
          for (const DerivPtr& a : derive(rule->args[arg], sz)) {
            picked.push_back(a);
            combine(rule, arg + 1, remaining - sz);
            picked.pop_back();
          }
        }
      };
      for (const Rule* rule : rules) {
        if (rule->out != cat || rule->args.empty()) continue;
        combine(rule, 0, size - 1);
      }
      dedup_by_canon(out);
    }
    total += static_cast<long>(out.size());
    if (total > cap) throw SpaceExplosion("enumeration exceeded the derivation cap");
    auto [slot, inserted] = memo.emplace(std::move(key), std::move(out));
    return slot->second;
  };

  std::vector<DerivPtr> roots;
  for (int size = 2; size <= max_size; ++size) {
    const auto& cell = derive(kCatRoot, size);
    roots.insert(roots.end(), cell.begin(), cell.end());
  }
  dedup_by_canon(roots);
  return roots;
}

}  // namespace tablesem
