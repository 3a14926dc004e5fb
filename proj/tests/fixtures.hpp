#pragma once

#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tablesem/derivation.hpp"
#include "tablesem/execute.hpp"
#include "tablesem/grammar.hpp"
#include "tablesem/logical_form.hpp"
#include "tablesem/parse.hpp"
#include "tablesem/table.hpp"

namespace testutil {

// Five-nation medal table used as the worked example throughout the suite.
inline const char* kMedalCsv =
    "Rank,Nation,Gold,Silver,Bronze\n"
    "1,France,3,1,1\n"
    "2,Ukraine,2,1,2\n"
    "3,Turkey,2,0,1\n"
    "4,Sweden,2,0,0\n"
    "5,Iran,1,2,1\n";

inline const tablesem::KnowledgeBase& medal_kb() {
  static const tablesem::KnowledgeBase kb =
      tablesem::load_table(kMedalCsv, tablesem::TableFormat::Csv);
  return kb;
}

inline double zero_score(const tablesem::Derivation&) { return 0.0; }

// Leaf derivation over a terminal rule, mirroring the parser's construction.
inline tablesem::DerivPtr leaf(const tablesem::KnowledgeBase& kb, const std::string& rule_id,
                               tablesem::LfPtr z, int span_begin = -1, int span_end = -1,
                               std::string span_text = "") {
  using namespace tablesem;
  auto d = std::make_shared<Derivation>();
  d->rule = find_terminal_rule(rule_id);
  if (d->rule == nullptr) throw std::logic_error("no terminal rule: " + rule_id);
  d->lf = std::move(z);
  d->category = d->rule->out;
  d->size = 1;
  d->span_begin = span_begin;
  d->span_end = span_end;
  d->span_text = std::move(span_text);
  if (d->category != kCatRel) {
    if (!try_execute(d->lf, kb, d->denotation)) {
      throw std::logic_error("fixture leaf failed to execute");
    }
    d->exec_ok = true;
  }
  d->canon = canonical_string(d->lf);
  return d;
}

// Anchored entity leaf for a cell named by its normalized text.
inline tablesem::DerivPtr ent_leaf(const tablesem::KnowledgeBase& kb, const std::string& norm) {
  const tablesem::Value* cell = kb.find_cell_by_normalized(norm);
  if (cell == nullptr) throw std::logic_error("no cell: " + norm);
  return leaf(kb, "t_ent", tablesem::lf::entity(*cell), 0, 1, norm);
}

inline tablesem::DerivPtr rel_leaf(const tablesem::KnowledgeBase& kb, const std::string& name) {
  auto r = tablesem::relation_from_name(name);
  if (!r) throw std::logic_error("bad relation name: " + name);
  return leaf(kb, "t_rel", tablesem::lf::rel(*r));
}

inline tablesem::DerivPtr rows_leaf(const tablesem::KnowledgeBase& kb) {
  return leaf(kb, "t_rows", tablesem::lf::all_rows());
}

inline tablesem::DerivPtr apply(const tablesem::KnowledgeBase& kb, const std::string& rule_id,
                                std::vector<tablesem::DerivPtr> children,
                                bool prune_empty = true) {
  const tablesem::Rule* r = tablesem::find_base_rule(rule_id);
  if (r == nullptr) throw std::logic_error("no base rule: " + rule_id);
  return tablesem::apply_rule(kb, r, std::move(children), prune_empty);
}

inline std::set<std::string> canon_set(const std::vector<tablesem::DerivPtr>& ds) {
  std::set<std::string> out;
  for (const auto& d : ds) out.insert(d->canon);
  return out;
}

inline std::vector<std::string> strings(const tablesem::ValueSet& s) {
  return tablesem::denotation_strings(s);
}

// Random small table: 2-6 rows, 2-4 columns (names, repeated categories,
// numbers, and optionally one more numeric column).
inline std::string random_table_csv(std::mt19937& rng) {
  static const std::vector<std::string> names = {"Ada",  "Bo",   "Cyd", "Dee",
                                                 "Eli",  "Finn", "Gus", "Hana"};
  static const std::vector<std::string> colors = {"Red", "Blue", "Green"};
  auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };
  int rows = 2 + static_cast<int>(pick(5));
  int cols = 2 + static_cast<int>(pick(3));
  std::ostringstream out;
  out << "Name,Color";
  if (cols >= 3) out << ",Pts";
  if (cols >= 4) out << ",Aux";
  out << "\n";
  std::vector<size_t> order(names.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[pick(i)]);
  for (int r = 0; r < rows; ++r) {
    out << names[order[static_cast<size_t>(r)]] << "," << colors[pick(colors.size())];
    if (cols >= 3) out << "," << pick(10);
    if (cols >= 4) out << "," << pick(6);
    out << "\n";
  }
  return out.str();
}

// Token sequence mentioning a few of the table's cells, sometimes a number.
inline std::vector<std::string> random_tokens(std::mt19937& rng,
                                              const tablesem::KnowledgeBase& kb) {
  auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };
  const tablesem::ValueSet& cells = kb.all_cells();
  std::vector<std::string> toks;
  int mentions = 1 + static_cast<int>(pick(3));
  for (int i = 0; i < mentions; ++i) {
    const tablesem::Value& c = cells[pick(cells.size())];
    toks.push_back(tablesem::normalize_text(c.raw));
  }
  if (pick(2) == 0) toks.push_back(std::to_string(pick(7)));
  return toks;
}

}  // namespace testutil
