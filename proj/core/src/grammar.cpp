#include "tablesem/grammar.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "tablesem/text.hpp"

namespace tablesem {
namespace {

Rule make_rule(std::string id, std::vector<std::string> args, std::string out, LfPtr tmpl,
               GuardKind guard = GuardKind::None) {
  Rule r;
  r.id = std::move(id);
  r.args = std::move(args);
  r.out = std::move(out);
  r.tmpl = std::move(tmpl);
  r.guard = guard;
  return r;
}

std::vector<Rule> build_base_rules() {
  using namespace lf;
  std::vector<Rule> rules;
  rules.push_back(make_rule("ent2set", {kCatEnt}, kCatSet, hole(0)));
  rules.push_back(make_rule("join", {kCatRel, kCatSet}, kCatSet, join(hole(0), hole(1))));
  rules.push_back(
      make_rule("rjoin", {kCatRel, kCatSet}, kCatSet, join(reverse(hole(0)), hole(1))));
  rules.push_back(make_rule("intersect", {kCatSet, kCatSet}, kCatSet, intersect(hole(0), hole(1)),
                            GuardKind::SmallValueSets));
  rules.push_back(make_rule("union", {kCatSet, kCatSet}, kCatSet, set_union(hole(0), hole(1)),
                            GuardKind::SmallValueSets));
  rules.push_back(make_rule("count", {kCatSet}, kCatSet, count(hole(0))));
  rules.push_back(make_rule("agg_max", {kCatSet}, kCatSet, aggregate(AggKind::Max, hole(0)),
                            GuardKind::AggNumeric));
  rules.push_back(make_rule("agg_min", {kCatSet}, kCatSet, aggregate(AggKind::Min, hole(0)),
                            GuardKind::AggNumeric));
  rules.push_back(make_rule("agg_sum", {kCatSet}, kCatSet, aggregate(AggKind::Sum, hole(0)),
                            GuardKind::AggNumeric));
  rules.push_back(make_rule("agg_avg", {kCatSet}, kCatSet, aggregate(AggKind::Avg, hole(0)),
                            GuardKind::AggNumeric));
  // Superlative keyed by a column's numeric reading: the row in ?0 whose ?1
  // cell holds the largest number.
  auto prop_body = [] {
    return lambda(0, join(reverse(rel(Relation::num_prop())), join(reverse(hole(1)), var(0))));
  };
  rules.push_back(make_rule("argmax_prop", {kCatSet, kCatRel}, kCatSet,
                            superlative(SupKind::ArgMax, hole(0), prop_body())));
  rules.push_back(make_rule("argmin_prop", {kCatSet, kCatRel}, kCatSet,
                            superlative(SupKind::ArgMin, hole(0), prop_body())));
  auto index_body = [] { return lambda(0, join(reverse(rel(Relation::index())), var(0))); };
  rules.push_back(make_rule("argmax_index", {kCatSet}, kCatSet,
                            superlative(SupKind::ArgMax, hole(0), index_body())));
  rules.push_back(make_rule("argmin_index", {kCatSet}, kCatSet,
                            superlative(SupKind::ArgMin, hole(0), index_body())));
  auto cmp_tmpl = [](CmpOp op) {
    return join(rel(Relation::num_prop()), compare(op, hole(0)));
  };
  rules.push_back(
      make_rule("cmp_gt", {kCatEnt}, kCatSet, cmp_tmpl(CmpOp::Gt), GuardKind::CmpPivot));
  rules.push_back(
      make_rule("cmp_lt", {kCatEnt}, kCatSet, cmp_tmpl(CmpOp::Lt), GuardKind::CmpPivot));
  rules.push_back(
      make_rule("cmp_ge", {kCatEnt}, kCatSet, cmp_tmpl(CmpOp::Ge), GuardKind::CmpPivot));
  rules.push_back(
      make_rule("cmp_le", {kCatEnt}, kCatSet, cmp_tmpl(CmpOp::Le), GuardKind::CmpPivot));
  rules.push_back(
      make_rule("sub", {kCatSet, kCatSet}, kCatSet, sub(hole(0), hole(1)), GuardKind::SubNumeric));
  rules.push_back(make_rule("root", {kCatSet}, kCatRoot, hole(0)));
  return rules;
}

std::vector<Rule> build_terminal_rules() {
  std::vector<Rule> rules;
  rules.push_back(make_rule("t_ent", {}, kCatEnt, nullptr));
  rules.push_back(make_rule("t_ent_fuzzy", {}, kCatEnt, nullptr));
  rules.push_back(make_rule("t_num", {}, kCatEnt, nullptr));
  rules.push_back(make_rule("t_date", {}, kCatEnt, nullptr));
  rules.push_back(make_rule("t_rel", {}, kCatRel, nullptr));
  rules.push_back(make_rule("t_rows", {}, kCatSet, nullptr));
  return rules;
}

bool parse_number_token(const std::string& token, double& out) {
  std::string compact;
  bool digit = false;
  for (char c : token) {
    if (c == ',') continue;
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    compact += c;
  }
  if (!digit || compact.empty()) return false;
  const char* begin = compact.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == nullptr || *end != '\0' || end == begin) return false;
  out = v;
  return true;
}

}  // namespace

const std::vector<Rule>& base_rules() {
  static const std::vector<Rule> rules = build_base_rules();
  return rules;
}

const Rule* find_base_rule(const std::string& id) {
  for (const Rule& r : base_rules()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const std::vector<Rule>& terminal_rules() {
  static const std::vector<Rule> rules = build_terminal_rules();
  return rules;
}

const Rule* find_terminal_rule(const std::string& id) {
  for (const Rule& r : terminal_rules()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

double fuzzy_similarity(const std::string& a, const std::string& b) {
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_str(a, b)) / static_cast<double>(longest);
}

std::vector<TerminalCandidate> terminal_candidates(const KnowledgeBase& kb,
                                                   const std::vector<std::string>& tokens) {
  std::vector<TerminalCandidate> out;
  const Rule* r_ent = find_terminal_rule("t_ent");
  const Rule* r_fuzzy = find_terminal_rule("t_ent_fuzzy");
  const Rule* r_num = find_terminal_rule("t_num");
  const Rule* r_date = find_terminal_rule("t_date");
  const Rule* r_rel = find_terminal_rule("t_rel");
  const Rule* r_rows = find_terminal_rule("t_rows");

  auto add = [&](const Rule* rule, LfPtr z, int b, int e, std::string text) {
    TerminalCandidate c;
    c.rule = rule;
    c.category = rule->out;
    c.lf = std::move(z);
    c.span_begin = b;
    c.span_end = e;
    c.span_text = std::move(text);
    out.push_back(std::move(c));
  };

  const int n = static_cast<int>(tokens.size());
  for (int b = 0; b < n; ++b) {
    for (int len = 1; len <= kMaxSpanTokens && b + len <= n; ++len) {
      std::string span;
      for (int i = b; i < b + len; ++i) {
        if (i > b) span += ' ';
        span += tokens[i];
      }
      const int e = b + len;
      const std::string norm = normalize_text(span);
      if (norm.empty()) continue;
      if (const Value* cell = kb.find_cell_by_normalized(norm)) {
        add(r_ent, lf::entity(*cell), b, e, span);
      }
      for (const Value& cell : kb.all_cells()) {
        const std::string cn = normalize_text(cell.raw);
        if (cn == norm) continue;
        bool close = fuzzy_similarity(norm, cn) >= kFuzzyThreshold;
        bool prefix = norm.size() >= 3 && cn.size() > norm.size() &&
                      cn.compare(0, norm.size(), norm) == 0;
        if (close || prefix) add(r_fuzzy, lf::entity(cell), b, e, span);
      }
      if (len == 1) {
        double num = 0.0;
        if (parse_number_token(tokens[b], num)) {
          add(r_num, lf::entity(Value::number(num)), b, e, span);
        }
      }
      NormalizedCell nc = normalize_cell(span);
      if (nc.date) add(r_date, lf::entity(Value::date_value(*nc.date)), b, e, span);
    }
  }
  for (const Relation& r : kb.relations()) {
    add(r_rel, lf::rel(r), -1, -1, "");
  }
  add(r_rows, lf::all_rows(), -1, -1, "");
  return out;
}

namespace {

std::string guard_text(GuardKind g) {
  switch (g) {
    case GuardKind::None:
      return "";
    case GuardKind::SubNumeric:
      return "both children denote single numbers";
    case GuardKind::AggNumeric:
      return "child denotes a nonempty all-number set";
    case GuardKind::CmpPivot:
      return "child denotes a single number";
    case GuardKind::SmallValueSets:
      return "children denote nonempty sets of at most 3 values each";
  }
  return "";
}

}  // namespace

std::string grammar_reference() {
  std::ostringstream out;
  out << "# Grammar\n\n";
  out << "Generated from the rule tables in the library; do not edit by hand.\n\n";
  out << "Categories: `Ent` (single value), `Rel` (binary relation), `Set` (value set),\n";
  out << "`Root` (complete form). Macro rules introduce their own categories at runtime.\n\n";
  out << "## Compositional rules (" << base_rules().size() << ")\n\n";
  out << "Templates write the i-th child as `?i`.\n\n";
  out << "| id | children | out | template | guard |\n";
  out << "|---|---|---|---|---|\n";
  for (const Rule& r : base_rules()) {
    out << "| `" << r.id << "` | ";
    for (size_t i = 0; i < r.args.size(); ++i) {
      if (i > 0) out << " + ";
      out << r.args[i];
    }
    out << " | " << r.out << " | `" << canonical_string(r.tmpl) << "` | " << guard_text(r.guard)
        << " |\n";
  }
  out << "\n## Terminal rules (" << terminal_rules().size() << ")\n\n";
  out << "| id | out | produces |\n";
  out << "|---|---|---|\n";
  out << "| `t_ent` | Ent | a cell whose normalized text equals a token span (up to "
      << kMaxSpanTokens << " tokens) |\n";
  out << "| `t_ent_fuzzy` | Ent | a cell whose text is close to a span (similarity >= "
      << kFuzzyThreshold << ") or extends it as a prefix |\n";
  out << "| `t_num` | Ent | a number read from a single token |\n";
  out << "| `t_date` | Ent | a date read from a span |\n";
  out << "| `t_rel` | Rel | one candidate per table relation: every column plus `Next`, "
         "`Index`, `Num`, `Date` (floating) |\n";
  out << "| `t_rows` | Set | the set of all rows (floating) |\n";
  return out.str();
}

}  // namespace tablesem
