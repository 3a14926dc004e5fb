#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "tablesem/grammar.hpp"

using namespace tablesem;

TEST_CASE("rule inventory") {
  CHECK(base_rules().size() == 20);
  CHECK(terminal_rules().size() == 6);

  std::set<std::string> ids;
  for (const Rule& r : base_rules()) {
    CHECK(ids.insert(r.id).second);
    CHECK_FALSE(r.is_macro);
    CHECK(r.tmpl != nullptr);
    CHECK(r.tmpl->has_hole);
    CHECK(find_base_rule(r.id) == &r);
  }
  for (const Rule& r : terminal_rules()) {
    CHECK(r.args.empty());
    CHECK(r.tmpl == nullptr);
    CHECK(find_terminal_rule(r.id) == &r);
  }
  CHECK(find_base_rule("t_ent") == nullptr);
  CHECK(find_terminal_rule("join") == nullptr);
  CHECK(find_base_rule("no_such") == nullptr);
}

TEST_CASE("rule templates") {
  auto tmpl = [](const char* id) { return canonical_string(find_base_rule(id)->tmpl); };
  CHECK(tmpl("ent2set") == "?0");
  CHECK(tmpl("join") == "?0.?1");
  CHECK(tmpl("rjoin") == "(R ?0).?1");
  CHECK(tmpl("intersect") == "(and ?0 ?1)");
  CHECK(tmpl("union") == "(or ?0 ?1)");
  CHECK(tmpl("count") == "(count ?0)");
  CHECK(tmpl("agg_sum") == "(sum ?0)");
  CHECK(tmpl("argmax_prop") == "(argmax ?0 (lambda (R Num).(R ?1).$0))");
  CHECK(tmpl("argmin_index") == "(argmin ?0 (lambda (R Index).$0))");
  CHECK(tmpl("cmp_ge") == "Num.(>= ?0)");
  CHECK(tmpl("sub") == "(sub ?0 ?1)");
  CHECK(tmpl("root") == "?0");

  CHECK(find_base_rule("root")->out == kCatRoot);
  CHECK(find_base_rule("join")->args == std::vector<std::string>{kCatRel, kCatSet});
  CHECK(find_base_rule("argmax_prop")->args == std::vector<std::string>{kCatSet, kCatRel});
  CHECK(find_base_rule("sub")->guard == GuardKind::SubNumeric);
  CHECK(find_base_rule("agg_avg")->guard == GuardKind::AggNumeric);
  CHECK(find_base_rule("cmp_lt")->guard == GuardKind::CmpPivot);
  CHECK(find_base_rule("intersect")->guard == GuardKind::SmallValueSets);
  CHECK(find_base_rule("join")->guard == GuardKind::None);
}

TEST_CASE("fuzzy similarity") {
  CHECK(fuzzy_similarity("turkey", "turkey") == doctest::Approx(1.0));
  CHECK(fuzzy_similarity("turke", "turkey") == doctest::Approx(5.0 / 6.0));
  CHECK(fuzzy_similarity("fra", "france") == doctest::Approx(0.5));
  CHECK(fuzzy_similarity("", "") == doctest::Approx(1.0));
  CHECK(fuzzy_similarity("abc", "") == doctest::Approx(0.0));
}

namespace {

int count_rule(const std::vector<TerminalCandidate>& cs, const char* id) {
  int n = 0;
  for (const auto& c : cs) {
    if (c.rule->id == id) ++n;
  }
  return n;
}

const TerminalCandidate* first_of(const std::vector<TerminalCandidate>& cs, const char* id) {
  for (const auto& c : cs) {
    if (c.rule->id == id) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("terminal candidates anchor spans and float relations") {
  const KnowledgeBase& kb = testutil::medal_kb();
  auto cs = terminal_candidates(kb, {"how", "many", "gold", "did", "turkey", "win"});

  // One exact cell mention, every relation, and the all-rows set.
  CHECK(count_rule(cs, "t_ent") == 1);
  CHECK(count_rule(cs, "t_rel") == 9);
  CHECK(count_rule(cs, "t_rows") == 1);
  CHECK(count_rule(cs, "t_num") == 0);
  CHECK(count_rule(cs, "t_date") == 0);

  const TerminalCandidate* ent = first_of(cs, "t_ent");
  REQUIRE(ent != nullptr);
  CHECK(ent->span_begin == 4);
  CHECK(ent->span_end == 5);
  CHECK(ent->span_text == "turkey");
  CHECK(ent->category == kCatEnt);
  CHECK(canonical_string(ent->lf) == "'Turkey'");

  const TerminalCandidate* rows = first_of(cs, "t_rows");
  CHECK(rows->span_begin == -1);
  CHECK(rows->span_text.empty());
}

TEST_CASE("fuzzy terminals need near or prefix matches") {
  const KnowledgeBase& kb = testutil::medal_kb();

  auto near = terminal_candidates(kb, {"turke"});
  CHECK(count_rule(near, "t_ent") == 0);
  REQUIRE(count_rule(near, "t_ent_fuzzy") == 1);
  CHECK(canonical_string(first_of(near, "t_ent_fuzzy")->lf) == "'Turkey'");

  auto prefix = terminal_candidates(kb, {"fra"});
  REQUIRE(count_rule(prefix, "t_ent_fuzzy") == 1);
  CHECK(canonical_string(first_of(prefix, "t_ent_fuzzy")->lf) == "'France'");

  // Two letters are below both the similarity and prefix thresholds.
  CHECK(count_rule(terminal_candidates(kb, {"fr"}), "t_ent_fuzzy") == 0);
  // Exact matches are not re-reported as fuzzy.
  CHECK(count_rule(terminal_candidates(kb, {"turkey"}), "t_ent_fuzzy") == 0);
}

TEST_CASE("number and date terminals") {
  const KnowledgeBase& kb = testutil::medal_kb();

  auto nums = terminal_candidates(kb, {"2,000"});
  REQUIRE(count_rule(nums, "t_num") == 1);
  CHECK(canonical_string(first_of(nums, "t_num")->lf) == "2000");

  // A token that is both a table cell and a number yields both readings.
  auto both = terminal_candidates(kb, {"2"});
  CHECK(count_rule(both, "t_ent") == 1);
  CHECK(count_rule(both, "t_num") == 1);

  auto year = terminal_candidates(kb, {"2008"});
  CHECK(count_rule(year, "t_num") == 1);
  REQUIRE(count_rule(year, "t_date") == 1);
  CHECK(canonical_string(first_of(year, "t_date")->lf) == "(date 2008 0 0)");

  auto full = terminal_candidates(kb, {"july", "2", "1994"});
  bool found = false;
  for (const auto& c : full) {
    if (c.rule->id == "t_date" && canonical_string(c.lf) == "(date 1994 7 2)") {
      CHECK(c.span_begin == 0);
      CHECK(c.span_end == 3);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("multi-token spans match long cells up to four tokens") {
  KnowledgeBase kb = load_table("Venue,Year\nNew York City Hall,2001\nElsewhere,2002\n",
                                TableFormat::Csv);
  auto cs = terminal_candidates(kb, {"at", "new", "york", "city", "hall", "today"});
  const TerminalCandidate* ent = first_of(cs, "t_ent");
  REQUIRE(ent != nullptr);
  CHECK(ent->span_begin == 1);
  CHECK(ent->span_end == 5);
  CHECK(ent->span_text == "new york city hall");
}

TEST_CASE("grammar reference matches the checked-in copy") {
  std::string doc = grammar_reference();
  CHECK(doc.find("| `join` | Rel + Set | Set | `?0.?1` |") != std::string::npos);
  CHECK(doc.find("| `t_rows` | Set |") != std::string::npos);

  std::ifstream in(TABLESEM_SOURCE_DIR "/GRAMMAR.md", std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "GRAMMAR.md is missing; regenerate it with the grammar_doc tool");
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK_MESSAGE(buf.str() == doc, "GRAMMAR.md is stale; regenerate it with the grammar_doc tool");
}
