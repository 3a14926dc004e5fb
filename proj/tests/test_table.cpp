#include <doctest.h>

#include "fixtures.hpp"
#include "tablesem/errors.hpp"
#include "tablesem/table.hpp"

using namespace tablesem;

TEST_CASE("text normalization and slugs") {
  CHECK(normalize_text("  Multi   Word\tX ") == "multi word x");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text(" \t ") == "");
  CHECK(normalize_text("ABC") == "abc");
  CHECK(slugify("o'brien 2") == "o_brien_2");
  CHECK(slugify("abc") == "abc");
  CHECK(slugify("'abc'") == "abc");
  CHECK(slugify("--") == "c");
}

TEST_CASE("cell normalization extracts numbers and dates") {
  auto c = normalize_cell("2008");
  REQUIRE(c.date.has_value());
  CHECK(*c.date == Date{2008, 0, 0});
  REQUIRE(c.number.has_value());
  CHECK(*c.number == 2008.0);

  c = normalize_cell("0999");
  CHECK_FALSE(c.date.has_value());
  CHECK(*c.number == 999.0);

  c = normalize_cell("2014-07-02");
  REQUIRE(c.date.has_value());
  CHECK(*c.date == Date{2014, 7, 2});
  CHECK_FALSE(c.number.has_value());

  c = normalize_cell("July 2, 1994");
  REQUIRE(c.date.has_value());
  CHECK(*c.date == Date{1994, 7, 2});
  CHECK_FALSE(c.number.has_value());

  c = normalize_cell("Jul 2 1994");
  REQUIRE(c.date.has_value());
  CHECK(*c.date == Date{1994, 7, 2});

  c = normalize_cell("200 points");
  CHECK_FALSE(c.date.has_value());
  CHECK(*c.number == 200.0);

  CHECK(*normalize_cell("1,234.5 km").number == 1234.5);
  CHECK(*normalize_cell("-5 degrees").number == -5.0);
  CHECK(*normalize_cell("went -5 deep").number == -5.0);
  CHECK(*normalize_cell("x-5").number == 5.0);
  CHECK(*normalize_cell("(-3)").number == -3.0);
  CHECK(*normalize_cell("3.14").number == 3.14);
  CHECK_FALSE(normalize_cell("no numbers").number.has_value());
  CHECK_FALSE(normalize_cell("no numbers").date.has_value());
}

TEST_CASE("medal table structure") {
  const KnowledgeBase& kb = testutil::medal_kb();
  REQUIRE(kb.columns().size() == 5);
  CHECK(kb.columns()[0].id == "rank");
  CHECK(kb.columns()[1].id == "nation");
  CHECK(kb.columns()[1].header == "Nation");
  CHECK(kb.row_count() == 5);
  CHECK(kb.all_rows().size() == 5);
  REQUIRE(kb.relations().size() == 9);
  CHECK(kb.relations()[0] == Relation::col("rank"));
  CHECK(kb.relations()[5] == Relation::next());
  CHECK(kb.has_relation(Relation::next()));
  CHECK_FALSE(kb.has_relation(Relation::col("city")));
}

TEST_CASE("equal normalized text is one entity table-wide") {
  const KnowledgeBase& kb = testutil::medal_kb();
  // Rank 3 and France's gold count share the cell.
  CHECK(kb.cell_at(3, 0) == kb.cell_at(1, 2));
  CHECK(kb.cell_at(3, 0).id == "3");
  // Distinct texts: numbers 0..5 plus five nation names.
  CHECK(kb.all_cells().size() == 11);
  const Value* turkey = kb.find_cell_by_normalized("turkey");
  REQUIRE(turkey != nullptr);
  CHECK(turkey->raw == "Turkey");
  CHECK(kb.find_cell_by_normalized("TURKEY") == nullptr);
  CHECK(kb.find_cell_by_normalized("") == nullptr);
}

TEST_CASE("relations over the medal table") {
  const KnowledgeBase& kb = testutil::medal_kb();
  const Value r1 = Value::row_value(1);
  const Value r3 = Value::row_value(3);

  ValueSet img = kb.image(Relation::col("nation"), r3);
  REQUIRE(img.size() == 1);
  CHECK(img[0].id == "turkey");

  const Value* one = kb.find_cell_by_normalized("1");
  REQUIRE(one != nullptr);
  ValueSet rows = kb.preimage(Relation::col("bronze"), *one);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == r1);
  CHECK(rows[1] == r3);
  CHECK(rows[2] == Value::row_value(5));

  // Next points each row at the one after it.
  CHECK(kb.image(Relation::next(), r3) == ValueSet{Value::row_value(4)});
  CHECK(kb.preimage(Relation::next(), r3) == ValueSet{Value::row_value(2)});
  CHECK(kb.image(Relation::next(), Value::row_value(5)).empty());
  CHECK(kb.preimage(Relation::next(), r1).empty());
  CHECK(kb.domain(Relation::next()).size() == 4);

  CHECK(kb.image(Relation::index(), Value::row_value(5)) == ValueSet{Value::number(5)});
  CHECK(kb.preimage(Relation::index(), Value::number(2)) == ValueSet{Value::row_value(2)});

  const Value* three = kb.find_cell_by_normalized("3");
  CHECK(kb.image(Relation::num_prop(), *three) == ValueSet{Value::number(3)});
  const Value* turkey = kb.find_cell_by_normalized("turkey");
  CHECK(kb.image(Relation::num_prop(), *turkey).empty());
  CHECK(kb.domain(Relation::col("nation")).size() == 5);
}

TEST_CASE("numeric and date universes") {
  const KnowledgeBase& kb = testutil::medal_kb();
  ValueSet nums = kb.numeric_universe();
  REQUIRE(nums.size() == 6);
  for (int i = 0; i <= 5; ++i) CHECK(set_contains(nums, Value::number(i)));
  CHECK(kb.date_universe().empty());

  KnowledgeBase dated = load_table("Game,Date\nopener,2014-07-02\nfinal,2014-07-13\n",
                                   TableFormat::Csv);
  ValueSet dates = dated.date_universe();
  REQUIRE(dates.size() == 2);
  CHECK(dates[0] == Value::date_value(Date{2014, 7, 2}));
}

TEST_CASE("relation_map unions images over the input set") {
  const KnowledgeBase& kb = testutil::medal_kb();
  ValueSet in = {Value::row_value(1), Value::row_value(2)};
  ValueSet nations = relation_map(kb, Relation::col("nation"), in, false);
  REQUIRE(nations.size() == 2);
  // Silver column: France 1, Ukraine 1, Iran 2; reversed from cell "1".
  const Value* one = kb.find_cell_by_normalized("1");
  ValueSet rows = relation_map(kb, Relation::col("silver"), {*one}, true);
  CHECK(rows.size() == 2);
  CHECK(relation_map(kb, Relation::col("city"), in, false).empty());
}

TEST_CASE("duplicate headers get suffixed ids") {
  KnowledgeBase kb = load_table("A,A,a\n1,2,3\n", TableFormat::Csv);
  REQUIRE(kb.columns().size() == 3);
  CHECK(kb.columns()[0].id == "a");
  CHECK(kb.columns()[1].id == "a_2");
  CHECK(kb.columns()[2].id == "a_3");
}

TEST_CASE("colliding cell slugs get suffixed ids") {
  KnowledgeBase kb = load_table("X\na-b\na b\n", TableFormat::Csv);
  const Value* first = kb.find_cell_by_normalized("a-b");
  const Value* second = kb.find_cell_by_normalized("a b");
  REQUIRE(first != nullptr);
  REQUIRE(second != nullptr);
  CHECK(first->id == "a_b");
  CHECK(second->id == "a_b_2");
  CHECK_FALSE(*first == *second);
}

TEST_CASE("empty cells are placeholders outside the relations") {
  KnowledgeBase kb = load_table("A,B\nx,\ny,2\n", TableFormat::Csv);
  CHECK(kb.all_cells().size() == 3);
  CHECK(kb.image(Relation::col("b"), Value::row_value(1)).empty());
  CHECK(kb.cell_at(1, 1).kind == Value::Kind::Text);
  CHECK(kb.image(Relation::col("b"), Value::row_value(2)).size() == 1);
}

TEST_CASE("csv quoting and missing trailing newline") {
  KnowledgeBase kb = load_table("A,B\n\"x,y\",\"say \"\"hi\"\"\"\nplain,2", TableFormat::Csv);
  CHECK(kb.row_count() == 2);
  CHECK(kb.cell_at(1, 0).raw == "x,y");
  CHECK(kb.cell_at(1, 1).raw == "say \"hi\"");
  CHECK(kb.cell_at(2, 1).raw == "2");
}

TEST_CASE("tsv parsing") {
  KnowledgeBase kb = load_table("A\tB\r\n1\t2\n", TableFormat::Tsv);
  CHECK(kb.row_count() == 1);
  CHECK(kb.cell_at(1, 1).raw == "2");
}

TEST_CASE("malformed tables throw") {
  CHECK_THROWS_AS(load_table("", TableFormat::Csv), EmptyTable);
  CHECK_THROWS_AS(load_table("A,B\n", TableFormat::Csv), EmptyTable);
  CHECK_THROWS_AS(load_table("A,B\n1\n", TableFormat::Csv), RaggedRows);
  CHECK_THROWS_AS(load_table("A,B\n1,2,3\n", TableFormat::Csv), Error);
}
