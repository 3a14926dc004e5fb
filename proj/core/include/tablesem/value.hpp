#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace tablesem {

// Calendar date with optional components; 0 means absent.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  friend bool operator==(const Date& a, const Date& b) = default;
  friend auto operator<=>(const Date& a, const Date& b) = default;
};

// A single denotation element. Cells are identified by a slug id derived
// from their normalized text; the raw text of the first occurrence is kept
// for display.
struct Value {
  enum class Kind { Cell, Row, Number, Date, Text };

  Kind kind = Kind::Text;
  std::string id;    // Cell: slug id; Text: payload
  std::string raw;   // Cell: original text
  int row = 0;       // Row: 1-based ordinal
  double num = 0.0;  // Number
  Date date;         // Date

  static Value cell(std::string id, std::string raw);
  static Value row_value(int ordinal);
  static Value number(double x);
  static Value date_value(Date d);
  static Value text(std::string s);

  bool operator==(const Value& o) const;
  bool operator<(const Value& o) const;
};

// "2" rather than "2.000000"; shortest round-ish decimal otherwise.
std::string format_number(double x);
std::string format_date(const Date& d);

// Canonical single-token-or-parenthesized rendering used by the logical
// form syntax and by denotation printing.
std::string to_string(const Value& v);

// Sorted, duplicate-free vector of values. All producers in this library
// return sets in canonical order.
using ValueSet = std::vector<Value>;

ValueSet make_set(std::vector<Value> vals);
void sort_unique(ValueSet& s);
bool set_contains(const ValueSet& s, const Value& v);
ValueSet set_union(const ValueSet& a, const ValueSet& b);
ValueSet set_intersect(const ValueSet& a, const ValueSet& b);

struct Relation {
  enum class Kind { Column, Next, Index, NumProp, DateProp };

  Kind kind = Kind::Next;
  std::string column;  // Kind::Column only

  static Relation col(std::string id);
  static Relation next();
  static Relation index();
  static Relation num_prop();
  static Relation date_prop();

  bool operator==(const Relation& o) const;
  bool operator<(const Relation& o) const;

  // Column ids render bare ("nation"); builtins are capitalized keywords
  // ("Next", "Index", "Num", "Date") that cannot collide with normalized
  // column ids.
  std::string name() const;
};

std::optional<Relation> relation_from_name(const std::string& name);

}  // namespace tablesem
