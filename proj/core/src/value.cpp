#include "tablesem/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tablesem {

Value Value::cell(std::string id, std::string raw) {
  Value v;
  v.kind = Kind::Cell;
  v.id = std::move(id);
  v.raw = std::move(raw);
  return v;
}

Value Value::row_value(int ordinal) {
  Value v;
  v.kind = Kind::Row;
  v.row = ordinal;
  return v;
}

Value Value::number(double x) {
  Value v;
  v.kind = Kind::Number;
  v.num = x;
  return v;
}

Value Value::date_value(Date d) {
  Value v;
  v.kind = Kind::Date;
  v.date = d;
  return v;
}

Value Value::text(std::string s) {
  Value v;
  v.kind = Kind::Text;
  v.id = std::move(s);
  return v;
}

bool Value::operator==(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Cell:
      return id == o.id;
    case Kind::Row:
      return row == o.row;
    case Kind::Number:
      return num == o.num;
    case Kind::Date:
      return date == o.date;
    case Kind::Text:
      return id == o.id;
  }
  return false;
}

bool Value::operator<(const Value& o) const {
  if (kind != o.kind) return kind < o.kind;
  switch (kind) {
    case Kind::Cell:
      return id < o.id;
    case Kind::Row:
      return row < o.row;
    case Kind::Number:
      return num < o.num;
    case Kind::Date:
      return date < o.date;
    case Kind::Text:
      return id < o.id;
  }
  return false;
}

std::string format_number(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string format_date(const Date& d) {
  std::ostringstream out;
  out << "(date " << d.year << " " << d.month << " " << d.day << ")";
  return out.str();
}

std::string to_string(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Cell: {
      std::string out = "'";
      for (char c : v.raw) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
      }
      out += "'";
      return out;
    }
    case Value::Kind::Row:
      return "(row " + std::to_string(v.row) + ")";
    case Value::Kind::Number:
      return format_number(v.num);
    case Value::Kind::Date:
      return format_date(v.date);
    case Value::Kind::Text: {
      std::string out = "(str '";
      for (char c : v.id) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
      }
      out += "')";
      return out;
    }
  }
  return "?";
}

ValueSet make_set(std::vector<Value> vals) {
  sort_unique(vals);
  return vals;
}

void sort_unique(ValueSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool set_contains(const ValueSet& s, const Value& v) {
  return std::binary_search(s.begin(), s.end(), v);
}

ValueSet set_union(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ValueSet set_intersect(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Relation Relation::col(std::string id) {
  Relation r;
  r.kind = Kind::Column;
  r.column = std::move(id);
  return r;
}

Relation Relation::next() {
  Relation r;
  r.kind = Kind::Next;
  return r;
}

Relation Relation::index() {
  Relation r;
  r.kind = Kind::Index;
  return r;
}

Relation Relation::num_prop() {
  Relation r;
  r.kind = Kind::NumProp;
  return r;
}

Relation Relation::date_prop() {
  Relation r;
  r.kind = Kind::DateProp;
  return r;
}

bool Relation::operator==(const Relation& o) const {
  return kind == o.kind && (kind != Kind::Column || column == o.column);
}

bool Relation::operator<(const Relation& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (kind == Kind::Column) return column < o.column;
  return false;
}

std::string Relation::name() const {
  switch (kind) {
    case Kind::Column:
      return column;
    case Kind::Next:
      return "Next";
    case Kind::Index:
      return "Index";
    case Kind::NumProp:
      return "Num";
    case Kind::DateProp:
      return "Date";
  }
  return "?";
}

std::optional<Relation> relation_from_name(const std::string& name) {
  if (name == "Next") return Relation::next();
  if (name == "Index") return Relation::index();
  if (name == "Num") return Relation::num_prop();
  if (name == "Date") return Relation::date_prop();
  if (!name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
      })) {
    return Relation::col(name);
  }
  return std::nullopt;
}

}  // namespace tablesem
