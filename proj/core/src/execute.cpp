#include "tablesem/execute.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <utility>

#include "tablesem/errors.hpp"

namespace tablesem {
namespace {

bool cmp_num(CmpOp op, double a, double b) {
  switch (op) {
    case CmpOp::Gt:
      return a > b;
    case CmpOp::Lt:
      return a < b;
    case CmpOp::Ge:
      return a >= b;
    case CmpOp::Le:
      return a <= b;
  }
  return false;
}

bool cmp_date(CmpOp op, const Date& a, const Date& b) {
  switch (op) {
    case CmpOp::Gt:
      return a > b;
    case CmpOp::Lt:
      return a < b;
    case CmpOp::Ge:
      return a >= b;
    case CmpOp::Le:
      return a <= b;
  }
  return false;
}

// Binary argument: either a materialized set or a lazy comparison predicate.
struct Input {
  const ValueSet* set = nullptr;
  std::function<bool(const Value&)> pred;

  bool contains(const Value& v) const {
    if (set != nullptr) return set_contains(*set, v);
    return pred(v);
  }
};

class Evaluator {
 public:
  explicit Evaluator(const KnowledgeBase& kb) : kb_(kb) {}

  ValueSet unary(const LfPtr& z) {
    switch (z->op) {
      case LogicalForm::Op::Entity:
        return {z->value};
      case LogicalForm::Op::AllRows:
        return kb_.all_rows();
      case LogicalForm::Op::Var: {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
          if (it->first == z->var_id) return {it->second};
        }
        throw TypeError("unbound variable");
      }
      case LogicalForm::Op::Join: {
        const LfPtr& arg = z->children[1];
        if (arg->op == LogicalForm::Op::Compare) {
          Input in;
          in.pred = compare_pred(arg);
          return join(z->children[0], in, false);
        }
        ValueSet u = unary(arg);
        if (u.empty()) return {};
        Input in;
        in.set = &u;
        return join(z->children[0], in, false);
      }
      case LogicalForm::Op::Intersect:
        return set_intersect(unary(z->children[0]), unary(z->children[1]));
      case LogicalForm::Op::Union: {
        ValueSet r = set_union(unary(z->children[0]), unary(z->children[1]));
        check_size(r);
        return r;
      }
      case LogicalForm::Op::Count: {
        ValueSet s = unary(z->children[0]);
        return {Value::number(static_cast<double>(s.size()))};
      }
      case LogicalForm::Op::Aggregate:
        return aggregate(z);
      case LogicalForm::Op::Superlative:
        return superlative(z);
      case LogicalForm::Op::Compare:
        return compare_set(z);
      case LogicalForm::Op::Sub: {
        double a = singleton_number(z->children[0]);
        double b = singleton_number(z->children[1]);
        return {Value::number(a - b)};
      }
      case LogicalForm::Op::Hole:
        throw TypeError("cannot evaluate a template with holes");
      default:
        throw TypeError("binary form used where a set was expected");
    }
  }

 private:
  ValueSet join(const LfPtr& b, const Input& in, bool rev) {
    switch (b->op) {
      case LogicalForm::Op::Rel:
        return join_rel(b->relation, in, rev);
      case LogicalForm::Op::Reverse:
        return join(b->children[0], in, !rev);
      case LogicalForm::Op::Lambda:
        return join_lambda(b, in, rev);
      default:
        throw TypeError("set form used where a relation was expected");
    }
  }

  ValueSet join_rel(const Relation& r, const Input& in, bool rev) {
    if (!kb_.has_relation(r)) return {};
    if (in.set != nullptr) return relation_map(kb_, r, *in.set, !rev);
    ValueSet out;
    for (const Value& x : kb_.domain(r)) {
      const ValueSet& img = kb_.image(r, x);
      if (!rev) {
        for (const Value& y : img) {
          if (in.pred(y)) {
            out.push_back(x);
            break;
          }
        }
      } else if (in.pred(x)) {
        out.insert(out.end(), img.begin(), img.end());
      }
    }
    sort_unique(out);
    check_size(out);
    return out;
  }

  ValueSet join_lambda(const LfPtr& b, const Input& in, bool rev) {
    const int id = b->var_id;
    const LfPtr& body = b->children[0];
    ValueSet out;
    if (rev) {
      if (in.set == nullptr) throw TypeError("comparison cannot feed a lambda");
      for (const Value& x : *in.set) {
        env_.emplace_back(id, x);
        ValueSet img = unary(body);
        env_.pop_back();
        out.insert(out.end(), img.begin(), img.end());
        check_size(out);
      }
    } else {
      for (const Value& x : lambda_domain()) {
        env_.emplace_back(id, x);
        ValueSet img = unary(body);
        env_.pop_back();
        for (const Value& y : img) {
          if (in.contains(y)) {
            out.push_back(x);
            break;
          }
        }
      }
    }
    sort_unique(out);
    check_size(out);
    return out;
  }

  // Candidate bindings when a lambda is used in the forward direction.
  ValueSet lambda_domain() {
    ValueSet d = kb_.all_rows();
    const ValueSet& cells = kb_.all_cells();
    d.insert(d.end(), cells.begin(), cells.end());
    sort_unique(d);
    return d;
  }

  std::function<bool(const Value&)> compare_pred(const LfPtr& z) {
    const Value pivot = singleton_pivot(z->children[0]);
    const CmpOp op = z->cmp;
    return [op, pivot](const Value& v) {
      if (v.kind != pivot.kind) return false;
      if (v.kind == Value::Kind::Number) return cmp_num(op, v.num, pivot.num);
      return cmp_date(op, v.date, pivot.date);
    };
  }

  ValueSet compare_set(const LfPtr& z) {
    const Value pivot = singleton_pivot(z->children[0]);
    const ValueSet& universe =
        pivot.kind == Value::Kind::Number ? kb_.numeric_universe() : kb_.date_universe();
    ValueSet out;
    for (const Value& v : universe) {
      if (v.kind != pivot.kind) continue;
      bool keep = v.kind == Value::Kind::Number ? cmp_num(z->cmp, v.num, pivot.num)
                                                : cmp_date(z->cmp, v.date, pivot.date);
      if (keep) out.push_back(v);
    }
    sort_unique(out);
    check_size(out);
    return out;
  }

  Value singleton_pivot(const LfPtr& z) {
    ValueSet p = unary(z);
    if (p.size() != 1) throw NonSingleton("comparison pivot must be a single value");
    if (p[0].kind != Value::Kind::Number && p[0].kind != Value::Kind::Date) {
      throw NonNumeric("comparison pivot must be a number or date");
    }
    return p[0];
  }

  double singleton_number(const LfPtr& z) {
    ValueSet p = unary(z);
    if (p.size() != 1) throw NonSingleton("difference needs single values");
    if (p[0].kind != Value::Kind::Number) throw NonNumeric("difference needs numbers");
    return p[0].num;
  }

  ValueSet aggregate(const LfPtr& z) {
    ValueSet s = unary(z->children[0]);
    if (s.empty()) throw NonNumeric("aggregate of an empty set");
    double acc = 0.0;
    double best = s[0].num;
    for (const Value& v : s) {
      if (v.kind != Value::Kind::Number) throw NonNumeric("aggregate over non-numbers");
      acc += v.num;
      if (z->agg == AggKind::Max) best = std::max(best, v.num);
      if (z->agg == AggKind::Min) best = std::min(best, v.num);
    }
    switch (z->agg) {
      case AggKind::Max:
      case AggKind::Min:
        return {Value::number(best)};
      case AggKind::Sum:
        return {Value::number(acc)};
      case AggKind::Avg:
        return {Value::number(acc / static_cast<double>(s.size()))};
    }
    return {};
  }

  ValueSet superlative(const LfPtr& z) {
    ValueSet s = unary(z->children[0]);
    const bool want_max = z->sup == SupKind::ArgMax;
    std::vector<std::pair<double, Value>> keyed;
    for (const Value& x : s) {
      ValueSet single{x};
      Input in;
      in.set = &single;
      ValueSet img = join(z->children[1], in, true);
      bool has_key = false;
      double key = 0.0;
      for (const Value& y : img) {
        if (y.kind != Value::Kind::Number) continue;
        if (!has_key) {
          key = y.num;
          has_key = true;
        } else {
          key = want_max ? std::max(key, y.num) : std::min(key, y.num);
        }
      }
      if (has_key) keyed.emplace_back(key, x);
    }
    if (keyed.empty()) throw NonNumeric("superlative found no numeric keys");
    double best = keyed[0].first;
    for (const auto& [k, x] : keyed) best = want_max ? std::max(best, k) : std::min(best, k);
    ValueSet out;
    for (const auto& [k, x] : keyed) {
      if (k == best) out.push_back(x);
    }
    sort_unique(out);
    return out;
  }

  void check_size(const ValueSet& s) {
    if (s.size() > kMaxDenotationSize) throw ExecutionTooLarge("denotation exceeds size cap");
  }

  const KnowledgeBase& kb_;
  std::vector<std::pair<int, Value>> env_;
};

// Strips commas from a normalized string and accepts it only if the whole
// thing reads as one decimal number.
bool parse_full_number(const std::string& norm, double& out) {
  std::string compact;
  for (char c : norm) {
    if (c == ',') continue;
    compact += c;
  }
  if (compact.empty()) return false;
  const char* begin = compact.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == nullptr || *end != '\0' || end == begin) return false;
  out = v;
  return true;
}

std::string date_key(const Date& d) {
  if (d.month == 0 && d.day == 0) return std::to_string(d.year);
  return std::to_string(d.year) + "-" + std::to_string(d.month) + "-" + std::to_string(d.day);
}

}  // namespace

ValueSet execute(const LfPtr& z, const KnowledgeBase& kb) {
  Evaluator ev(kb);
  return ev.unary(z);
}

bool try_execute(const LfPtr& z, const KnowledgeBase& kb, ValueSet& out) {
  out.clear();
  try {
    out = execute(z, kb);
    return true;
  } catch (const Error&) {
    out.clear();
    return false;
  }
}

std::string denotation_key(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Cell:
      return normalize_text(v.raw);
    case Value::Kind::Number:
      return format_number(v.num);
    case Value::Kind::Date:
      return date_key(v.date);
    case Value::Kind::Text:
      return normalize_text(v.id);
    case Value::Kind::Row:
      return "\x01row";
  }
  return "";
}

std::string target_key(const std::string& target) {
  const std::string norm = normalize_text(target);
  double num = 0.0;
  if (parse_full_number(norm, num)) return format_number(num);
  NormalizedCell nc = normalize_cell(target);
  if (nc.date) return date_key(*nc.date);
  return norm;
}

bool is_consistent(const ValueSet& predicted, const std::vector<std::string>& targets) {
  if (predicted.empty() || targets.empty()) return false;
  std::set<std::string> have;
  for (const Value& v : predicted) {
    if (v.kind == Value::Kind::Row) return false;
    have.insert(denotation_key(v));
  }
  std::set<std::string> want;
  for (const std::string& t : targets) want.insert(target_key(t));
  return have == want;
}

std::vector<std::string> denotation_strings(const ValueSet& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const Value& v : values) {
    switch (v.kind) {
      case Value::Kind::Cell:
        out.push_back(v.raw);
        break;
      case Value::Kind::Number:
        out.push_back(format_number(v.num));
        break;
      case Value::Kind::Date: {
        const Date& d = v.date;
        if (d.month == 0 && d.day == 0) {
          out.push_back(std::to_string(d.year));
        } else {
          out.push_back(std::to_string(d.year) + "-" + std::to_string(d.month) + "-" +
                        std::to_string(d.day));
        }
        break;
      }
      case Value::Kind::Text:
        out.push_back(v.id);
        break;
      case Value::Kind::Row:
        out.push_back("(row " + std::to_string(v.row) + ")");
        break;
    }
  }
  return out;
}

}  // namespace tablesem
