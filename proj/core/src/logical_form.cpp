#include "tablesem/logical_form.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tablesem/errors.hpp"

namespace tablesem {

namespace lf {
namespace {

std::shared_ptr<LogicalForm> node(LogicalForm::Op op) {
  auto p = std::make_shared<LogicalForm>();
  p->op = op;
  return p;
}

LfPtr with_children(std::shared_ptr<LogicalForm> p, std::vector<LfPtr> children) {
  for (const auto& c : children) {
    if (c->has_hole) p->has_hole = true;
  }
  p->children = std::move(children);
  return p;
}

}  // namespace

LfPtr entity(Value v) {
  auto p = node(LogicalForm::Op::Entity);
  p->value = std::move(v);
  return p;
}

LfPtr rel(Relation r) {
  auto p = node(LogicalForm::Op::Rel);
  p->relation = std::move(r);
  return p;
}

LfPtr all_rows() { return node(LogicalForm::Op::AllRows); }

LfPtr join(LfPtr binary, LfPtr arg) {
  return with_children(node(LogicalForm::Op::Join), {std::move(binary), std::move(arg)});
}

LfPtr reverse(LfPtr binary) { return with_children(node(LogicalForm::Op::Reverse), {std::move(binary)}); }

LfPtr intersect(LfPtr a, LfPtr b) {
  return with_children(node(LogicalForm::Op::Intersect), {std::move(a), std::move(b)});
}

LfPtr set_union(LfPtr a, LfPtr b) {
  return with_children(node(LogicalForm::Op::Union), {std::move(a), std::move(b)});
}

LfPtr count(LfPtr a) { return with_children(node(LogicalForm::Op::Count), {std::move(a)}); }

LfPtr aggregate(AggKind k, LfPtr a) {
  auto p = node(LogicalForm::Op::Aggregate);
  p->agg = k;
  return with_children(std::move(p), {std::move(a)});
}

LfPtr superlative(SupKind k, LfPtr set, LfPtr binary) {
  auto p = node(LogicalForm::Op::Superlative);
  p->sup = k;
  return with_children(std::move(p), {std::move(set), std::move(binary)});
}

LfPtr compare(CmpOp op, LfPtr pivot) {
  auto p = node(LogicalForm::Op::Compare);
  p->cmp = op;
  return with_children(std::move(p), {std::move(pivot)});
}

LfPtr sub(LfPtr a, LfPtr b) { return with_children(node(LogicalForm::Op::Sub), {std::move(a), std::move(b)}); }

LfPtr lambda(int var_id, LfPtr body) {
  auto p = node(LogicalForm::Op::Lambda);
  p->var_id = var_id;
  return with_children(std::move(p), {std::move(body)});
}

LfPtr var(int var_id) {
  auto p = node(LogicalForm::Op::Var);
  p->var_id = var_id;
  return p;
}

LfPtr hole(int slot, std::string label) {
  auto p = node(LogicalForm::Op::Hole);
  p->var_id = slot;
  p->hole_label = std::move(label);
  p->has_hole = true;
  return p;
}

}  // namespace lf

const char* agg_name(AggKind k) {
  switch (k) {
    case AggKind::Max:
      return "max";
    case AggKind::Min:
      return "min";
    case AggKind::Sum:
      return "sum";
    case AggKind::Avg:
      return "avg";
  }
  return "?";
}

const char* sup_name(SupKind k) { return k == SupKind::ArgMax ? "argmax" : "argmin"; }

const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::Gt:
      return ">";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Le:
      return "<=";
  }
  return "?";
}

namespace {

// binders: innermost-last stack of var_ids, for de-Bruijn rendering
void render_canonical(const LfPtr& z, std::vector<int>& binders, std::string& out) {
  using Op = LogicalForm::Op;
  switch (z->op) {
    case Op::Entity:
      out += to_string(z->value);
      return;
    case Op::Rel:
      out += z->relation.name();
      return;
    case Op::AllRows:
      out += "Rows";
      return;
    case Op::Join:
      render_canonical(z->children[0], binders, out);
      out += '.';
      render_canonical(z->children[1], binders, out);
      return;
    case Op::Reverse:
      out += "(R ";
      render_canonical(z->children[0], binders, out);
      out += ')';
      return;
    case Op::Intersect:
    case Op::Union: {
      out += z->op == Op::Intersect ? "(and " : "(or ";
      render_canonical(z->children[0], binders, out);
      out += ' ';
      render_canonical(z->children[1], binders, out);
      out += ')';
      return;
    }
    case Op::Count:
      out += "(count ";
      render_canonical(z->children[0], binders, out);
      out += ')';
      return;
    case Op::Aggregate:
      out += '(';
      out += agg_name(z->agg);
      out += ' ';
      render_canonical(z->children[0], binders, out);
      out += ')';
      return;
    case Op::Superlative:
      out += '(';
      out += sup_name(z->sup);
      out += ' ';
      render_canonical(z->children[0], binders, out);
      out += ' ';
      render_canonical(z->children[1], binders, out);
      out += ')';
      return;
    case Op::Compare:
      out += '(';
      out += cmp_name(z->cmp);
      out += ' ';
      render_canonical(z->children[0], binders, out);
      out += ')';
      return;
    case Op::Sub:
      out += "(sub ";
      render_canonical(z->children[0], binders, out);
      out += ' ';
      render_canonical(z->children[1], binders, out);
      out += ')';
      return;
    case Op::Lambda:
      out += "(lambda ";
      binders.push_back(z->var_id);
      render_canonical(z->children[0], binders, out);
      binders.pop_back();
      out += ')';
      return;
    case Op::Var: {
      int depth = -1;
      for (int i = static_cast<int>(binders.size()) - 1; i >= 0; --i) {
        if (binders[static_cast<size_t>(i)] == z->var_id) {
          depth = static_cast<int>(binders.size()) - 1 - i;
          break;
        }
      }
      out += '$';
      out += std::to_string(depth < 0 ? z->var_id + 1000 : depth);
      return;
    }
    case Op::Hole:
      out += '?';
      out += std::to_string(z->var_id);
      return;
  }
}

const char* kVarNames[] = {"x", "y", "z", "u", "v", "w"};

void render_display(const LfPtr& z, std::vector<int>& binders, std::string& out) {
  using Op = LogicalForm::Op;
  switch (z->op) {
    case Op::Entity:
      if (z->value.kind == Value::Kind::Cell) {
        out += z->value.raw;
      } else if (z->value.kind == Value::Kind::Number) {
        out += format_number(z->value.num);
      } else {
        out += to_string(z->value);
      }
      return;
    case Op::Rel:
      out += z->relation.name();
      return;
    case Op::AllRows:
      out += "Rows";
      return;
    case Op::Join:
      render_display(z->children[0], binders, out);
      out += '.';
      render_display(z->children[1], binders, out);
      return;
    case Op::Reverse:
      out += "R[";
      render_display(z->children[0], binders, out);
      out += ']';
      return;
    case Op::Intersect:
    case Op::Union:
      out += z->op == Op::Intersect ? "and(" : "or(";
      render_display(z->children[0], binders, out);
      out += ", ";
      render_display(z->children[1], binders, out);
      out += ')';
      return;
    case Op::Count:
      out += "count(";
      render_display(z->children[0], binders, out);
      out += ')';
      return;
    case Op::Aggregate:
      out += agg_name(z->agg);
      out += '(';
      render_display(z->children[0], binders, out);
      out += ')';
      return;
    case Op::Superlative:
      out += sup_name(z->sup);
      out += '(';
      render_display(z->children[0], binders, out);
      out += ", ";
      render_display(z->children[1], binders, out);
      out += ')';
      return;
    case Op::Compare:
      out += cmp_name(z->cmp);
      out += '.';
      render_display(z->children[0], binders, out);
      return;
    case Op::Sub:
      out += "sub(";
      render_display(z->children[0], binders, out);
      out += ", ";
      render_display(z->children[1], binders, out);
      out += ')';
      return;
    case Op::Lambda: {
      size_t depth = binders.size();
      out += "lambda ";
      out += kVarNames[depth % 6];
      out += '.';
      binders.push_back(z->var_id);
      render_display(z->children[0], binders, out);
      binders.pop_back();
      return;
    }
    case Op::Var: {
      for (int i = static_cast<int>(binders.size()) - 1; i >= 0; --i) {
        if (binders[static_cast<size_t>(i)] == z->var_id) {
          out += kVarNames[static_cast<size_t>(i) % 6];
          return;
        }
      }
      out += "?var";
      return;
    }
    case Op::Hole:
      if (!z->hole_label.empty()) {
        out += z->hole_label;
      } else {
        out += '?';
        out += std::to_string(z->var_id);
      }
      return;
  }
}

LfType type_of(const LfPtr& z, std::set<int>& bound) {
  using Op = LogicalForm::Op;
  auto expect = [&](const LfPtr& c, LfType t, const char* where) {
    if (type_of(c, bound) != t) throw TypeError(std::string("expected ") + (t == LfType::Unary ? "unary" : "binary") + " operand in " + where);
  };
  switch (z->op) {
    case Op::Entity:
    case Op::AllRows:
      return LfType::Unary;
    case Op::Rel:
      return LfType::Binary;
    case Op::Join:
      expect(z->children[0], LfType::Binary, "join");
      expect(z->children[1], LfType::Unary, "join");
      return LfType::Unary;
    case Op::Reverse:
      expect(z->children[0], LfType::Binary, "reverse");
      return LfType::Binary;
    case Op::Intersect:
    case Op::Union:
    case Op::Sub:
      expect(z->children[0], LfType::Unary, "pair op");
      expect(z->children[1], LfType::Unary, "pair op");
      return LfType::Unary;
    case Op::Count:
    case Op::Aggregate:
      expect(z->children[0], LfType::Unary, "aggregate");
      return LfType::Unary;
    case Op::Superlative:
      expect(z->children[0], LfType::Unary, "superlative");
      expect(z->children[1], LfType::Binary, "superlative");
      return LfType::Unary;
    case Op::Compare:
      expect(z->children[0], LfType::Unary, "compare");
      return LfType::Unary;
    case Op::Lambda: {
      bound.insert(z->var_id);
      expect(z->children[0], LfType::Unary, "lambda");
      bound.erase(z->var_id);
      return LfType::Binary;
    }
    case Op::Var:
      if (!bound.count(z->var_id)) throw TypeError("unbound variable");
      return LfType::Unary;
    case Op::Hole:
      throw TypeError("template hole in closed form");
  }
  throw TypeError("unknown operator");
}

}  // namespace

std::string canonical_string(const LfPtr& z) {
  std::string out;
  std::vector<int> binders;
  render_canonical(z, binders, out);
  return out;
}

std::string display_string(const LfPtr& z) {
  std::string out;
  std::vector<int> binders;
  render_display(z, binders, out);
  return out;
}

LfType check_type(const LfPtr& z) {
  std::set<int> bound;
  return type_of(z, bound);
}

bool well_typed(const LfPtr& z) {
  try {
    check_type(z);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

LfPtr substitute_holes(const LfPtr& tmpl, const std::vector<LfPtr>& args) {
  if (!tmpl->has_hole) return tmpl;
  if (tmpl->op == LogicalForm::Op::Hole) {
    size_t slot = static_cast<size_t>(tmpl->var_id);
    if (slot >= args.size()) throw TypeError("hole index out of range");
    return args[slot];
  }
  auto copy = std::make_shared<LogicalForm>(*tmpl);
  copy->has_hole = false;
  for (auto& c : copy->children) {
    c = substitute_holes(c, args);
    if (c->has_hole) copy->has_hole = true;
  }
  return copy;
}

int lf_node_count(const LfPtr& z) {
  int n = 1;
  for (const auto& c : z->children) n += lf_node_count(c);
  return n;
}

namespace {
void collect_predicates(const LfPtr& z, std::set<std::string>& out) {
  using Op = LogicalForm::Op;
  switch (z->op) {
    case Op::Rel:
      out.insert(z->relation.name());
      break;
    case Op::Count:
      out.insert("count");
      break;
    case Op::Aggregate:
      out.insert(agg_name(z->agg));
      break;
    case Op::Superlative:
      out.insert(sup_name(z->sup));
      break;
    case Op::Compare:
      out.insert(cmp_name(z->cmp));
      break;
    case Op::Intersect:
      out.insert("and");
      break;
    case Op::Union:
      out.insert("or");
      break;
    case Op::Sub:
      out.insert("sub");
      break;
    default:
      break;
  }
  for (const auto& c : z->children) collect_predicates(c, out);
}
}  // namespace

std::vector<std::string> lf_predicates(const LfPtr& z) {
  std::set<std::string> s;
  collect_predicates(z, s);
  return {s.begin(), s.end()};
}

}  // namespace tablesem
