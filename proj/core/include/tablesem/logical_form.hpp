#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tablesem/value.hpp"

namespace tablesem {

class KnowledgeBase;

enum class AggKind { Max, Min, Sum, Avg };
enum class SupKind { ArgMax, ArgMin };
enum class CmpOp { Gt, Lt, Ge, Le };

struct LogicalForm;
using LfPtr = std::shared_ptr<const LogicalForm>;

// Immutable expression tree. Unary forms denote value sets; binary forms
// (Rel, Reverse, Lambda) denote pair sets and appear under Join, Reverse or
// Superlative. Hole is a template-only slot used by grammar rules.
struct LogicalForm {
  enum class Op {
    Entity,
    Rel,
    AllRows,
    Join,       // children: binary, unary
    Reverse,    // child: binary
    Intersect,  // children: unary, unary
    Union,
    Count,
    Aggregate,    // agg over unary child
    Superlative,  // children: set, binary
    Compare,      // child: pivot
    Sub,          // children: unary, unary
    Lambda,       // child: body; binder id in var_id
    Var,
    Hole,
  };

  Op op = Op::Entity;
  Value value;        // Entity
  Relation relation;  // Rel
  AggKind agg = AggKind::Max;
  SupKind sup = SupKind::ArgMax;
  CmpOp cmp = CmpOp::Gt;
  int var_id = 0;          // Lambda binder, Var reference, Hole slot
  std::string hole_label;  // optional display name for Hole
  std::vector<LfPtr> children;
  bool has_hole = false;
};

namespace lf {
LfPtr entity(Value v);
LfPtr rel(Relation r);
LfPtr all_rows();
LfPtr join(LfPtr binary, LfPtr arg);
LfPtr reverse(LfPtr binary);
LfPtr intersect(LfPtr a, LfPtr b);
LfPtr set_union(LfPtr a, LfPtr b);
LfPtr count(LfPtr a);
LfPtr aggregate(AggKind k, LfPtr a);
LfPtr superlative(SupKind k, LfPtr set, LfPtr binary);
LfPtr compare(CmpOp op, LfPtr pivot);
LfPtr sub(LfPtr a, LfPtr b);
LfPtr lambda(int var_id, LfPtr body);
LfPtr var(int var_id);
LfPtr hole(int slot, std::string label = "");
}  // namespace lf

// Deterministic, parse-round-trippable rendering; lambda variables are
// alpha-renamed to de-Bruijn references ($0 = innermost binder). Documented
// in core/docs/lf-syntax.md.
std::string canonical_string(const LfPtr& z);

// Human-oriented rendering: R[...] for reverse, count(...)/argmax(...,...),
// named lambda variables, hole labels like {Rel#1}.
std::string display_string(const LfPtr& z);

enum class LfType { Unary, Binary };

// Throws TypeError on ill-typed, open, or hole-containing forms.
LfType check_type(const LfPtr& z);
bool well_typed(const LfPtr& z);

// Replaces Hole(i) with args[i]; shares unchanged subtrees.
LfPtr substitute_holes(const LfPtr& tmpl, const std::vector<LfPtr>& args);

int lf_node_count(const LfPtr& z);

// Relation and operator names appearing in the form, sorted unique.
std::vector<std::string> lf_predicates(const LfPtr& z);

// Parses the canonical syntax. When kb is given, quoted entities resolve to
// the table's cell values; otherwise cells are fabricated from the text.
LfPtr parse_lf(const std::string& text, const KnowledgeBase* kb = nullptr);

const char* agg_name(AggKind k);
const char* sup_name(SupKind k);
const char* cmp_name(CmpOp op);

}  // namespace tablesem
