#include "tablesem/macro.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tablesem/errors.hpp"
#include "tablesem/text.hpp"

namespace tablesem {
namespace {

MacroNodePtr make_leaf(std::string category, std::string canon) {
  auto n = std::make_shared<MacroNode>();
  n->is_leaf = true;
  n->category = std::move(category);
  n->leaf_canon = std::move(canon);
  return n;
}

MacroNodePtr make_internal(const Rule* rule, std::vector<MacroNodePtr> children) {
  auto n = std::make_shared<MacroNode>();
  n->rule = rule;
  n->children = std::move(children);
  return n;
}

// Fills the placeholder leaves of a stored sub-macro with expanded subtrees.
MacroNodePtr splice(const MacroNodePtr& n, const std::vector<MacroNodePtr>& fills) {
  if (n->is_leaf) return fills[static_cast<size_t>(n->merge_class)];
  std::vector<MacroNodePtr> kids;
  kids.reserve(n->children.size());
  for (const auto& c : n->children) kids.push_back(splice(c, fills));
  return make_internal(n->rule, std::move(kids));
}

MacroNodePtr expand(const DerivPtr& d) {
  if (d->rule == nullptr || d->rule->args.empty()) {
    return make_leaf(d->category, d->canon);
  }
  std::vector<MacroNodePtr> kids;
  kids.reserve(d->children.size());
  for (const auto& c : d->children) kids.push_back(expand(c));
  if (!d->rule->is_macro) return make_internal(d->rule, std::move(kids));
  return splice(d->rule->sub->root, kids);
}

// Rebuilds the tree assigning merge classes by leaf_canon in preorder.
MacroNodePtr assign_classes(const MacroNodePtr& n, std::map<std::string, int>& by_canon,
                            std::vector<std::string>& class_category) {
  if (n->is_leaf) {
    auto it = by_canon.find(n->leaf_canon);
    int cls;
    if (it == by_canon.end()) {
      cls = static_cast<int>(class_category.size());
      by_canon.emplace(n->leaf_canon, cls);
      class_category.push_back(n->category);
    } else {
      cls = it->second;
    }
    auto leaf = std::make_shared<MacroNode>(*n);
    leaf->merge_class = cls;
    return leaf;
  }
  std::vector<MacroNodePtr> kids;
  kids.reserve(n->children.size());
  for (const auto& c : n->children) kids.push_back(assign_classes(c, by_canon, class_category));
  return make_internal(n->rule, std::move(kids));
}

void render(const MacroNodePtr& n, std::string& out) {
  if (n->is_leaf) {
    out += "{" + n->category + "#" + std::to_string(n->merge_class + 1) + "}";
    return;
  }
  out += "(" + n->rule->id;
  for (const auto& c : n->children) {
    out += " ";
    render(c, out);
  }
  out += ")";
}

LfPtr build_template(const MacroNodePtr& n) {
  if (n->is_leaf) {
    std::string label =
        "{" + n->category + "#" + std::to_string(n->merge_class + 1) + "}";
    return lf::hole(n->merge_class, std::move(label));
  }
  std::vector<LfPtr> kids;
  kids.reserve(n->children.size());
  for (const auto& c : n->children) kids.push_back(build_template(c));
  return substitute_holes(n->rule->tmpl, kids);
}

Macro finalize_macro(const MacroNodePtr& raw_root) {
  Macro m;
  std::map<std::string, int> by_canon;
  m.root = assign_classes(raw_root, by_canon, m.class_category);
  m.serialization = serialize_macro(m.root);
  m.template_lf = build_template(m.root);
  return m;
}

// Mutable view used by decompose. Merged leaves are one node with several
// parents.
struct WorkNode {
  bool is_leaf = false;
  std::string category;
  const Rule* rule = nullptr;
  std::vector<WorkNode*> children;
  std::vector<WorkNode*> parents;
};

struct WorkGraph {
  std::vector<std::unique_ptr<WorkNode>> owned;
  WorkNode* root = nullptr;

  WorkNode* add(bool leaf) {
    owned.push_back(std::make_unique<WorkNode>());
    owned.back()->is_leaf = leaf;
    return owned.back().get();
  }
};

WorkNode* to_work(const MacroNodePtr& n, WorkGraph& g, std::map<int, WorkNode*>& leaf_by_class) {
  if (n->is_leaf) {
    auto it = leaf_by_class.find(n->merge_class);
    if (it != leaf_by_class.end()) return it->second;
    WorkNode* leaf = g.add(true);
    leaf->category = n->category;
    leaf_by_class.emplace(n->merge_class, leaf);
    return leaf;
  }
  WorkNode* node = g.add(false);
  node->rule = n->rule;
  for (const auto& c : n->children) {
    WorkNode* kid = to_work(c, g, leaf_by_class);
    node->children.push_back(kid);
    kid->parents.push_back(node);
  }
  return node;
}

// All nodes reachable downward from r, following shared leaves once.
std::set<WorkNode*> downward_closure(WorkNode* r) {
  std::set<WorkNode*> out;
  std::vector<WorkNode*> stack{r};
  while (!stack.empty()) {
    WorkNode* n = stack.back();
    stack.pop_back();
    if (!out.insert(n).second) continue;
    for (WorkNode* c : n->children) stack.push_back(c);
  }
  return out;
}

bool closure_valid(WorkNode* r, const std::set<WorkNode*>& closure) {
  for (WorkNode* n : closure) {
    if (n == r) continue;
    for (WorkNode* p : n->parents) {
      if (closure.count(p) == 0) return false;
    }
  }
  return true;
}

// Immutable snapshot of a working subgraph, classes assigned in preorder by
// leaf node identity.
MacroNodePtr snapshot(WorkNode* n, std::map<WorkNode*, int>& cls,
                      std::vector<std::string>& class_category) {
  if (n->is_leaf) {
    auto it = cls.find(n);
    int k;
    if (it == cls.end()) {
      k = static_cast<int>(class_category.size());
      cls.emplace(n, k);
      class_category.push_back(n->category);
    } else {
      k = it->second;
    }
    auto leaf = std::make_shared<MacroNode>();
    leaf->is_leaf = true;
    leaf->category = n->category;
    leaf->merge_class = k;
    return leaf;
  }
  std::vector<MacroNodePtr> kids;
  kids.reserve(n->children.size());
  for (WorkNode* c : n->children) kids.push_back(snapshot(c, cls, class_category));
  auto node = std::make_shared<MacroNode>();
  node->rule = n->rule;
  node->children = std::move(kids);
  return node;
}

Macro sub_macro_of(WorkNode* r) {
  Macro m;
  std::map<WorkNode*, int> cls;
  m.root = snapshot(r, cls, m.class_category);
  m.serialization = serialize_macro(m.root);
  m.template_lf = build_template(m.root);
  return m;
}

Rule rule_from_sub(const Macro& sub, bool final_rule) {
  Rule r;
  r.id = "M[" + sub.serialization + "]";
  if (final_rule) r.id += "->Root";
  r.args = sub.class_category;
  r.out = final_rule ? std::string(kCatRoot) : "M:" + sub.serialization;
  r.tmpl = sub.template_lf;
  r.is_macro = true;
  r.sub = std::make_shared<Macro>(sub);
  return r;
}

void internal_nodes_preorder(WorkNode* n, std::set<WorkNode*>& seen,
                             std::vector<WorkNode*>& out) {
  if (!seen.insert(n).second) return;
  if (!n->is_leaf) out.push_back(n);
  for (WorkNode* c : n->children) internal_nodes_preorder(c, seen, out);
}

}  // namespace

Macro extract_macro(const DerivPtr& d) { return finalize_macro(expand(d)); }

std::string serialize_macro(const MacroNodePtr& root) {
  std::string out;
  render(root, out);
  return out;
}

std::string template_string(const Macro& m) { return display_string(m.template_lf); }

std::vector<Rule> decompose(const Macro& m) {
  WorkGraph g;
  std::map<int, WorkNode*> leaf_by_class;
  g.root = to_work(m.root, g, leaf_by_class);

  std::vector<Rule> rules;
  while (true) {
    std::set<WorkNode*> seen;
    std::vector<WorkNode*> internals;
    internal_nodes_preorder(g.root, seen, internals);
    size_t all_count = seen.size();

    WorkNode* best = nullptr;
    size_t best_count = 0;
    std::string best_serial;
    for (WorkNode* r : internals) {
      std::set<WorkNode*> closure = downward_closure(r);
      if (!closure_valid(r, closure)) continue;
      std::string serial = serialize_macro(sub_macro_of(r).root);
      if (best == nullptr || closure.size() < best_count ||
          (closure.size() == best_count && serial < best_serial)) {
        best = r;
        best_count = closure.size();
        best_serial = std::move(serial);
      }
    }

    if (best == nullptr) throw Error("macro has no decomposable structure");
    Macro sub = sub_macro_of(best);
    if (best_count == all_count) {
      rules.push_back(rule_from_sub(sub, true));
      return rules;
    }
    rules.push_back(rule_from_sub(sub, false));

    WorkNode* placeholder = g.add(true);
    placeholder->category = "M:" + sub.serialization;
    for (WorkNode* p : best->parents) {
      for (WorkNode*& c : p->children) {
        if (c == best) c = placeholder;
      }
      placeholder->parents.push_back(p);
    }
  }
}

Rule compile_single_rule(const Macro& m) {
  Macro whole = m;
  if (whole.serialization.empty()) whole.serialization = serialize_macro(whole.root);
  if (whole.template_lf == nullptr) whole.template_lf = build_template(whole.root);
  return rule_from_sub(whole, true);
}

namespace {

struct SerialParser {
  const std::string& s;
  size_t pos = 0;

  explicit SerialParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }

  MacroNodePtr node(std::vector<std::string>& class_category) {
    skip_ws();
    if (pos >= s.size()) throw SyntaxError("truncated macro serialization");
    if (s[pos] == '{') {
      size_t close = s.find('}', pos);
      size_t hash = s.rfind('#', close);
      if (close == std::string::npos || hash == std::string::npos || hash <= pos) {
        throw SyntaxError("malformed macro placeholder");
      }
      std::string category = s.substr(pos + 1, hash - pos - 1);
      int cls = std::atoi(s.substr(hash + 1, close - hash - 1).c_str()) - 1;
      if (cls < 0) throw SyntaxError("macro placeholder index must be positive");
      pos = close + 1;
      while (static_cast<int>(class_category.size()) <= cls) class_category.emplace_back();
      if (class_category[static_cast<size_t>(cls)].empty()) {
        class_category[static_cast<size_t>(cls)] = category;
      } else if (class_category[static_cast<size_t>(cls)] != category) {
        throw SyntaxError("macro placeholder class used with two categories");
      }
      auto leaf = std::make_shared<MacroNode>();
      leaf->is_leaf = true;
      leaf->category = std::move(category);
      leaf->merge_class = cls;
      leaf->leaf_canon = "#" + std::to_string(cls);
      return leaf;
    }
    if (s[pos] != '(') throw SyntaxError("expected '(' or '{' in macro serialization");
    ++pos;
    size_t id_end = pos;
    while (id_end < s.size() && s[id_end] != ' ' && s[id_end] != ')') ++id_end;
    std::string id = s.substr(pos, id_end - pos);
    pos = id_end;
    const Rule* rule = find_base_rule(id);
    if (rule == nullptr) throw SyntaxError("unknown rule in macro serialization: " + id);
    std::vector<MacroNodePtr> kids;
    skip_ws();
    while (pos < s.size() && s[pos] != ')') {
      kids.push_back(node(class_category));
      skip_ws();
    }
    if (pos >= s.size()) throw SyntaxError("unbalanced macro serialization");
    ++pos;
    if (kids.size() != rule->args.size()) {
      throw SyntaxError("rule arity mismatch in macro serialization: " + id);
    }
    return make_internal(rule, std::move(kids));
  }
};

}  // namespace

Macro macro_from_serialization(const std::string& s) {
  SerialParser p(s);
  std::vector<std::string> class_category;
  MacroNodePtr root = p.node(class_category);
  p.skip_ws();
  if (p.pos != s.size()) throw SyntaxError("trailing input in macro serialization");
  for (const auto& cat : class_category) {
    if (cat.empty()) throw SyntaxError("macro placeholder classes must be contiguous");
  }
  Macro m;
  m.root = root;
  m.class_category = std::move(class_category);
  m.serialization = serialize_macro(root);
  m.template_lf = build_template(root);
  return m;
}

const MacroEntry& MacroStore::add_or_bump(const Macro& m) {
  auto it = macros_.find(m.serialization);
  if (it != macros_.end()) {
    ++it->second.freq;
    return it->second;
  }
  MacroEntry entry;
  entry.macro = m;
  entry.freq = 1;
  entry.template_str = template_string(m);
  for (Rule& r : decompose(m)) {
    entry.rule_ids.push_back(r.id);
    rules_.emplace(r.id, std::move(r));
  }
  auto [slot, inserted] = macros_.emplace(m.serialization, std::move(entry));
  return slot->second;
}

const MacroEntry* MacroStore::find(const std::string& serialization) const {
  auto it = macros_.find(serialization);
  return it == macros_.end() ? nullptr : &it->second;
}

const Rule* MacroStore::rule(const std::string& rule_id) const {
  auto it = rules_.find(rule_id);
  return it == rules_.end() ? nullptr : &it->second;
}

std::vector<const Rule*> MacroStore::rules_for(const std::string& serialization) const {
  std::vector<const Rule*> out;
  const MacroEntry* entry = find(serialization);
  if (entry == nullptr) return out;
  for (const auto& id : entry->rule_ids) {
    const Rule* r = rule(id);
    if (r != nullptr) out.push_back(r);
  }
  return out;
}

std::vector<const MacroEntry*> MacroStore::by_frequency() const {
  std::vector<const MacroEntry*> out;
  out.reserve(macros_.size());
  for (const auto& [serial, entry] : macros_) out.push_back(&entry);
  std::sort(out.begin(), out.end(), [](const MacroEntry* a, const MacroEntry* b) {
    if (a->freq != b->freq) return a->freq > b->freq;
    return a->macro.serialization < b->macro.serialization;
  });
  return out;
}

long MacroStore::total_freq() const {
  long total = 0;
  for (const auto& [serial, entry] : macros_) total += entry.freq;
  return total;
}

void MacroStore::associate(Association a) {
  assoc_[a.utterance_id] = std::move(a);
}

void MacroStore::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write macro store: " + path);
  for (const auto& [serial, entry] : macros_) {
    out << entry.freq << "\t" << entry.template_str << "\t" << serial << "\n";
  }
}

MacroStore MacroStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingStore("cannot read macro store: " + path);
  MacroStore store;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw MissingStore("malformed macro store line: " + line);
    }
    long freq = std::atol(line.substr(0, t1).c_str());
    std::string serial = line.substr(t2 + 1);
    Macro m = macro_from_serialization(serial);
    const MacroEntry& entry = store.add_or_bump(m);
    const_cast<MacroEntry&>(entry).freq = freq;
  }
  return store;
}

void MacroStore::save_associations(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write associations: " + path);
  for (const auto& [id, a] : assoc_) {
    out << id << "\t";
    for (size_t i = 0; i < a.trigger_toks.size(); ++i) {
      if (i > 0) out << " ";
      out << a.trigger_toks[i];
    }
    out << "\t" << a.macro_serial << "\t" << a.lf_canon << "\n";
  }
}

void MacroStore::load_associations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingStore("cannot read associations: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) throw MissingStore("malformed association line: " + line);
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    fields.push_back(line.substr(start));
    Association a;
    a.utterance_id = fields[0];
    std::istringstream toks(fields[1]);
    std::string tok;
    while (toks >> tok) a.trigger_toks.push_back(tok);
    a.macro_serial = fields[2];
    a.lf_canon = fields[3];
    assoc_[a.utterance_id] = std::move(a);
  }
}

}  // namespace tablesem
