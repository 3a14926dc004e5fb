#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tablesem/derivation.hpp"
#include "tablesem/grammar.hpp"

namespace tablesem {

struct MacroNode;
using MacroNodePtr = std::shared_ptr<const MacroNode>;

// One node of a macro: either a compositional rule application or a
// placeholder leaf. Leaves sharing a merge class must be filled with the
// same partial logical form.
struct MacroNode {
  bool is_leaf = false;
  std::string category;    // leaf placeholder category
  int merge_class = -1;    // leaf: index into Macro::class_category
  std::string leaf_canon;  // leaf: canonical form it abstracted, the merge key
  const Rule* rule = nullptr;
  std::vector<MacroNodePtr> children;
};

struct Macro {
  MacroNodePtr root;
  std::vector<std::string> class_category;  // per class, first-occurrence order
  std::string serialization;
  LfPtr template_lf;  // holes are merge classes, labeled {Cat#k}
};

// Abstracts a root derivation: macro-rule applications are expanded to
// their stored compositional structure, terminal leaves become placeholders,
// and leaves holding equal partial forms merge into one class.
Macro extract_macro(const DerivPtr& d);

std::string serialize_macro(const MacroNodePtr& root);

// Supplement-style display, e.g. "R[{Rel#1}].R[Next].{Rel#1}.{Ent#2}".
std::string template_string(const Macro& m);

// Splits the macro into atomic sub-macros (smallest first, ties by
// serialization), emitting one rule each plus a final rule into Root.
// Identical sub-macros always produce identical rule ids.
std::vector<Rule> decompose(const Macro& m);

// The whole macro as one rule straight into Root.
Rule compile_single_rule(const Macro& m);

// Inverse of serialize_macro for stored macros (compositional-rule nodes
// and Ent/Rel/Set leaves). Throws SyntaxError on malformed input.
Macro macro_from_serialization(const std::string& s);

struct MacroEntry {
  Macro macro;
  long freq = 0;
  std::vector<std::string> rule_ids;  // decomposition, in emission order
  std::string template_str;
};

// An utterance that has been solved: its consistent logical form and the
// macro that form abstracts to.
struct Association {
  std::string utterance_id;
  std::vector<std::string> trigger_toks;
  std::string macro_serial;
  std::string lf_canon;
};

class MacroStore {
 public:
  // Inserts the macro (installing its decomposed rules once) or bumps the
  // frequency of an existing entry. Returns the entry.
  const MacroEntry& add_or_bump(const Macro& m);

  const MacroEntry* find(const std::string& serialization) const;
  const Rule* rule(const std::string& rule_id) const;
  std::vector<const Rule*> rules_for(const std::string& serialization) const;

  // Entries sorted by frequency descending, serialization ascending.
  std::vector<const MacroEntry*> by_frequency() const;

  size_t macro_count() const { return macros_.size(); }
  size_t rule_count() const { return rules_.size(); }
  long total_freq() const;

  void associate(Association a);
  const std::map<std::string, Association>& associations() const { return assoc_; }

  // One macro per line: freq TAB template TAB serialization.
  void save(const std::string& path) const;
  static MacroStore load(const std::string& path);

  // One association per line: id TAB tokens TAB macro TAB logical form.
  void save_associations(const std::string& path) const;
  void load_associations(const std::string& path);

 private:
  std::map<std::string, MacroEntry> macros_;
  std::map<std::string, Rule> rules_;  // stable nodes; Rule::sub owns sub-macros
  std::map<std::string, Association> assoc_;
};

}  // namespace tablesem
