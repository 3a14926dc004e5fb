#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tablesem/logical_form.hpp"
#include "tablesem/table.hpp"

namespace tablesem {

inline constexpr const char* kCatEnt = "Ent";
inline constexpr const char* kCatRel = "Rel";
inline constexpr const char* kCatSet = "Set";
inline constexpr const char* kCatRoot = "Root";

// Construction-time checks on child denotations. A failing guard skips the
// combination before a logical form is built.
enum class GuardKind {
  None,
  SubNumeric,      // both children are singleton numbers
  AggNumeric,      // child is a nonempty all-number set
  CmpPivot,        // child is a singleton number
  SmallValueSets,  // both children are nonempty with at most 3 values
};

struct Macro;

struct Rule {
  std::string id;
  std::vector<std::string> args;  // child categories, in order
  std::string out;
  LfPtr tmpl;  // holes ?i are filled with child i's logical form
  GuardKind guard = GuardKind::None;
  bool is_macro = false;
  std::shared_ptr<const Macro> sub;  // set on macro rules
};

// The fixed compositional rule set.
const std::vector<Rule>& base_rules();
const Rule* find_base_rule(const std::string& id);

// Size-1 leaf rules. Their logical forms come from terminal_candidates, not
// from templates.
const std::vector<Rule>& terminal_rules();
const Rule* find_terminal_rule(const std::string& id);

struct TerminalCandidate {
  const Rule* rule = nullptr;
  std::string category;
  LfPtr lf;
  int span_begin = -1;  // token span for anchored terminals; -1,-1 floats
  int span_end = -1;
  std::string span_text;
};

// Scans token spans (up to 4 tokens) for entity, number, and date mentions
// and emits one floating relation candidate per table relation plus the
// all-rows set.
std::vector<TerminalCandidate> terminal_candidates(const KnowledgeBase& kb,
                                                   const std::vector<std::string>& tokens);

// 1 - edit_distance / max_length, in [0, 1].
double fuzzy_similarity(const std::string& a, const std::string& b);

inline constexpr double kFuzzyThreshold = 0.8;
inline constexpr int kMaxSpanTokens = 4;

// Markdown reference for every compositional and terminal rule, generated
// from the tables above.
std::string grammar_reference();

}  // namespace tablesem
