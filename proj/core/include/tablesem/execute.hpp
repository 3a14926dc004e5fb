#pragma once

#include <string>
#include <vector>

#include "tablesem/logical_form.hpp"
#include "tablesem/table.hpp"
#include "tablesem/value.hpp"

namespace tablesem {

// Largest intermediate set the evaluator will build before giving up with
// ExecutionTooLarge.
inline constexpr size_t kMaxDenotationSize = 10000;

// Evaluates a logical form against a table. Throws TypeError, NonNumeric,
// NonSingleton, or ExecutionTooLarge on ill-behaved forms.
ValueSet execute(const LfPtr& z, const KnowledgeBase& kb);

// Non-throwing variant; returns false (and leaves out empty) on any
// evaluation error.
bool try_execute(const LfPtr& z, const KnowledgeBase& kb, ValueSet& out);

// Key under which a denotation element is matched against answer strings.
std::string denotation_key(const Value& v);

// Key for a raw answer string: numbers and dates are recognized and
// canonicalized, everything else compares as normalized text.
std::string target_key(const std::string& target);

// True iff predicted is nonempty, contains no row values, and its key set
// equals the key set of the targets.
bool is_consistent(const ValueSet& predicted, const std::vector<std::string>& targets);

// Display strings for a denotation, in set order.
std::vector<std::string> denotation_strings(const ValueSet& values);

}  // namespace tablesem
