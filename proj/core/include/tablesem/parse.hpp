#pragma once

#include <vector>

#include "tablesem/derivation.hpp"
#include "tablesem/grammar.hpp"
#include "tablesem/table.hpp"

namespace tablesem {

// Floating chart parser over (category, size) cells. rules is the active
// compositional rule set for this utterance; leaves come from
// terminal_candidates. Throws InvalidBeam when opts.beam_size < 1.
ParseResult parse(const KnowledgeBase& kb, const std::vector<std::string>& tokens,
                  const std::vector<const Rule*>& rules, const DerivationScorer& scorer,
                  const ParseOptions& opts = {}, const StopHook& stop = nullptr);

// Enumerates every well-formed root logical form up to max_size with no
// beams and no scoring, as a reference for beam-free behavior. Throws
// SpaceExplosion past the cap.
std::vector<DerivPtr> enumerate_exhaustive(const KnowledgeBase& kb,
                                           const std::vector<std::string>& tokens,
                                           const std::vector<const Rule*>& rules, int max_size,
                                           long cap = 1000000);

// Shared by both routes: builds, guards, and executes one rule application.
// Returns nullptr when a guard rejects the children or execution fails or
// produces an empty set for a pruned category. constructed reports whether
// a logical form was actually built (guard rejections build none).
DerivPtr apply_rule(const KnowledgeBase& kb, const Rule* rule, std::vector<DerivPtr> children,
                    bool prune_empty, bool* constructed = nullptr);

}  // namespace tablesem
