// internals shared between the polynomial split-correctness route and
// its annotated variant

#ifndef SPANNERS_PTIME_PARTS_HPP
#define SPANNERS_PTIME_PARTS_HPP

#include <optional>
#include <vector>

#include "spanners/decisions.hpp"

namespace spanners::detail {

// splitter variable renamed away from the given spanner variables
Vsa detach_splitter_var(const Vsa& s, const std::vector<std::string>& spanner_vars);

// disagreement between p and ps inside a window of s whose marker block
// crosses at least one symbol. s must be deterministic and eps free,
// s_finals selects its accepting states, x is its variable. p and ps
// must be deterministic functional. Adds explored states to states.
std::optional<Verdict> window_disagreement(const Vsa& p, const Vsa& ps, const Vsa& s,
                                           const std::vector<char>& s_finals,
                                           const std::string& x, long long& states,
                                           const Limits& lim);

// remaining corner: tuples whose markers all sit at one boundary.
// Compares p against the composed automaton on documents carrying one
// position marker. p must be deterministic functional.
Verdict marked_block_equality(const Vsa& p, const Vsa& composed,
                              const std::vector<std::string>& vars, const std::string& x,
                              long long states_so_far, const Limits& lim);

}  // namespace spanners::detail

#endif
