// plain NFA over dense integer symbols, the workhorse behind the
// language-level containment checks

#ifndef SPANNERS_NFA_HPP
#define SPANNERS_NFA_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace spanners {

struct Nfa {
    int n = 0;          // states are 0..n-1
    int n_syms = 0;     // symbols are 0..n_syms-1
    std::vector<int> initials;
    std::vector<int> finals;
    std::vector<std::array<int, 3>> trans;  // {from, sym, to}
};

// drop states that are not both reachable and co-reachable; ids are
// remapped densely, an empty language yields n == 0
Nfa trim_nfa(const Nfa& a);
bool nfa_empty(const Nfa& a);
bool nfa_accepts(const Nfa& a, const std::vector<int>& word);
std::optional<std::vector<int>> shortest_word(const Nfa& a);

// inline eps edges before using the other routines here
Nfa eliminate_eps_nfa(const Nfa& a, const std::vector<std::pair<int, int>>& eps);

// subset construction; throws resource_error past state_cap
Nfa determinize_nfa(const Nfa& a, int state_cap);

// no word has two distinct accepting runs
bool nfa_unambiguous(const Nfa& a, long long work_cap);

struct ContainResult {
    bool contained = true;
    std::optional<std::vector<int>> witness;  // in L(a) minus L(b), when found
    long long product_states = 0;
    bool counted = false;  // decided by the path-counting route
};

// containment by per-length path counting; requires both sides
// unambiguous and throws domain_error otherwise
ContainResult ufa_contained(const Nfa& a, const Nfa& b, long long work_cap);

// containment with automatic fallback: path counting when both sides
// are unambiguous and within budget, lazy subset product otherwise
ContainResult nfa_contained(const Nfa& a, const Nfa& b, int state_cap);

}  // namespace spanners

#endif
