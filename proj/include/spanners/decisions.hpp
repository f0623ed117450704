// decision procedures on spanners and splitters: containment,
// disjointness, cover, composition, split-correctness, splittability

#ifndef SPANNERS_DECISIONS_HPP
#define SPANNERS_DECISIONS_HPP

#include <optional>

#include "spanners/vsa.hpp"

namespace spanners {

enum class Answer { Yes, No, Unknown };

struct Witness {
    std::string document;
    SpanTuple tuple;
    std::optional<Span> split;
    std::string side;  // "lhs", "rhs", or empty when not meaningful
};

struct Verdict {
    Answer answer = Answer::Yes;
    std::optional<Witness> witness;
    long long product_states = 0;
};

Verdict yes_verdict(long long states = 0);

// pre: same variables and alphabet on both sides
Verdict containment(const Vsa& p, const Vsa& q, const Limits& lim = {});
Verdict equivalence(const Vsa& p, const Vsa& q, const Limits& lim = {});

// no document gets two distinct overlapping output spans
Verdict splitter_disjoint(const Vsa& s, const Limits& lim = {});

// every output tuple of p lies inside some split of s
Verdict cover_condition_general(const Vsa& p, const Vsa& s, const Limits& lim = {});
// same question, restricted to deterministic functional inputs with a
// disjoint splitter; avoids the exponential construction
Verdict cover_condition_ptime(const Vsa& p, const Vsa& s, const Limits& lim = {});

// automaton for the spanner that runs s to pick a window and ps inside
// that window, with outputs shifted back into document coordinates.
// pre: s has exactly one variable and it is not a variable of ps
Vsa compose_construct(const Vsa& ps, const Vsa& s, const Limits& lim = {});

// does running ps per split of s equal running p on the whole document
Verdict split_correct(const Vsa& p, const Vsa& ps, const Vsa& s, const Limits& lim = {});
// polynomial route; requires p, ps, s deterministic functional and s
// disjoint, throws domain_error otherwise
Verdict split_correct_ptime(const Vsa& p, const Vsa& ps, const Vsa& s, const Limits& lim = {});

// the most permissive candidate for a window spanner of p under s.
// gate: s must be disjoint unless skip_disjoint_gate
Vsa canonical_split_spanner(const Vsa& p, const Vsa& s, bool skip_disjoint_gate = false,
                            const Limits& lim = {});

struct SplittableResult {
    Verdict verdict;
    std::optional<Vsa> canonical;  // set on yes
};

// is there any window spanner making p split-correct under s.
// s must be disjoint; no procedure is known otherwise
SplittableResult splittable(const Vsa& p, const Vsa& s, const Limits& lim = {});

Verdict self_splittable(const Vsa& p, const Vsa& s, const Limits& lim = {});
Verdict self_splittable_ptime(const Vsa& p, const Vsa& s, const Limits& lim = {});

}  // namespace spanners

#endif
