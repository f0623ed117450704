// reasoning about splitters themselves: sequential composition,
// commutation, subsumption, and inference across pipelines

#ifndef SPANNERS_REASONING_HPP
#define SPANNERS_REASONING_HPP

#include "spanners/decisions.hpp"

namespace spanners {

// splitter applying outer first, then inner on each window; the result
// keeps the variable of inner
Vsa compose_splitters(const Vsa& inner, const Vsa& outer, const Limits& lim = {});

// do the two orders of application agree on every document of the
// context language (all documents when context is absent)
Verdict commute(const Vsa& s1, const Vsa& s2, const std::optional<Vsa>& context,
                const Limits& lim = {});

// is s unaffected by a pre-pass of sprime on the context language
Verdict subsume(const Vsa& s, const Vsa& sprime, const std::optional<Vsa>& context,
                const Limits& lim = {});

struct TransitivityResult {
    Verdict verdict;
    bool inferred = false;  // concluded without the direct check
};

// if p is self-splittable by s1 and s1 absorbs a refinement by s2,
// conclude self-splittability by s2 without the direct check;
// otherwise decide directly
TransitivityResult transitivity_infer(const Vsa& p, const Vsa& s1, const Vsa& s2,
                                      const Limits& lim = {});

}  // namespace spanners

#endif
