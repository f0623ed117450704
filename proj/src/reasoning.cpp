#include "spanners/reasoning.hpp"

#include <algorithm>

namespace spanners {

namespace {

void need_splitter(const Vsa& s) {
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
}

void need_plain_context(const Vsa& r) {
    if (!r.vars.empty()) throw domain_error("the context language must be variable free");
}

Vsa restrict_to(const Vsa& a, const std::optional<Vsa>& context, const Limits& lim) {
    if (!context) return a;
    return vsa_join(a, *context, lim);
}

}  // namespace

Vsa compose_splitters(const Vsa& inner, const Vsa& outer, const Limits& lim) {
    validate(inner);
    validate(outer);
    need_splitter(inner);
    need_splitter(outer);
    Vsa o = outer;
    if (outer.vars[0] == inner.vars[0]) {
        std::vector<std::string> taken{inner.vars[0]};
        o = rename_var(outer, outer.vars[0], fresh_var(outer.vars[0], taken));
    }
    return compose_construct(inner, o, lim);
}

Verdict commute(const Vsa& s1, const Vsa& s2, const std::optional<Vsa>& context,
                const Limits& lim) {
    validate(s1);
    validate(s2);
    need_splitter(s1);
    need_splitter(s2);
    if (context) {
        validate(*context);
        need_plain_context(*context);
    }
    Vsa a = compose_splitters(s1, s2, lim);
    Vsa b = compose_splitters(s2, s1, lim);
    if (s2.vars[0] != s1.vars[0]) b = rename_var(b, s2.vars[0], s1.vars[0]);
    return equivalence(restrict_to(a, context, lim), restrict_to(b, context, lim), lim);
}

Verdict subsume(const Vsa& s, const Vsa& sprime, const std::optional<Vsa>& context,
                const Limits& lim) {
    validate(s);
    validate(sprime);
    need_splitter(s);
    need_splitter(sprime);
    if (context) {
        validate(*context);
        need_plain_context(*context);
    }
    Vsa pre_passed = compose_splitters(s, sprime, lim);
    return equivalence(restrict_to(s, context, lim),
                       restrict_to(pre_passed, context, lim), lim);
}

TransitivityResult transitivity_infer(const Vsa& p, const Vsa& s1, const Vsa& s2,
                                      const Limits& lim) {
    TransitivityResult out;
    Verdict base = self_splittable(p, s1, lim);
    if (base.answer == Answer::Yes) {
        Verdict absorbed = equivalence(s1, compose_splitters(s1, s2, lim), lim);
        if (absorbed.answer == Answer::Yes) {
            out.verdict = yes_verdict(base.product_states + absorbed.product_states);
            out.inferred = true;
            return out;
        }
    }
    out.verdict = self_splittable(p, s2, lim);
    out.inferred = false;
    return out;
}

}  // namespace spanners
