// add-ons around the core procedures: support-language filters,
// black-box pipeline inference, and annotated spanners keyed by rule

#ifndef SPANNERS_EXTENSIONS_HPP
#define SPANNERS_EXTENSIONS_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spanners/decisions.hpp"

namespace spanners {

// variable-free automaton for the documents on which p outputs anything
Vsa lp_language(const Vsa& p);

// restrict splitter s to the documents where p outputs anything
Vsa filter_splitter(const Vsa& s, const Vsa& p, const Limits& lim = {});

struct FilterResult {
    Verdict verdict;
    std::optional<Vsa> filter;  // the support language used, set on yes
};

FilterResult split_correct_with_filter(const Vsa& p, const Vsa& ps, const Vsa& s,
                                       const Limits& lim = {});
SplittableResult splittable_with_filter(const Vsa& p, const Vsa& s, const Limits& lim = {});
Verdict self_splittable_with_filter(const Vsa& p, const Vsa& s, const Limits& lim = {});

// relational signature: symbol names with their variable sets
struct SigSymbol {
    std::string name;
    std::vector<std::string> vars;
};
struct Signature {
    std::vector<SigSymbol> symbols;
};

// one known fact: the named symbol is self-splittable by the splitter
struct Constraint {
    std::string symbol;
    Vsa splitter;
};

Signature load_signature(const std::string& path);
std::vector<Constraint> load_constraints(const std::string& path);

// symbols form one component under shared variables
bool signature_connected(const Signature& sig);

// soundness-only inference for a pipeline whose pieces are opaque:
// yes when the known constraints force self-splittability of the
// whole, unknown otherwise; never answers no
Verdict blackbox_infer(const Signature& sig, const std::vector<Constraint>& cons,
                       const Vsa& alpha, const Vsa& s, const Limits& lim = {});

// annotated automata: every final state carries a key
std::vector<std::string> annotation_keys(const Vsa& a);
Vsa key_slice(const Vsa& a, const std::string& key);
Vsa erase_keys(const Vsa& a);

using KeyedRelation = std::set<std::pair<std::string, SpanTuple>>;
KeyedRelation annotated_evaluate(const Vsa& a, const std::string& doc, const Limits& lim = {});

// disjoint when keys are erased, and no span is emitted under two keys
Verdict is_highlander(const Vsa& s, const Limits& lim = {});

// does running the window spanner picked by each split's key equal p
Verdict annotated_split_correct(const Vsa& p, const std::map<std::string, Vsa>& m,
                                const Vsa& s, const Limits& lim = {});
Verdict annotated_split_correct_ptime(const Vsa& p, const std::map<std::string, Vsa>& m,
                                      const Vsa& s, const Limits& lim = {});

struct AnnotatedSplittableResult {
    Verdict verdict;
    std::map<std::string, Vsa> canonical;  // set on yes
};

AnnotatedSplittableResult annotated_splittable(const Vsa& p, const Vsa& s,
                                               const Limits& lim = {});

}  // namespace spanners

#endif
