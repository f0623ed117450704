// reference implementations and instance generators for testing the
// engine. Everything here is deliberately naive: enumerate candidate
// marker words, run the automaton on each by direct simulation, and
// compare sets. Keep this file free of the production algorithms.

#ifndef SPANNERS_ORACLE_HPP
#define SPANNERS_ORACLE_HPP

#include <random>
#include <string>
#include <vector>

#include "spanners/extensions.hpp"
#include "spanners/regex.hpp"

namespace spanners {

// enumeration guards; documents above max_len are never generated
struct OracleLimits {
    int max_len = 8;
    int max_vars = 4;
};

std::vector<std::string> all_docs(const std::string& sigma, int max_len);

SpanRelation brute_eval(const Vsa& a, const std::string& doc,
                        const OracleLimits& ol = {});
SpanRelation brute_eval_formula(const Formula& f, const std::string& sigma,
                                const std::string& doc, const OracleLimits& ol = {});
// literal reading of composition: every split window, every tuple of
// the window spanner, shifted back
SpanRelation brute_compose(const Vsa& ps, const Vsa& s, const std::string& doc,
                           const OracleLimits& ol = {});
KeyedRelation brute_annotated_eval(const Vsa& a, const std::string& doc,
                                   const OracleLimits& ol = {});

// bounded searches; these can refute, never confirm
struct BoundedReport {
    bool counterexample_found = false;
    std::string document;   // first offending document
    std::string document2;  // second document for the two-document checks
    std::string detail;
};

BoundedReport bounded_cover(const Vsa& p, const Vsa& s, int max_len);
BoundedReport bounded_disjoint(const Vsa& s, int max_len);
BoundedReport bounded_equivalence(const Vsa& a, const Vsa& b, int max_len);
BoundedReport bounded_split_correct(const Vsa& p, const Vsa& ps, const Vsa& s, int max_len);
BoundedReport bounded_highlander(const Vsa& s, int max_len);
// cover plus window-content consistency across any two documents
BoundedReport bounded_splittability_condition(const Vsa& p, const Vsa& s, int max_len);

struct Rng {
    std::mt19937 g;
    explicit Rng(unsigned seed) : g(seed) {}
    int pick(int lo, int hi);  // inclusive
    bool chance(double p);
};

Vsa random_vsa(Rng& rng, const std::string& sigma, const std::vector<std::string>& vars,
               int max_states);
Formula random_formula(Rng& rng, const std::string& sigma,
                       const std::vector<std::string>& vars, int depth);
// splitter-shaped instances hit the disjointness filter more often
Vsa random_splitter(Rng& rng, const std::string& sigma);
// complete DFA with dense transition table
Nfa random_dfa(Rng& rng, int n_syms, int max_states);

// exact: product of completed DFAs, reachability of all-rejecting
bool union_universal(const std::vector<Nfa>& dfas, int n_syms);

// containment instance whose verdict equals union universality
struct GadgetPair {
    Vsa lhs;
    Vsa rhs;
};
GadgetPair gadget_containment(const std::vector<Nfa>& dfas, const std::string& sigma);

// split-correctness instance whose verdict equals union universality
struct GadgetTriple {
    Vsa p;
    Vsa ps;
    Vsa s;
};
GadgetTriple gadget_split(const std::vector<Nfa>& dfas, const std::string& sigma);

// splittability of a boolean spanner against a whole-document splitter
GadgetTriple gadget_boolean_splittable(const Formula& r1, const Formula& r2,
                                       const std::string& sigma);
// self-splittability instance controlled by a formula containment
GadgetTriple gadget_selfsplit(const Formula& r1, const Formula& r2,
                              const std::string& sigma, char fresh);

}  // namespace spanners

#endif
