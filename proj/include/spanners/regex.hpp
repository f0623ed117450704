// regex formulas with capture variables: parsing, printing, compiling
// down to variable-set automata

#ifndef SPANNERS_REGEX_HPP
#define SPANNERS_REGEX_HPP

#include <memory>
#include <string>
#include <vector>

#include "spanners/vsa.hpp"

namespace spanners {

struct Formula {
    enum Kind {
        Empty,     // <0>
        Eps,       // <e>
        Sym,       // single alphabet symbol
        Wild,      // .
        Union,     // l + r  (also |)
        Concat,    // juxtaposition
        Star,      // *
        Plus,      // postfix ++
        Opt,       // ?
        Capture,   // x{ e }
    };
    Kind kind = Empty;
    char sym = 0;
    std::string var;
    std::vector<Formula> kids;

    bool operator==(const Formula& o) const;
};

Formula f_empty();
Formula f_eps();
Formula f_sym(char c);
Formula f_wild();
Formula f_union(Formula l, Formula r);
Formula f_concat(Formula l, Formula r);
Formula f_star(Formula e);
Formula f_plus(Formula e);
Formula f_opt(Formula e);
Formula f_capture(const std::string& var, Formula e);

// throws domain_error with a position on bad syntax or a symbol
// outside sigma
Formula parse_formula(const std::string& text, const std::string& sigma);
// prints a form that parses back to the same tree
std::string print_formula(const Formula& f);
std::vector<std::string> formula_vars(const Formula& f);

Vsa compile_to_vsa(const Formula& f, const std::string& sigma);
bool check_functional_formula(const Formula& f, const std::string& sigma);

// file format: first line "alphabet: <symbols>", second line the formula
struct FormulaFile {
    std::string sigma;
    Formula formula;
};
FormulaFile load_formula_file(const std::string& path);

// convenience used all over the tests
Vsa vsa_of(const std::string& text, const std::string& sigma);

}  // namespace spanners

#endif
