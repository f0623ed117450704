// basic vocabulary: spans, tuples, ref-words over an alphabet plus
// variable open/close markers

#ifndef SPANNERS_CORE_HPP
#define SPANNERS_CORE_HPP

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanners {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad input or a violated precondition
struct domain_error : error {
    using error::error;
};

// a configured budget was exceeded
struct resource_error : error {
    using error::error;
};

// half-open span [lo,hi> with 1-based positions; when attached to a
// document of length n, 1 <= lo <= hi <= n+1
struct Span {
    int lo = 1;
    int hi = 1;
    auto operator<=>(const Span&) const = default;
};

using SpanTuple = std::map<std::string, Span>;
using SpanRelation = std::set<SpanTuple>;

bool span_in_doc(const Span& s, int doc_len);
bool spans_overlap(const Span& a, const Span& b);
// inner lies within outer (empty inner counts when its position does)
bool span_contains(const Span& outer, const Span& inner);

// relocate inner, expressed relative to the window outer, into the
// coordinates of the document outer was taken from.
// pre: inner fits inside a document of length |outer|
Span shift_span(const Span& inner, const Span& outer);
SpanTuple shift_tuple(const SpanTuple& t, const Span& outer);

std::string span_str(const Span& s);
std::string tuple_str(const SpanTuple& t);

enum class LabelKind { Sym, Eps, Open, Close };

struct Label {
    LabelKind kind = LabelKind::Eps;
    char sym = 0;       // Sym only
    std::string var;    // Open/Close only
    auto operator<=>(const Label&) const = default;
};

Label sym_label(char c);
Label eps_label();
Label open_label(const std::string& var);
Label close_label(const std::string& var);
bool is_varop(const Label& l);
std::string label_str(const Label& l);

// fixed global order on variable operations: by variable name, and the
// open marker before the close marker of the same variable
bool varop_less(const Label& a, const Label& b);

using RefWord = std::vector<Label>;

// strip markers, keep the plain symbols
std::string clr(const RefWord& r);
// every variable in vars opens exactly once and closes after its open
bool refword_valid(const RefWord& r, const std::vector<std::string>& vars);
// pre: refword_valid(r, vars)
SpanTuple tuple_of_refword(const RefWord& r, const std::vector<std::string>& vars);
std::string refword_str(const RefWord& r);

// equality with a domain check: all tuples must share one variable set
bool relations_equal(const SpanRelation& a, const SpanRelation& b);

}  // namespace spanners

#endif
