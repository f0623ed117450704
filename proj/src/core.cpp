#include "spanners/core.hpp"

#include <algorithm>
#include <sstream>

namespace spanners {

bool span_in_doc(const Span& s, int doc_len) {
    return 1 <= s.lo && s.lo <= s.hi && s.hi <= doc_len + 1;
}

bool spans_overlap(const Span& a, const Span& b) {
    // [i,j> and [i',j'> overlap iff i <= i' < j or i' <= i < j'.
    // Empty spans overlap nothing at their own boundary and two empty
    // spans never overlap; this falls out of the strict inequality.
    return (a.lo <= b.lo && b.lo < a.hi) || (b.lo <= a.lo && a.lo < b.hi);
}

bool span_contains(const Span& outer, const Span& inner) {
    return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

Span shift_span(const Span& inner, const Span& outer) {
    if (inner.hi - inner.lo > outer.hi - outer.lo)
        throw domain_error("shift_span: inner span does not fit the window");
    return Span{inner.lo + outer.lo - 1, inner.hi + outer.lo - 1};
}

SpanTuple shift_tuple(const SpanTuple& t, const Span& outer) {
    SpanTuple out;
    for (const auto& [v, s] : t) out[v] = shift_span(s, outer);
    return out;
}

std::string span_str(const Span& s) {
    std::ostringstream os;
    os << "[" << s.lo << "," << s.hi << ">";
    return os.str();
}

std::string tuple_str(const SpanTuple& t) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [v, s] : t) {
        if (!first) os << ", ";
        first = false;
        os << v << ":" << span_str(s);
    }
    os << "}";
    return os.str();
}

Label sym_label(char c) { return Label{LabelKind::Sym, c, ""}; }
Label eps_label() { return Label{}; }
Label open_label(const std::string& var) { return Label{LabelKind::Open, 0, var}; }
Label close_label(const std::string& var) { return Label{LabelKind::Close, 0, var}; }

bool is_varop(const Label& l) {
    return l.kind == LabelKind::Open || l.kind == LabelKind::Close;
}

std::string label_str(const Label& l) {
    switch (l.kind) {
        case LabelKind::Sym: return std::string(1, l.sym);
        case LabelKind::Eps: return "<e>";
        case LabelKind::Open: return l.var + "|-";
        case LabelKind::Close: return "-|" + l.var;
    }
    return "?";
}

bool varop_less(const Label& a, const Label& b) {
    // name first, open before close of the same variable
    if (a.var != b.var) return a.var < b.var;
    return a.kind == LabelKind::Open && b.kind == LabelKind::Close;
}

std::string clr(const RefWord& r) {
    std::string out;
    for (const auto& l : r)
        if (l.kind == LabelKind::Sym) out.push_back(l.sym);
    return out;
}

bool refword_valid(const RefWord& r, const std::vector<std::string>& vars) {
    std::map<std::string, int> st;  // 0 waiting, 1 open, 2 closed
    for (const auto& v : vars) st[v] = 0;
    for (const auto& l : r) {
        if (l.kind == LabelKind::Sym) continue;
        if (l.kind == LabelKind::Eps) return false;
        auto it = st.find(l.var);
        if (it == st.end()) return false;
        if (l.kind == LabelKind::Open) {
            if (it->second != 0) return false;
            it->second = 1;
        } else {
            if (it->second != 1) return false;
            it->second = 2;
        }
    }
    for (const auto& [v, s] : st)
        if (s != 2) return false;
    return true;
}

SpanTuple tuple_of_refword(const RefWord& r, const std::vector<std::string>& vars) {
    SpanTuple t;
    int pos = 1;  // boundary index, grows with each plain symbol
    std::map<std::string, int> open_at;
    for (const auto& l : r) {
        if (l.kind == LabelKind::Sym) {
            pos++;
        } else if (l.kind == LabelKind::Open) {
            open_at[l.var] = pos;
        } else if (l.kind == LabelKind::Close) {
            t[l.var] = Span{open_at.at(l.var), pos};
        }
    }
    for (const auto& v : vars)
        if (!t.count(v)) throw domain_error("tuple_of_refword: variable never closed: " + v);
    return t;
}

std::string refword_str(const RefWord& r) {
    std::string out;
    for (const auto& l : r) {
        if (!out.empty()) out.push_back(' ');
        out += label_str(l);
    }
    return out;
}

bool relations_equal(const SpanRelation& a, const SpanRelation& b) {
    auto domain_of = [](const SpanRelation& r) -> const SpanTuple* {
        return r.empty() ? nullptr : &*r.begin();
    };
    auto same_vars = [](const SpanTuple& x, const SpanTuple& y) {
        if (x.size() != y.size()) return false;
        auto i = x.begin();
        auto j = y.begin();
        for (; i != x.end(); ++i, ++j)
            if (i->first != j->first) return false;
        return true;
    };
    for (const SpanRelation* r : {&a, &b}) {
        const SpanTuple* first = domain_of(*r);
        if (!first) continue;
        for (const auto& t : *r)
            if (!same_vars(*first, t))
                throw domain_error("relations_equal: tuples with mixed variable sets");
    }
    const SpanTuple* fa = domain_of(a);
    const SpanTuple* fb = domain_of(b);
    if (fa && fb && !same_vars(*fa, *fb))
        throw domain_error("relations_equal: relations over different variable sets");
    return a == b;
}

}  // namespace spanners
