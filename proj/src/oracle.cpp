#include "spanners/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace spanners {

int Rng::pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
bool Rng::chance(double p) { return std::uniform_real_distribution<double>(0, 1)(g) < p; }

std::vector<std::string> all_docs(const std::string& sigma, int max_len) {
    std::vector<std::string> out{""};
    size_t layer_begin = 0;
    for (int len = 1; len <= max_len; len++) {
        size_t layer_end = out.size();
        for (size_t i = layer_begin; i < layer_end; i++)
            for (char c : sigma) out.push_back(out[i] + c);
        layer_begin = layer_end;
    }
    return out;
}

namespace {

// subset simulation over at most 64 states, one bitmask step per letter
struct MaskSim {
    std::map<Label, int> label_ids;
    std::vector<std::vector<uint64_t>> step_of;  // per label per state
    uint64_t start = 0, fin = 0;

    explicit MaskSim(const Vsa& a) {
        if (a.n_states > 64)
            throw resource_error("reference evaluation is limited to 64 states");
        auto lid = [&](const Label& l) {
            auto it = label_ids.find(l);
            if (it != label_ids.end()) return it->second;
            int id = (int)label_ids.size();
            label_ids.emplace(l, id);
            step_of.emplace_back(a.n_states, 0);
            return id;
        };
        for (const auto& t : a.transitions)
            step_of[lid(t.label)][t.from] |= 1ull << t.to;
        start = 1ull << a.initial;
        for (int q : a.finals) fin |= 1ull << q;
    }

    uint64_t step(uint64_t mask, const Label& l) const {
        auto it = label_ids.find(l);
        if (it == label_ids.end()) return 0;
        const auto& tab = step_of[it->second];
        uint64_t out = 0;
        while (mask) {
            int q = std::countr_zero(mask);
            mask &= mask - 1;
            out |= tab[q];
        }
        return out;
    }

    bool accepting(uint64_t mask) const { return (mask & fin) != 0; }
};

void check_doc(const Vsa& a, const std::string& doc, const OracleLimits& ol) {
    if ((int)doc.size() > ol.max_len)
        throw resource_error("reference evaluation document too long");
    if ((int)a.vars.size() > ol.max_vars)
        throw resource_error("reference evaluation has too many variables");
    for (char c : doc)
        if (a.sigma.find(c) == std::string::npos)
            throw domain_error(std::string("document symbol not in alphabet: ") + c);
}

// every interleaving of a well formed marker word into doc, shared
// prefixes explored once
template <typename Accept>
void enumerate_refwords(const std::string& doc, const std::vector<std::string>& vars,
                        const Accept& on_letter) {
    int nv = (int)vars.size();
    int n = (int)doc.size();
    std::vector<uint8_t> st(nv, 0);
    std::vector<int> lo(nv, 0), hi(nv, 0);
    // on_letter(label, pos, st, lo, hi, at_word_end) returns false to prune
    struct Walk {
        const std::string& doc;
        const std::vector<std::string>& vars;
        const Accept& cb;
        int n, nv;
        std::vector<uint8_t>& st;
        std::vector<int>&lo, &hi;

        void go(int pos, int depth) {
            for (int i = 0; i < nv; i++) {
                if (st[i] == 0) {
                    st[i] = 1;
                    lo[i] = pos + 1;
                    if (cb.enter(open_label(vars[i]), depth)) finish(pos, depth + 1);
                    cb.leave(depth);
                    st[i] = 0;
                } else if (st[i] == 1) {
                    st[i] = 2;
                    hi[i] = pos + 1;
                    if (cb.enter(close_label(vars[i]), depth)) finish(pos, depth + 1);
                    cb.leave(depth);
                    st[i] = 1;
                }
            }
            if (pos < n) {
                if (cb.enter(sym_label(doc[pos]), depth)) finish(pos + 1, depth + 1);
                cb.leave(depth);
            }
        }

        void finish(int pos, int depth) {
            bool closed = true;
            for (int i = 0; i < nv; i++)
                if (st[i] != 2) closed = false;
            if (pos == n && closed) cb.complete(depth, lo, hi);
            go(pos, depth);
        }
    };
    Walk w{doc, vars, on_letter, n, nv, st, lo, hi};
    w.finish(0, 0);
}

}  // namespace

SpanRelation brute_eval(const Vsa& a0, const std::string& doc, const OracleLimits& ol) {
    validate(a0);
    check_doc(a0, doc, ol);
    Vsa a = eliminate_eps(a0);
    MaskSim sim(a);
    SpanRelation out;
    struct Cb {
        const Vsa& a;
        const MaskSim& sim;
        SpanRelation& out;
        mutable std::vector<uint64_t> masks;

        bool enter(const Label& l, int depth) const {
            uint64_t m = sim.step(masks[depth], l);
            if ((int)masks.size() == depth + 1) masks.push_back(m);
            masks[depth + 1] = m;
            return m != 0;
        }
        void leave(int) const {}
        void complete(int depth, const std::vector<int>& lo,
                      const std::vector<int>& hi) const {
            if (!sim.accepting(masks[depth])) return;
            SpanTuple t;
            for (size_t i = 0; i < a.vars.size(); i++)
                t[a.vars[i]] = Span{lo[i], hi[i]};
            out.insert(t);
        }
    };
    Cb cb{a, sim, out, {sim.start}};
    enumerate_refwords(doc, a.vars, cb);
    return out;
}

namespace {

struct AstMatcher {
    const std::string& sigma;
    std::vector<Label> letters;
    std::map<std::tuple<const Formula*, int, int>, bool> memo;

    bool match(const Formula& f, int lo, int hi) {
        auto key = std::make_tuple(&f, lo, hi);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool r = false;
        switch (f.kind) {
            case Formula::Empty: r = false; break;
            case Formula::Eps: r = lo == hi; break;
            case Formula::Sym:
                r = hi == lo + 1 && letters[lo] == sym_label(f.sym);
                break;
            case Formula::Wild:
                r = hi == lo + 1 && letters[lo].kind == LabelKind::Sym;
                break;
            case Formula::Union:
                r = match(f.kids[0], lo, hi) || match(f.kids[1], lo, hi);
                break;
            case Formula::Concat:
                for (int mid = lo; mid <= hi && !r; mid++)
                    r = match(f.kids[0], lo, mid) && match(f.kids[1], mid, hi);
                break;
            case Formula::Star:
                // empty pieces can be dropped, so the first piece may be
                // forced nonempty
                r = lo == hi;
                for (int mid = lo + 1; mid <= hi && !r; mid++)
                    r = match(f.kids[0], lo, mid) && match(f, mid, hi);
                break;
            case Formula::Plus:
                r = match(f.kids[0], lo, hi);
                for (int mid = lo + 1; mid < hi && !r; mid++)
                    r = match(f.kids[0], lo, mid) && match(f, mid, hi);
                break;
            case Formula::Opt: r = lo == hi || match(f.kids[0], lo, hi); break;
            case Formula::Capture:
                r = hi - lo >= 2 && letters[lo] == open_label(f.var) &&
                    letters[hi - 1] == close_label(f.var) &&
                    match(f.kids[0], lo + 1, hi - 1);
                break;
        }
        memo.emplace(key, r);
        return r;
    }
};

}  // namespace

SpanRelation brute_eval_formula(const Formula& f, const std::string& sigma,
                                const std::string& doc, const OracleLimits& ol) {
    auto vars = formula_vars(f);
    if ((int)vars.size() > ol.max_vars)
        throw resource_error("reference evaluation has too many variables");
    if ((int)doc.size() > ol.max_len)
        throw resource_error("reference evaluation document too long");
    SpanRelation out;
    struct Cb {
        const Formula& f;
        const std::string& sigma;
        const std::vector<std::string>& vars;
        SpanRelation& out;
        mutable std::vector<Label> letters;

        bool enter(const Label& l, int depth) const {
            letters.resize(depth);
            letters.push_back(l);
            return true;
        }
        void leave(int depth) const { letters.resize(depth); }
        void complete(int, const std::vector<int>& lo, const std::vector<int>& hi) const {
            AstMatcher m{sigma, letters, {}};
            if (!m.match(f, 0, (int)letters.size())) return;
            SpanTuple t;
            for (size_t i = 0; i < vars.size(); i++) t[vars[i]] = Span{lo[i], hi[i]};
            out.insert(t);
        }
    };
    Cb cb{f, sigma, vars, out, {}};
    enumerate_refwords(doc, vars, cb);
    return out;
}

SpanRelation brute_compose(const Vsa& ps, const Vsa& s, const std::string& doc,
                           const OracleLimits& ol) {
    if (s.vars.size() != 1) throw domain_error("splitter needs exactly one variable");
    SpanRelation out;
    for (const auto& split_tuple : brute_eval(s, doc, ol)) {
        Span split = split_tuple.begin()->second;
        std::string window = doc.substr(split.lo - 1, split.hi - split.lo);
        for (const auto& t : brute_eval(ps, window, ol)) out.insert(shift_tuple(t, split));
    }
    return out;
}

KeyedRelation brute_annotated_eval(const Vsa& a, const std::string& doc,
                                   const OracleLimits& ol) {
    KeyedRelation out;
    for (const auto& key : annotation_keys(a))
        for (const auto& t : brute_eval(key_slice(a, key), doc, ol))
            out.insert({key, t});
    return out;
}

namespace {

std::vector<Span> all_spans(int len) {
    std::vector<Span> out;
    for (int i = 1; i <= len + 1; i++)
        for (int j = i; j <= len + 1; j++) out.push_back(Span{i, j});
    return out;
}

std::vector<SpanTuple> all_tuples(const std::vector<std::string>& vars, int len) {
    std::vector<SpanTuple> out{{}};
    for (const auto& v : vars) {
        std::vector<SpanTuple> next;
        for (const auto& t : out)
            for (const auto& s : all_spans(len)) {
                auto t2 = t;
                t2[v] = s;
                next.push_back(t2);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

BoundedReport bounded_cover(const Vsa& p, const Vsa& s, int max_len) {
    for (const auto& d : all_docs(p.sigma, max_len)) {
        std::vector<Span> splits;
        for (const auto& st : brute_eval(s, d)) splits.push_back(st.begin()->second);
        for (const auto& t : brute_eval(p, d)) {
            bool covered = false;
            for (const auto& sp : splits) {
                bool all_in = true;
                for (const auto& [v, span] : t)
                    if (!span_contains(sp, span)) all_in = false;
                if (all_in) covered = true;
            }
            if (!covered)
                return {true, d, "", "uncovered tuple " + tuple_str(t)};
        }
    }
    return {};
}

BoundedReport bounded_disjoint(const Vsa& s, int max_len) {
    for (const auto& d : all_docs(s.sigma, max_len)) {
        std::vector<Span> spans;
        for (const auto& st : brute_eval(s, d)) spans.push_back(st.begin()->second);
        for (size_t i = 0; i < spans.size(); i++)
            for (size_t j = i + 1; j < spans.size(); j++)
                if (spans_overlap(spans[i], spans[j]))
                    return {true, d, "",
                            span_str(spans[i]) + " overlaps " + span_str(spans[j])};
    }
    return {};
}

BoundedReport bounded_equivalence(const Vsa& a, const Vsa& b, int max_len) {
    for (const auto& d : all_docs(a.sigma, max_len)) {
        auto ra = brute_eval(a, d);
        auto rb = brute_eval(b, d);
        if (ra != rb) {
            std::string detail;
            for (const auto& t : ra)
                if (!rb.count(t)) detail = "only lhs has " + tuple_str(t);
            for (const auto& t : rb)
                if (!ra.count(t)) detail = "only rhs has " + tuple_str(t);
            return {true, d, "", detail};
        }
    }
    return {};
}

BoundedReport bounded_split_correct(const Vsa& p, const Vsa& ps, const Vsa& s,
                                    int max_len) {
    for (const auto& d : all_docs(p.sigma, max_len)) {
        auto lhs = brute_eval(p, d);
        auto rhs = brute_compose(ps, s, d);
        if (lhs != rhs) {
            std::string detail;
            for (const auto& t : lhs)
                if (!rhs.count(t)) detail = "whole-document side has " + tuple_str(t);
            for (const auto& t : rhs)
                if (!lhs.count(t)) detail = "composed side has " + tuple_str(t);
            return {true, d, "", detail};
        }
    }
    return {};
}

BoundedReport bounded_highlander(const Vsa& s, int max_len) {
    for (const auto& d : all_docs(s.sigma, max_len)) {
        std::vector<std::pair<std::string, Span>> spans;
        for (const auto& [key, t] : brute_annotated_eval(s, d))
            spans.push_back({key, t.begin()->second});
        for (size_t i = 0; i < spans.size(); i++)
            for (size_t j = i + 1; j < spans.size(); j++) {
                if (spans[i].second != spans[j].second &&
                    spans_overlap(spans[i].second, spans[j].second))
                    return {true, d, "",
                            span_str(spans[i].second) + " overlaps " +
                                span_str(spans[j].second)};
                if (spans[i].second == spans[j].second && spans[i].first != spans[j].first)
                    return {true, d, "",
                            span_str(spans[i].second) + " emitted under keys " +
                                spans[i].first + " and " + spans[j].first};
            }
    }
    return {};
}

BoundedReport bounded_splittability_condition(const Vsa& p, const Vsa& s, int max_len) {
    auto cover = bounded_cover(p, s, max_len);
    if (cover.counterexample_found) return cover;
    // window content must decide membership identically wherever it
    // appears as a split
    auto docs = all_docs(p.sigma, max_len);
    std::map<std::string, std::vector<std::pair<std::string, Span>>> by_window;
    std::map<std::string, SpanRelation> p_of;
    for (const auto& d : docs) {
        p_of[d] = brute_eval(p, d);
        for (const auto& st : brute_eval(s, d)) {
            Span sp = st.begin()->second;
            by_window[d.substr(sp.lo - 1, sp.hi - sp.lo)].push_back({d, sp});
        }
    }
    for (const auto& [w, occs] : by_window) {
        auto tuples = all_tuples(p.vars, (int)w.size());
        for (size_t i = 0; i < occs.size(); i++)
            for (size_t j = i + 1; j < occs.size(); j++) {
                const auto& [d1, s1] = occs[i];
                const auto& [d2, s2] = occs[j];
                for (const auto& t : tuples) {
                    bool in1 = p_of[d1].count(shift_tuple(t, s1)) > 0;
                    bool in2 = p_of[d2].count(shift_tuple(t, s2)) > 0;
                    if (in1 != in2)
                        return {true, d1, d2,
                                "window " + w + " disagrees on " + tuple_str(t)};
                }
            }
    }
    return {};
}

Vsa random_vsa(Rng& rng, const std::string& sigma, const std::vector<std::string>& vars,
               int max_states) {
    Vsa a;
    a.sigma = sigma;
    std::sort(a.sigma.begin(), a.sigma.end());
    a.vars = vars;
    std::sort(a.vars.begin(), a.vars.end());
    a.n_states = rng.pick(1, max_states);
    a.initial = 0;
    int ne = rng.pick(a.n_states, 3 * a.n_states);
    for (int i = 0; i < ne; i++) {
        Transition t;
        t.from = rng.pick(0, a.n_states - 1);
        t.to = rng.pick(0, a.n_states - 1);
        if (a.vars.empty() || rng.chance(0.65)) {
            t.label = sym_label(a.sigma[rng.pick(0, (int)a.sigma.size() - 1)]);
        } else {
            const auto& v = a.vars[rng.pick(0, (int)a.vars.size() - 1)];
            t.label = rng.chance(0.5) ? open_label(v) : close_label(v);
        }
        a.transitions.push_back(t);
    }
    for (int q = 0; q < a.n_states; q++)
        if (rng.chance(0.35)) a.finals.push_back(q);
    if (a.finals.empty() && rng.chance(0.9))
        a.finals.push_back(rng.pick(0, a.n_states - 1));
    std::set<Transition> uniq(a.transitions.begin(), a.transitions.end());
    a.transitions.assign(uniq.begin(), uniq.end());
    return a;
}

Formula random_formula(Rng& rng, const std::string& sigma,
                       const std::vector<std::string>& vars, int depth) {
    if (depth <= 0 || rng.chance(0.3)) {
        int roll = rng.pick(0, 99);
        if (roll < 70) return f_sym(sigma[rng.pick(0, (int)sigma.size() - 1)]);
        if (roll < 85) return f_wild();
        if (roll < 95) return f_eps();
        return f_empty();
    }
    int roll = rng.pick(0, 99);
    if (roll < 25)
        return f_union(random_formula(rng, sigma, vars, depth - 1),
                       random_formula(rng, sigma, vars, depth - 1));
    if (roll < 55)
        return f_concat(random_formula(rng, sigma, vars, depth - 1),
                        random_formula(rng, sigma, vars, depth - 1));
    if (roll < 70) return f_star(random_formula(rng, sigma, vars, depth - 1));
    if (roll < 78) return f_opt(random_formula(rng, sigma, vars, depth - 1));
    if (roll < 84) return f_plus(random_formula(rng, sigma, vars, depth - 1));
    if (vars.empty()) return f_sym(sigma[rng.pick(0, (int)sigma.size() - 1)]);
    return f_capture(vars[rng.pick(0, (int)vars.size() - 1)],
                     random_formula(rng, sigma, {}, depth - 1));
}

Vsa random_splitter(Rng& rng, const std::string& sigma) {
    int route = rng.pick(0, 5);
    if (route == 5) return random_vsa(rng, sigma, {"x"}, 5);
    auto ctx = [&] { return random_formula(rng, sigma, {}, 2); };
    Formula body = f_capture("x", ctx());
    Formula f = body;
    switch (route) {
        case 0: f = body; break;
        case 1: f = f_concat(body, ctx()); break;
        case 2: f = f_concat(ctx(), body); break;
        case 3: f = f_concat(ctx(), f_concat(body, ctx())); break;
        case 4: f = f_union(body, f_capture("x", ctx())); break;
    }
    return compile_to_vsa(f, sigma);
}

Nfa random_dfa(Rng& rng, int n_syms, int max_states) {
    Nfa a;
    a.n = rng.pick(1, max_states);
    a.n_syms = n_syms;
    a.initials = {0};
    for (int q = 0; q < a.n; q++) {
        for (int s = 0; s < n_syms; s++) a.trans.push_back({q, s, rng.pick(0, a.n - 1)});
        if (rng.chance(0.5)) a.finals.push_back(q);
    }
    return a;
}

bool union_universal(const std::vector<Nfa>& dfas, int n_syms) {
    if (dfas.empty()) throw domain_error("need at least one automaton");
    std::vector<std::vector<std::vector<int>>> delta;  // [i][state][sym]
    std::vector<std::vector<char>> fin;
    for (const auto& d : dfas) {
        std::vector<std::vector<int>> dd(d.n, std::vector<int>(n_syms, -1));
        for (const auto& t : d.trans) {
            if (dd[t[0]][t[1]] != -1 && dd[t[0]][t[1]] != t[2])
                throw domain_error("union_universal needs deterministic automata");
            dd[t[0]][t[1]] = t[2];
        }
        for (const auto& row : dd)
            for (int v : row)
                if (v < 0) throw domain_error("union_universal needs complete automata");
        delta.push_back(dd);
        std::vector<char> f(d.n, 0);
        for (int q : d.finals) f[q] = 1;
        fin.push_back(f);
        if (d.initials.size() != 1) throw domain_error("union_universal needs one initial");
    }
    std::vector<int> start;
    for (const auto& d : dfas) start.push_back(d.initials[0]);
    std::set<std::vector<int>> seen{start};
    std::deque<std::vector<int>> work{start};
    while (!work.empty()) {
        auto cur = work.front();
        work.pop_front();
        bool any = false;
        for (size_t i = 0; i < cur.size(); i++)
            if (fin[i][cur[i]]) any = true;
        if (!any) return false;
        for (int s = 0; s < n_syms; s++) {
            std::vector<int> nxt(cur.size());
            for (size_t i = 0; i < cur.size(); i++) nxt[i] = delta[i][cur[i]][s];
            if (seen.insert(nxt).second) work.push_back(nxt);
        }
    }
    return true;
}

namespace {

// inline a variable-free DFA over the first |sigma| letters
struct Patch {
    Vsa& a;
    int add_states(int k) {
        int base = a.n_states;
        a.n_states += k;
        return base;
    }
    int inline_nfa(const Nfa& d, const std::string& sigma, std::vector<int>& finals_out) {
        int base = add_states(d.n);
        for (const auto& t : d.trans)
            a.transitions.push_back({base + t[0], sym_label(sigma[t[1]]), base + t[2]});
        for (int q : d.finals) finals_out.push_back(base + q);
        return base + d.initials.at(0);
    }
    void edge(int from, const Label& l, int to) { a.transitions.push_back({from, l, to}); }
};

std::vector<std::string> numbered_vars(int n) {
    std::vector<std::string> vars;
    for (int i = 1; i <= n; i++) vars.push_back("x" + std::to_string(i));
    return vars;
}

}  // namespace

GadgetPair gadget_containment(const std::vector<Nfa>& dfas, const std::string& sigma) {
    int n = (int)dfas.size();
    auto vars = numbered_vars(n);
    GadgetPair g;
    // nested captures around the full language; every document maps to
    // the tuple assigning all variables the whole span
    {
        Vsa& a = g.lhs;
        a.sigma = sigma;
        a.vars = vars;
        Patch p{a};
        int cur = p.add_states(1);
        a.initial = cur;
        for (int i = 0; i < n; i++) {
            int nxt = p.add_states(1);
            p.edge(cur, open_label(vars[i]), nxt);
            cur = nxt;
        }
        for (char c : sigma) p.edge(cur, sym_label(c), cur);
        for (int i = 0; i < n; i++) {
            int nxt = p.add_states(1);
            p.edge(cur, close_label(vars[i]), nxt);
            cur = nxt;
        }
        a.finals = {cur};
        validate(a);
    }
    // same tuple, but only on documents of the i-th language; branch i
    // opens its own variable first
    {
        Vsa& a = g.rhs;
        a.sigma = sigma;
        a.vars = vars;
        Patch p{a};
        a.initial = p.add_states(1);
        int accept = p.add_states(1);
        a.finals = {accept};
        for (int i = 0; i < n; i++) {
            std::vector<int> order{i};
            for (int j = 0; j < n; j++)
                if (j != i) order.push_back(j);
            std::vector<int> dfa_finals;
            int dfa_init = p.inline_nfa(dfas[i], sigma, dfa_finals);
            int cur = a.initial;
            for (int k = 0; k < n; k++) {
                int nxt = (k + 1 == n) ? dfa_init : p.add_states(1);
                p.edge(cur, open_label(vars[order[k]]), nxt);
                cur = nxt;
            }
            int close_cur = -1;
            for (int k = 0; k < n; k++) {
                int nxt = (k + 1 == n) ? accept : p.add_states(1);
                if (k == 0) {
                    for (int f : dfa_finals) p.edge(f, close_label(vars[0]), nxt);
                } else {
                    p.edge(close_cur, close_label(vars[k]), nxt);
                }
                close_cur = nxt;
            }
        }
        validate(a);
    }
    return g;
}

GadgetTriple gadget_split(const std::vector<Nfa>& dfas, const std::string& sigma) {
    char fresh = 0;
    for (char c = 'a'; c <= 'z'; c++)
        if (sigma.find(c) == std::string::npos) {
            fresh = c;
            break;
        }
    if (!fresh) throw domain_error("no spare letter for the marker symbol");
    std::string sigma2 = sigma + fresh;
    std::sort(sigma2.begin(), sigma2.end());
    int n = (int)dfas.size();
    GadgetTriple g;
    {
        // marker^n then the captured body
        Vsa& a = g.p;
        a.sigma = sigma2;
        a.vars = {"y"};
        Patch p{a};
        int cur = p.add_states(1);
        a.initial = cur;
        for (int i = 0; i < n; i++) {
            int nxt = p.add_states(1);
            p.edge(cur, sym_label(fresh), nxt);
            cur = nxt;
        }
        int body = p.add_states(1);
        p.edge(cur, open_label("y"), body);
        for (char c : sigma) p.edge(body, sym_label(c), body);
        int accept = p.add_states(1);
        p.edge(body, close_label("y"), accept);
        a.finals = {accept};
        validate(a);
    }
    {
        // any number of markers then the captured body
        Vsa& a = g.ps;
        a.sigma = sigma2;
        a.vars = {"y"};
        Patch p{a};
        int cur = p.add_states(1);
        a.initial = cur;
        p.edge(cur, sym_label(fresh), cur);
        int body = p.add_states(1);
        p.edge(cur, open_label("y"), body);
        for (char c : sigma) p.edge(body, sym_label(c), body);
        int accept = p.add_states(1);
        p.edge(body, close_label("y"), accept);
        a.finals = {accept};
        validate(a);
    }
    {
        // branch i skips i-1 markers and windows the rest
        Vsa& a = g.s;
        a.sigma = sigma2;
        a.vars = {"x"};
        Patch p{a};
        a.initial = p.add_states(1);
        int accept = p.add_states(1);
        a.finals = {accept};
        for (int i = 1; i <= n; i++) {
            int cur = a.initial;
            for (int k = 0; k < i - 1; k++) {
                int nxt = p.add_states(1);
                p.edge(cur, sym_label(fresh), nxt);
                cur = nxt;
            }
            std::vector<int> dfa_finals;
            int dfa_init = p.inline_nfa(dfas[i - 1], sigma, dfa_finals);
            int win = p.add_states(1);
            p.edge(cur, open_label("x"), win);
            cur = win;
            for (int k = 0; k < n - i + 1; k++) {
                int nxt = (k == n - i) ? dfa_init : p.add_states(1);
                p.edge(cur, sym_label(fresh), nxt);
                cur = nxt;
            }
            for (int f : dfa_finals) p.edge(f, close_label("x"), accept);
        }
        validate(a);
    }
    return g;
}

GadgetTriple gadget_boolean_splittable(const Formula& r1, const Formula& r2,
                                       const std::string& sigma) {
    if (!formula_vars(r1).empty() || !formula_vars(r2).empty())
        throw domain_error("gadget needs variable-free formulas");
    GadgetTriple g;
    g.p = compile_to_vsa(r1, sigma);
    g.ps = g.p;
    g.s = compile_to_vsa(f_capture("x", r2), sigma);
    return g;
}

GadgetTriple gadget_selfsplit(const Formula& r1, const Formula& r2,
                              const std::string& sigma, char fresh) {
    if (sigma.find(fresh) != std::string::npos)
        throw domain_error("marker letter must be outside the alphabet");
    if (formula_vars(r1) != formula_vars(r2))
        throw domain_error("gadget needs formulas over one variable set");
    std::string sigma2 = sigma + fresh;
    std::sort(sigma2.begin(), sigma2.end());
    Formula plain = f_empty();
    for (size_t i = 0; i < sigma.size(); i++)
        plain = i == 0 ? f_sym(sigma[i]) : f_union(plain, f_sym(sigma[i]));
    Formula plain_star = f_star(plain);
    GadgetTriple g;
    g.p = compile_to_vsa(f_union(r1, f_concat(f_sym(fresh), r2)), sigma2);
    g.ps = g.p;
    // the window swallows an optional leading marker; a second marker
    // anywhere kills every split
    Formula s = f_union(f_capture("x", f_concat(f_opt(f_sym(fresh)), plain_star)),
                        f_concat(f_sym(fresh), f_capture("x", plain_star)));
    g.s = compile_to_vsa(s, sigma2);
    return g;
}

}  // namespace spanners
