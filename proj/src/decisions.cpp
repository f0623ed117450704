#include "spanners/decisions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "ptime_parts.hpp"

namespace spanners {

Verdict yes_verdict(long long states) {
    Verdict v;
    v.answer = Answer::Yes;
    v.product_states = states;
    return v;
}

namespace {

std::map<std::pair<int, Label>, int> det_delta(const Vsa& a) {
    std::map<std::pair<int, Label>, int> d;
    for (const auto& t : a.transitions) d[{t.from, t.label}] = t.to;
    return d;
}

std::vector<char> final_mask(const Vsa& a) {
    std::vector<char> f(a.n_states, 0);
    for (int q : a.finals) f[q] = 1;
    return f;
}

std::optional<Witness> witness_of_refword(const RefWord& r,
                                          const std::vector<std::string>& vars,
                                          const Limits& lim) {
    std::string doc = clr(r);
    if ((int)doc.size() > lim.witness_cap) return std::nullopt;
    Witness w;
    w.document = doc;
    w.tuple = tuple_of_refword(r, vars);
    return w;
}

void need_splitter(const Vsa& s) {
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
}

void need_same_sigma(const Vsa& a, const Vsa& b) {
    if (a.sigma != b.sigma) throw domain_error("operands need one shared alphabet");
}

void need_certified(const Vsa& a, const char* what) {
    if (!certify_dfvsa(a))
        throw domain_error(std::string("the polynomial route needs a deterministic "
                                       "functional ") +
                           what);
}

void need_disjoint(const Vsa& s, const Limits& lim) {
    if (splitter_disjoint(s, lim).answer != Answer::Yes)
        throw domain_error("the polynomial route needs a disjoint splitter");
}

}  // namespace

Vsa detail::detach_splitter_var(const Vsa& s, const std::vector<std::string>& spanner_vars) {
    const std::string& x = s.vars[0];
    if (!std::binary_search(spanner_vars.begin(), spanner_vars.end(), x)) return s;
    auto taken = spanner_vars;
    taken.push_back(x);
    return rename_var(s, x, fresh_var(x, taken));
}

Verdict containment(const Vsa& p, const Vsa& q, const Limits& lim) {
    validate(p);
    validate(q);
    if (p.vars != q.vars) throw domain_error("containment needs one variable set on both sides");
    need_same_sigma(p, q);
    Vsa P = normalize(p, lim);
    Vsa Q = normalize(q, lim);
    std::vector<std::vector<std::pair<Label, int>>> padj(P.n_states);
    for (const auto& t : P.transitions) padj[t.from].push_back({t.label, t.to});
    auto qdelta = det_delta(Q);
    auto pfin = final_mask(P);
    auto qfin = final_mask(Q);

    constexpr int kDead = -1;
    using PS = std::pair<int, int>;
    PS start{P.initial, Q.initial};
    std::map<PS, std::pair<PS, Label>> parent;
    std::set<PS> seen{start};
    std::deque<PS> work{start};
    long long visits = 0;
    std::optional<PS> bad;
    while (!work.empty()) {
        PS cur = work.front();
        work.pop_front();
        if (++visits > lim.visit_cap)
            throw resource_error("containment search exceeded the visit cap");
        if (pfin[cur.first] && (cur.second == kDead || !qfin[cur.second])) {
            bad = cur;
            break;
        }
        for (const auto& [l, to] : padj[cur.first]) {
            int qt = kDead;
            if (cur.second != kDead) {
                auto it = qdelta.find({cur.second, l});
                if (it != qdelta.end()) qt = it->second;
            }
            PS nxt{to, qt};
            if (seen.insert(nxt).second) {
                parent[nxt] = {cur, l};
                work.push_back(nxt);
            }
        }
    }
    Verdict v;
    v.product_states = (long long)seen.size();
    if (!bad) return v;
    v.answer = Answer::No;
    RefWord r;
    for (PS cur = *bad; cur != start;) {
        const auto& [prev, l] = parent.at(cur);
        r.push_back(l);
        cur = prev;
    }
    std::reverse(r.begin(), r.end());
    v.witness = witness_of_refword(r, P.vars, lim);
    return v;
}

Verdict equivalence(const Vsa& p, const Vsa& q, const Limits& lim) {
    Verdict fwd = containment(p, q, lim);
    if (fwd.answer == Answer::No) {
        if (fwd.witness) fwd.witness->side = "lhs";
        return fwd;
    }
    Verdict bwd = containment(q, p, lim);
    bwd.product_states += fwd.product_states;
    if (bwd.answer == Answer::No && bwd.witness) bwd.witness->side = "rhs";
    return bwd;
}

namespace {

// two runs of the splitter on one document; per side: state, span
// status, and whether an empty span was produced at the open boundary
struct PairState {
    int q1 = 0, q2 = 0;
    uint8_t st1 = 0, st2 = 0;  // 0 waiting, 1 open, 2 closed
    uint8_t ob1 = 0, ob2 = 0;  // opened at the current boundary
    uint8_t eb1 = 0, eb2 = 0;  // closed an empty span at the current boundary
    uint8_t flag = 0;          // the two spans overlap
    uint8_t neq = 0;           // the two spans differ
    auto operator<=>(const PairState&) const = default;
};

struct PairMove {
    int side = 0;  // 0 joint symbol, 1 or 2 own marker
    Label l;
};

}  // namespace

Verdict splitter_disjoint(const Vsa& s, const Limits& lim) {
    validate(s);
    need_splitter(s);
    Vsa e = eliminate_eps(s);
    const std::string& x = e.vars[0];
    std::vector<std::vector<std::pair<char, int>>> sym_adj(e.n_states);
    std::vector<std::vector<int>> open_adj(e.n_states), close_adj(e.n_states);
    for (const auto& t : e.transitions) {
        if (t.label.kind == LabelKind::Sym)
            sym_adj[t.from].push_back({t.label.sym, t.to});
        else if (t.label.kind == LabelKind::Open)
            open_adj[t.from].push_back(t.to);
        else
            close_adj[t.from].push_back(t.to);
    }
    auto fin = final_mask(e);

    PairState start;
    start.q1 = start.q2 = e.initial;
    std::map<PairState, std::pair<PairState, PairMove>> parent;
    std::set<PairState> seen{start};
    std::deque<PairState> work{start};
    long long visits = 0;
    std::optional<PairState> hit;
    auto push = [&](const PairState& cur, PairState nxt, const PairMove& m) {
        if (seen.insert(nxt).second) {
            parent[nxt] = {cur, m};
            work.push_back(nxt);
        }
    };
    while (!work.empty() && !hit) {
        PairState cur = work.front();
        work.pop_front();
        if (++visits > lim.visit_cap)
            throw resource_error("disjointness search exceeded the visit cap");
        if (fin[cur.q1] && fin[cur.q2] && cur.st1 == 2 && cur.st2 == 2 && cur.flag &&
            cur.neq) {
            hit = cur;
            break;
        }
        if (cur.st1 == 0)
            for (int to : open_adj[cur.q1]) {
                PairState n = cur;
                n.q1 = to;
                n.st1 = 1;
                n.ob1 = 1;
                push(cur, n, {1, open_label(x)});
            }
        if (cur.st1 == 1)
            for (int to : close_adj[cur.q1]) {
                PairState n = cur;
                n.q1 = to;
                n.st1 = 2;
                n.eb1 = n.ob1;
                push(cur, n, {1, close_label(x)});
            }
        if (cur.st2 == 0)
            for (int to : open_adj[cur.q2]) {
                PairState n = cur;
                n.q2 = to;
                n.st2 = 1;
                n.ob2 = 1;
                push(cur, n, {2, open_label(x)});
            }
        if (cur.st2 == 1)
            for (int to : close_adj[cur.q2]) {
                PairState n = cur;
                n.q2 = to;
                n.st2 = 2;
                n.eb2 = n.ob2;
                push(cur, n, {2, close_label(x)});
            }
        for (const auto& [c1, to1] : sym_adj[cur.q1])
            for (const auto& [c2, to2] : sym_adj[cur.q2]) {
                if (c1 != c2) continue;
                PairState n = cur;
                n.q1 = to1;
                n.q2 = to2;
                if ((cur.st1 == 1 && cur.st2 == 1) || (cur.eb1 && cur.st2 == 1) ||
                    (cur.eb2 && cur.st1 == 1))
                    n.flag = 1;
                if (cur.st1 != cur.st2 || cur.eb1 != cur.eb2) n.neq = 1;
                n.ob1 = n.ob2 = n.eb1 = n.eb2 = 0;
                push(cur, n, {0, sym_label(c1)});
            }
    }
    Verdict v;
    v.product_states = (long long)seen.size();
    if (!hit) return v;
    v.answer = Answer::No;
    std::vector<PairMove> path;
    for (PairState cur = *hit; !(cur == start);) {
        const auto& [prev, m] = parent.at(cur);
        path.push_back(m);
        cur = prev;
    }
    std::reverse(path.begin(), path.end());
    std::string doc;
    Span sp1, sp2;
    int boundary = 1;
    for (const auto& m : path) {
        if (m.side == 0) {
            doc += m.l.sym;
            boundary++;
        } else if (m.side == 1) {
            (m.l.kind == LabelKind::Open ? sp1.lo : sp1.hi) = boundary;
        } else {
            (m.l.kind == LabelKind::Open ? sp2.lo : sp2.hi) = boundary;
        }
    }
    if ((int)doc.size() <= lim.witness_cap) {
        Witness w;
        w.document = doc;
        w.tuple[x] = sp1;
        w.split = sp2;
        v.witness = w;
    }
    return v;
}

Vsa compose_construct(const Vsa& ps, const Vsa& s, const Limits& lim) {
    validate(ps);
    validate(s);
    need_splitter(s);
    need_same_sigma(ps, s);
    const std::string& x = s.vars[0];
    if (std::binary_search(ps.vars.begin(), ps.vars.end(), x))
        throw domain_error("splitter variable collides with a spanner variable");
    Vsa ep = eliminate_eps(ps);
    Vsa es = eliminate_eps(s);
    long long total = (long long)es.n_states * (2 + ep.n_states);
    if (total > lim.state_cap)
        throw resource_error("composition exceeded the state cap");
    Vsa out;
    out.sigma = ps.sigma;
    out.vars = ps.vars;
    out.n_states = (int)total;
    auto pre_id = [&](int qs) { return qs; };
    auto mid_id = [&](int qs, int qp) { return es.n_states + qs * ep.n_states + qp; };
    auto post_id = [&](int qs) { return es.n_states + es.n_states * ep.n_states + qs; };
    out.initial = pre_id(es.initial);
    for (int f : es.finals) out.finals.push_back(post_id(f));
    std::vector<std::vector<std::pair<char, int>>> ps_sym(ep.n_states);
    std::vector<std::vector<std::pair<Label, int>>> ps_op(ep.n_states);
    for (const auto& t : ep.transitions) {
        if (t.label.kind == LabelKind::Sym)
            ps_sym[t.from].push_back({t.label.sym, t.to});
        else
            ps_op[t.from].push_back({t.label, t.to});
    }
    auto ep_fin = final_mask(ep);
    for (const auto& t : es.transitions) {
        if (t.label.kind == LabelKind::Sym) {
            out.transitions.push_back({pre_id(t.from), t.label, pre_id(t.to)});
            out.transitions.push_back({post_id(t.from), t.label, post_id(t.to)});
            for (int qp = 0; qp < ep.n_states; qp++)
                for (const auto& [c, qp2] : ps_sym[qp])
                    if (c == t.label.sym)
                        out.transitions.push_back(
                            {mid_id(t.from, qp), t.label, mid_id(t.to, qp2)});
        } else if (t.label.kind == LabelKind::Open) {
            out.transitions.push_back(
                {pre_id(t.from), eps_label(), mid_id(t.to, ep.initial)});
        } else {
            for (int qp = 0; qp < ep.n_states; qp++)
                if (ep_fin[qp])
                    out.transitions.push_back(
                        {mid_id(t.from, qp), eps_label(), post_id(t.to)});
        }
    }
    for (int qs = 0; qs < es.n_states; qs++)
        for (int qp = 0; qp < ep.n_states; qp++)
            for (const auto& [l, qp2] : ps_op[qp])
                out.transitions.push_back({mid_id(qs, qp), l, mid_id(qs, qp2)});
    return trim_vsa(out);
}

Verdict cover_condition_general(const Vsa& p, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    need_splitter(s);
    need_same_sigma(p, s);
    Vsa s2 = detail::detach_splitter_var(s, p.vars);
    Vsa all;
    all.sigma = p.sigma;
    all.vars = p.vars;
    all.n_states = 1;
    all.initial = 0;
    all.finals = {0};
    for (char c : p.sigma) all.transitions.push_back({0, sym_label(c), 0});
    for (const auto& v : p.vars) {
        all.transitions.push_back({0, open_label(v), 0});
        all.transitions.push_back({0, close_label(v), 0});
    }
    Vsa windowed = compose_construct(all, s2, lim);
    Verdict v = containment(p, windowed, lim);
    if (v.witness) v.witness->side = "lhs";
    return v;
}

namespace {

// dense ids for tagged labels; tag 1 marks the marker block of a tuple
struct TagTable {
    std::map<std::pair<Label, int>, int> ids;
    std::vector<std::pair<Label, int>> syms;
    int id(const Label& l, int tag) {
        auto it = ids.find({l, tag});
        if (it != ids.end()) return it->second;
        int v = (int)syms.size();
        ids.emplace(std::make_pair(l, tag), v);
        syms.push_back({l, tag});
        return v;
    }
};

RefWord strip_tags(const std::vector<int>& word, const TagTable& tab) {
    RefWord r;
    for (int id : word) r.push_back(tab.syms[id].first);
    return r;
}

}  // namespace

Verdict cover_condition_ptime(const Vsa& p, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    need_splitter(s);
    need_same_sigma(p, s);
    need_certified(p, "spanner");
    need_certified(s, "splitter");
    need_disjoint(s, lim);
    Vsa tp = trim_vsa(p);
    Vsa ts = trim_vsa(s);
    Verdict v;
    if (p.vars.empty()) {
        // no markers to place: containment of the document languages
        SymTable tab;
        Nfa ap;
        ap.n = tp.n_states;
        ap.initials = {tp.initial};
        ap.finals = tp.finals;
        for (const auto& t : tp.transitions)
            ap.trans.push_back({t.from, tab.id(t.label), t.to});
        Nfa as;
        as.n = ts.n_states;
        as.initials = {ts.initial};
        as.finals = ts.finals;
        std::vector<std::pair<int, int>> eps;
        for (const auto& t : ts.transitions) {
            if (t.label.kind == LabelKind::Sym)
                as.trans.push_back({t.from, tab.id(t.label), t.to});
            else
                eps.push_back({t.from, t.to});
        }
        ap.n_syms = as.n_syms = (int)tab.syms.size();
        as = eliminate_eps_nfa(as, eps);
        ContainResult r = nfa_contained(ap, as, lim.state_cap);
        v.product_states = r.product_states;
        if (r.contained) return v;
        v.answer = Answer::No;
        if (r.witness) {
            RefWord rw = word_of_ids(*r.witness, tab);
            if (auto w = witness_of_refword(rw, p.vars, lim)) {
                w->side = "lhs";
                v.witness = w;
            }
        }
        return v;
    }
    auto cfg = state_configs(tp);
    std::vector<char> post(tp.n_states, 0);
    for (int q = 0; q < tp.n_states; q++) {
        bool all = true;
        for (uint8_t c : cfg[q])
            if (c != 2) all = false;
        post[q] = all;
    }
    TagTable tab;
    // phase 1 before the block, phase 2 inside, phase 3 after
    Nfa ap;
    int n = tp.n_states;
    ap.n = 3 * n;
    ap.initials = {tp.initial};
    for (int f : tp.finals) ap.finals.push_back(2 * n + f);
    for (const auto& t : tp.transitions) {
        if (t.label.kind == LabelKind::Sym) {
            ap.trans.push_back({t.from, tab.id(t.label, 0), t.to});
            ap.trans.push_back({2 * n + t.from, tab.id(t.label, 0), 2 * n + t.to});
            if (!post[t.to])
                ap.trans.push_back({n + t.from, tab.id(t.label, 1), n + t.to});
        } else {
            int dst = post[t.to] ? 2 * n + t.to : n + t.to;
            ap.trans.push_back({t.from, tab.id(t.label, 1), dst});
            ap.trans.push_back({n + t.from, tab.id(t.label, 1), dst});
        }
    }
    // splitter side: copies 1,2 before the window opens, 3 inside the
    // block, 4,5 after; 2 and 4 are the window outside the block
    Nfa as;
    int m = ts.n_states;
    as.n = 5 * m;
    as.initials = {ts.initial};
    for (int f : ts.finals) as.finals.push_back(4 * m + f);
    std::vector<std::pair<int, int>> eps;
    for (const auto& t : ts.transitions) {
        if (t.label.kind == LabelKind::Sym) {
            int c0 = tab.id(t.label, 0), c1 = tab.id(t.label, 1);
            as.trans.push_back({t.from, c0, t.to});
            as.trans.push_back({m + t.from, c0, m + t.to});
            as.trans.push_back({2 * m + t.from, c1, 2 * m + t.to});
            as.trans.push_back({3 * m + t.from, c0, 3 * m + t.to});
            as.trans.push_back({4 * m + t.from, c0, 4 * m + t.to});
        } else if (t.label.kind == LabelKind::Open) {
            eps.push_back({t.from, m + t.to});
        } else {
            eps.push_back({3 * m + t.from, 4 * m + t.to});
        }
    }
    for (int q = 0; q < m; q++)
        for (const auto& var : p.vars) {
            as.trans.push_back({m + q, tab.id(open_label(var), 1), 2 * m + q});
            as.trans.push_back({2 * m + q, tab.id(open_label(var), 1), 2 * m + q});
            as.trans.push_back({2 * m + q, tab.id(close_label(var), 1), 2 * m + q});
            as.trans.push_back({2 * m + q, tab.id(close_label(var), 1), 3 * m + q});
        }
    ap.n_syms = as.n_syms = (int)tab.syms.size();
    as = eliminate_eps_nfa(as, eps);
    ContainResult r = nfa_contained(ap, as, lim.state_cap);
    v.product_states = r.product_states;
    if (r.contained) return v;
    v.answer = Answer::No;
    if (r.witness) {
        RefWord rw = strip_tags(*r.witness, tab);
        if (auto w = witness_of_refword(rw, p.vars, lim)) {
            w->side = "lhs";
            v.witness = w;
        }
    }
    return v;
}

Verdict split_correct(const Vsa& p, const Vsa& ps, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(ps);
    validate(s);
    if (p.vars != ps.vars)
        throw domain_error("document and window spanners need one variable set");
    need_splitter(s);
    Vsa s2 = detail::detach_splitter_var(s, ps.vars);
    Vsa composed = compose_construct(ps, s2, lim);
    return equivalence(p, composed, lim);
}

namespace {

// search state for the window-restricted disagreement check: the
// splitter drives, the document spanner reads everything, the window
// spanner reads inside the window only
struct TriState {
    int phase = 0;  // 0 before the window, 1 inside, 2 after
    int qs = 0;
    int qp = 0;    // -1 dead
    int qps = -2;  // -1 dead, -2 not started
    uint8_t f1 = 0, f2 = 0, f3 = 0;
    auto operator<=>(const TriState&) const = default;
};

}  // namespace

std::optional<Verdict> detail::window_disagreement(const Vsa& p, const Vsa& ps,
                                                   const Vsa& s,
                                                   const std::vector<char>& s_finals,
                                                   const std::string& x,
                                                   long long& states, const Limits& lim) {
    auto pd = det_delta(p);
    auto psd = det_delta(ps);
    std::vector<std::vector<std::pair<char, int>>> s_sym(s.n_states);
    std::vector<std::vector<int>> s_open(s.n_states), s_close(s.n_states);
    for (const auto& t : s.transitions) {
        if (t.label.kind == LabelKind::Sym)
            s_sym[t.from].push_back({t.label.sym, t.to});
        else if (t.label.kind == LabelKind::Open)
            s_open[t.from].push_back(t.to);
        else
            s_close[t.from].push_back(t.to);
    }
    auto p_fin = final_mask(p);
    auto ps_fin = final_mask(ps);
    std::vector<Label> ops;
    for (const auto& v : p.vars) {
        ops.push_back(open_label(v));
        ops.push_back(close_label(v));
    }
    auto step = [](const std::map<std::pair<int, Label>, int>& d, int q, const Label& l) {
        if (q < 0) return -1;
        auto it = d.find({q, l});
        return it == d.end() ? -1 : it->second;
    };

    TriState start;
    start.qs = s.initial;
    start.qp = p.initial;
    std::map<TriState, std::pair<TriState, Label>> parent;
    std::set<TriState> seen{start};
    std::deque<TriState> work{start};
    long long visits = 0;
    std::optional<TriState> hit;
    auto push = [&](const TriState& cur, TriState nxt, const Label& l) {
        if (nxt.qp == -1 && nxt.qps == -1) return;  // no side left to disagree
        if (seen.insert(nxt).second) {
            parent[nxt] = {cur, l};
            work.push_back(nxt);
        }
    };
    while (!work.empty() && !hit) {
        TriState cur = work.front();
        work.pop_front();
        if (++visits > lim.visit_cap)
            throw resource_error("split-correctness search exceeded the visit cap");
        if (cur.phase == 2 && s_finals[cur.qs] && cur.f3) {
            bool in_p = cur.qp >= 0 && p_fin[cur.qp];
            bool in_ps = cur.qps >= 0 && ps_fin[cur.qps];
            if (in_p != in_ps) {
                hit = cur;
                break;
            }
        }
        if (cur.phase == 0) {
            for (const auto& [c, to] : s_sym[cur.qs]) {
                TriState n = cur;
                n.qs = to;
                n.qp = step(pd, cur.qp, sym_label(c));
                push(cur, n, sym_label(c));
            }
            for (int to : s_open[cur.qs]) {
                TriState n = cur;
                n.phase = 1;
                n.qs = to;
                n.qps = ps.initial;
                push(cur, n, open_label(x));
            }
        } else if (cur.phase == 1) {
            for (const auto& [c, to] : s_sym[cur.qs]) {
                TriState n = cur;
                n.qs = to;
                n.qp = step(pd, cur.qp, sym_label(c));
                n.qps = step(psd, cur.qps, sym_label(c));
                n.f2 |= n.f1;
                push(cur, n, sym_label(c));
            }
            for (const auto& g : ops) {
                TriState n = cur;
                n.qp = step(pd, cur.qp, g);
                n.qps = step(psd, cur.qps, g);
                n.f1 = 1;
                n.f3 |= n.f2;
                push(cur, n, g);
            }
            for (int to : s_close[cur.qs]) {
                TriState n = cur;
                n.phase = 2;
                n.qs = to;
                push(cur, n, close_label(x));
            }
        } else {
            for (const auto& [c, to] : s_sym[cur.qs]) {
                TriState n = cur;
                n.qs = to;
                n.qp = step(pd, cur.qp, sym_label(c));
                push(cur, n, sym_label(c));
            }
        }
    }
    states += (long long)seen.size();
    if (!hit) return std::nullopt;
    std::vector<Label> path;
    for (TriState cur = *hit; !(cur == start);) {
        const auto& [prev, l] = parent.at(cur);
        path.push_back(l);
        cur = prev;
    }
    std::reverse(path.begin(), path.end());
    Verdict v;
    v.answer = Answer::No;
    v.product_states = states;
    std::string doc;
    SpanTuple t;
    Span split;
    int boundary = 1;
    for (const auto& l : path) {
        if (l.kind == LabelKind::Sym) {
            doc += l.sym;
            boundary++;
        } else if (l.var == x) {
            (l.kind == LabelKind::Open ? split.lo : split.hi) = boundary;
        } else if (l.kind == LabelKind::Open) {
            t[l.var].lo = boundary;
        } else {
            t[l.var].hi = boundary;
        }
    }
    if ((int)doc.size() <= lim.witness_cap) {
        Witness w;
        w.document = doc;
        w.tuple = t;
        w.split = split;
        w.side = (hit->qp >= 0 && final_mask(p)[hit->qp]) ? "lhs" : "rhs";
        v.witness = w;
    }
    return v;
}

Verdict detail::marked_block_equality(const Vsa& p, const Vsa& composed,
                                      const std::vector<std::string>& vars,
                                      const std::string& x, long long states_so_far,
                                      const Limits& lim) {
    RefWord opseq;
    for (const auto& v : vars) {
        opseq.push_back(open_label(v));
        opseq.push_back(close_label(v));
    }
    Vsa tp = trim_vsa(p);
    Vsa comp = trim_vsa(eliminate_eps(composed));
    SymTable tab;
    std::vector<std::string> taken = vars;
    taken.push_back(x);
    Label marker = open_label(fresh_var("mark", taken));

    auto marked_nfa = [&](const Vsa& a, bool deterministic) {
        Nfa out;
        out.n = 2 * a.n_states;
        if (a.n_states == 0) return out;
        out.initials = {a.initial};
        for (int f : a.finals) out.finals.push_back(a.n_states + f);
        std::map<std::pair<int, Label>, int> dd;
        std::vector<std::vector<std::pair<Label, int>>> adj(a.n_states);
        for (const auto& t : a.transitions) {
            if (t.label.kind == LabelKind::Sym) {
                out.trans.push_back({t.from, tab.id(t.label), t.to});
                out.trans.push_back(
                    {a.n_states + t.from, tab.id(t.label), a.n_states + t.to});
            }
            if (deterministic)
                dd[{t.from, t.label}] = t.to;
            else
                adj[t.from].push_back({t.label, t.to});
        }
        int mid = tab.id(marker);
        for (int q = 0; q < a.n_states; q++) {
            if (deterministic) {
                int cur = q;
                for (const auto& l : opseq) {
                    auto it = dd.find({cur, l});
                    cur = it == dd.end() ? -1 : it->second;
                    if (cur < 0) break;
                }
                if (cur >= 0) out.trans.push_back({q, mid, a.n_states + cur});
            } else {
                std::set<int> layer{q};
                for (const auto& l : opseq) {
                    std::set<int> nxt;
                    for (int u : layer)
                        for (const auto& [lab, to] : adj[u])
                            if (lab == l) nxt.insert(to);
                    layer = std::move(nxt);
                }
                for (int r : layer) out.trans.push_back({q, mid, a.n_states + r});
            }
        }
        return out;
    };
    Nfa d1 = marked_nfa(tp, true);
    Nfa nn = marked_nfa(comp, false);
    d1.n_syms = nn.n_syms = (int)tab.syms.size();

    auto no_verdict = [&](long long states) {
        Verdict v;
        v.answer = Answer::No;
        v.product_states = states;
        return v;
    };
    auto decode_marked = [&](const std::vector<int>& word, const std::string& side,
                             long long states) {
        Verdict v = no_verdict(states);
        std::string doc;
        int b = -1;
        int mid = tab.find(marker);
        for (int id : word) {
            if (id == mid)
                b = (int)doc.size() + 1;
            else
                doc += tab.syms[id].sym;
        }
        if ((int)doc.size() <= lim.witness_cap) {
            Witness w;
            w.document = doc;
            for (const auto& var : vars) w.tuple[var] = Span{b, b};
            w.side = side;
            v.witness = w;
        }
        return v;
    };
    ContainResult fwd = nfa_contained(d1, nn, lim.state_cap);
    states_so_far += fwd.product_states;
    if (!fwd.contained)
        return fwd.witness ? decode_marked(*fwd.witness, "lhs", states_so_far)
                           : no_verdict(states_so_far);
    ContainResult bwd = nfa_contained(nn, d1, lim.state_cap);
    states_so_far += bwd.product_states;
    if (!bwd.contained)
        return bwd.witness ? decode_marked(*bwd.witness, "rhs", states_so_far)
                           : no_verdict(states_so_far);
    return yes_verdict(states_so_far);
}

Verdict split_correct_ptime(const Vsa& p, const Vsa& ps, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(ps);
    validate(s);
    if (p.vars != ps.vars)
        throw domain_error("document and window spanners need one variable set");
    need_splitter(s);
    need_same_sigma(p, s);
    need_same_sigma(ps, s);
    need_certified(p, "document spanner");
    need_certified(ps, "window spanner");
    need_certified(s, "splitter");
    need_disjoint(s, lim);
    Vsa s2 = detail::detach_splitter_var(s, p.vars);
    const std::string& x = s2.vars[0];

    Verdict cover = cover_condition_ptime(p, s2, lim);
    if (cover.answer != Answer::Yes) return cover;
    long long states = cover.product_states;

    if (!p.vars.empty()) {
        auto hit = detail::window_disagreement(p, ps, s2, final_mask(s2), x, states, lim);
        if (hit) return *hit;
    }
    Vsa composed = compose_construct(ps, s2, lim);
    return detail::marked_block_equality(p, composed, p.vars, x, states, lim);
}

Vsa canonical_split_spanner(const Vsa& p, const Vsa& s, bool skip_disjoint_gate,
                            const Limits& lim) {
    validate(p);
    validate(s);
    need_splitter(s);
    need_same_sigma(p, s);
    if (!skip_disjoint_gate && splitter_disjoint(s, lim).answer != Answer::Yes)
        throw domain_error("the canonical window spanner needs a disjoint splitter");
    Vsa ep = eliminate_eps(p);
    Vsa es = eliminate_eps(s);
    std::vector<std::vector<std::pair<char, int>>> p_sym(ep.n_states), s_sym(es.n_states);
    std::vector<std::vector<std::pair<Label, int>>> p_op(ep.n_states);
    std::vector<std::vector<int>> s_open(es.n_states), s_close(es.n_states);
    for (const auto& t : ep.transitions) {
        if (t.label.kind == LabelKind::Sym)
            p_sym[t.from].push_back({t.label.sym, t.to});
        else
            p_op[t.from].push_back({t.label, t.to});
    }
    for (const auto& t : es.transitions) {
        if (t.label.kind == LabelKind::Sym)
            s_sym[t.from].push_back({t.label.sym, t.to});
        else if (t.label.kind == LabelKind::Open)
            s_open[t.from].push_back(t.to);
        else
            s_close[t.from].push_back(t.to);
    }
    using QQ = std::pair<int, int>;  // splitter state, spanner state

    // prefixes: both sides read plain symbols from their initials
    std::set<QQ> fwd{{es.initial, ep.initial}};
    std::deque<QQ> work{{es.initial, ep.initial}};
    while (!work.empty()) {
        auto [qs, qp] = work.front();
        work.pop_front();
        for (const auto& [c1, to1] : s_sym[qs])
            for (const auto& [c2, to2] : p_sym[qp])
                if (c1 == c2 && fwd.insert({to1, to2}).second) work.push_back({to1, to2});
    }
    std::set<QQ> starts;
    for (const auto& [qs, qp] : fwd)
        for (int to : s_open[qs]) starts.insert({to, qp});

    // suffixes: pairs that reach a pair of final states on plain symbols
    std::set<QQ> bwd;
    {
        std::map<QQ, std::vector<QQ>> rev;
        std::deque<QQ> grow;
        std::vector<char> s_fin(es.n_states, 0), p_fin(ep.n_states, 0);
        for (int f : es.finals) s_fin[f] = 1;
        for (int f : ep.finals) p_fin[f] = 1;
        for (int qs = 0; qs < es.n_states; qs++)
            for (int qp = 0; qp < ep.n_states; qp++) {
                for (const auto& [c1, to1] : s_sym[qs])
                    for (const auto& [c2, to2] : p_sym[qp])
                        if (c1 == c2) rev[{to1, to2}].push_back({qs, qp});
                if (s_fin[qs] && p_fin[qp] && bwd.insert({qs, qp}).second)
                    grow.push_back({qs, qp});
            }
        while (!grow.empty()) {
            auto cur = grow.front();
            grow.pop_front();
            for (const auto& prev : rev[cur])
                if (bwd.insert(prev).second) grow.push_back(prev);
        }
    }
    std::set<QQ> ends;
    for (int qs = 0; qs < es.n_states; qs++)
        for (int to : s_close[qs])
            for (int qp = 0; qp < ep.n_states; qp++)
                if (bwd.count({to, qp})) ends.insert({qs, qp});

    // the window language: synchronized symbols, spanner markers free
    Vsa out;
    out.sigma = p.sigma;
    out.vars = p.vars;
    std::map<QQ, int> ids;
    auto intern = [&](const QQ& q) {
        auto it = ids.find(q);
        if (it != ids.end()) return it->second;
        int v = (int)ids.size() + 1;  // 0 is the fresh initial
        if (v >= lim.state_cap)
            throw resource_error("canonical window spanner exceeded the state cap");
        ids.emplace(q, v);
        return v;
    };
    out.initial = 0;
    std::deque<QQ> reach;
    for (const auto& st : starts) {
        out.transitions.push_back({0, eps_label(), intern(st)});
        reach.push_back(st);
    }
    std::set<QQ> seen(starts.begin(), starts.end());
    while (!reach.empty()) {
        QQ cur = reach.front();
        reach.pop_front();
        int cid = ids.at(cur);
        auto [qs, qp] = cur;
        for (const auto& [c1, to1] : s_sym[qs])
            for (const auto& [c2, to2] : p_sym[qp])
                if (c1 == c2) {
                    QQ nxt{to1, to2};
                    int nid = intern(nxt);
                    out.transitions.push_back({cid, sym_label(c1), nid});
                    if (seen.insert(nxt).second) reach.push_back(nxt);
                }
        for (const auto& [l, to2] : p_op[qp]) {
            QQ nxt{qs, to2};
            int nid = intern(nxt);
            out.transitions.push_back({cid, l, nid});
            if (seen.insert(nxt).second) reach.push_back(nxt);
        }
    }
    out.n_states = (int)ids.size() + 1;
    for (const auto& [pair, id] : ids)
        if (ends.count(pair)) out.finals.push_back(id);
    std::sort(out.finals.begin(), out.finals.end());
    return trim_vsa(out);
}

SplittableResult splittable(const Vsa& p, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    need_splitter(s);
    if (splitter_disjoint(s, lim).answer != Answer::Yes)
        throw domain_error(
            "splittability requires a disjoint splitter; no decision procedure is "
            "known otherwise");
    Vsa canonical = canonical_split_spanner(p, s, true, lim);
    SplittableResult r;
    r.verdict = split_correct(p, canonical, s, lim);
    if (r.verdict.answer == Answer::Yes) r.canonical = canonical;
    return r;
}

Verdict self_splittable(const Vsa& p, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    need_splitter(s);
    if (certify_dfvsa(p) && certify_dfvsa(s) &&
        splitter_disjoint(s, lim).answer == Answer::Yes)
        return split_correct_ptime(p, p, s, lim);
    return split_correct(p, p, s, lim);
}

Verdict self_splittable_ptime(const Vsa& p, const Vsa& s, const Limits& lim) {
    return split_correct_ptime(p, p, s, lim);
}

}  // namespace spanners
