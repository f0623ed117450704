#include "spanners/extensions.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptime_parts.hpp"
#include "spanners/regex.hpp"

namespace spanners {

Vsa lp_language(const Vsa& p) {
    validate(p);
    Vsa base = functionality_check(p) ? p : normalize(p);
    return projection(base, {});
}

Vsa filter_splitter(const Vsa& s, const Vsa& p, const Limits& lim) {
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    return vsa_join(s, lp_language(p), lim);
}

FilterResult split_correct_with_filter(const Vsa& p, const Vsa& ps, const Vsa& s,
                                       const Limits& lim) {
    FilterResult r;
    Vsa filtered = filter_splitter(s, p, lim);
    r.verdict = split_correct(p, ps, filtered, lim);
    if (r.verdict.answer == Answer::Yes) r.filter = lp_language(p);
    return r;
}

SplittableResult splittable_with_filter(const Vsa& p, const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    if (splitter_disjoint(s, lim).answer != Answer::Yes)
        throw domain_error(
            "splittability requires a disjoint splitter; no decision procedure is "
            "known otherwise");
    return splittable(p, filter_splitter(s, p, lim), lim);
}

Verdict self_splittable_with_filter(const Vsa& p, const Vsa& s, const Limits& lim) {
    return self_splittable(p, filter_splitter(s, p, lim), lim);
}

namespace {

std::string trim_copy(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool skippable(const std::string& line) { return line.empty() || line[0] == '#'; }

Vsa load_operand(const std::filesystem::path& path) {
    if (path.extension() == ".json") return load_vsa_file(path.string());
    FormulaFile ff = load_formula_file(path.string());
    return compile_to_vsa(ff.formula, ff.sigma);
}

}  // namespace

Signature load_signature(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open signature file: " + path);
    Signature sig;
    std::string line;
    while (std::getline(in, line)) {
        line = trim_copy(line);
        if (skippable(line)) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw domain_error("signature line needs the form 'name: vars': " + line);
        SigSymbol sym;
        sym.name = trim_copy(line.substr(0, colon));
        if (sym.name.empty()) throw domain_error("signature line with empty name: " + line);
        std::stringstream rest(line.substr(colon + 1));
        std::string piece;
        while (std::getline(rest, piece, ',')) {
            piece = trim_copy(piece);
            if (!piece.empty()) sym.vars.push_back(piece);
        }
        sig.symbols.push_back(sym);
    }
    return sig;
}

std::vector<Constraint> load_constraints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open constraint file: " + path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::vector<Constraint> out;
    std::string line;
    while (std::getline(in, line)) {
        line = trim_copy(line);
        if (skippable(line)) continue;
        std::istringstream iss(line);
        std::string sym, kw, rest;
        iss >> sym >> kw;
        std::getline(iss, rest);
        rest = trim_copy(rest);
        if (kw != "subsetof" || rest.empty())
            throw domain_error("constraint line needs the form 'symbol subsetof file': " +
                               line);
        std::filesystem::path sp(rest);
        if (sp.is_relative()) sp = base / sp;
        Constraint c;
        c.symbol = sym;
        c.splitter = load_operand(sp);
        out.push_back(c);
    }
    return out;
}

bool signature_connected(const Signature& sig) {
    int n = (int)sig.symbols.size();
    if (n <= 1) return true;
    std::map<std::string, std::vector<int>> by_var;
    for (int i = 0; i < n; i++)
        for (const auto& v : sig.symbols[i].vars) by_var[v].push_back(i);
    std::vector<char> vis(n, 0);
    std::deque<int> work{0};
    vis[0] = 1;
    int reached = 1;
    while (!work.empty()) {
        int cur = work.front();
        work.pop_front();
        for (const auto& v : sig.symbols[cur].vars)
            for (int other : by_var[v])
                if (!vis[other]) {
                    vis[other] = 1;
                    reached++;
                    work.push_back(other);
                }
    }
    return reached == n;
}

Verdict blackbox_infer(const Signature& sig, const std::vector<Constraint>& cons,
                       const Vsa& alpha, const Vsa& s, const Limits& lim) {
    validate(alpha);
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    if (!signature_connected(sig))
        throw domain_error("the signature must be connected through shared variables");
    Verdict unknown;
    unknown.answer = Answer::Unknown;
    long long states = 0;
    Verdict dj = splitter_disjoint(s, lim);
    states += dj.product_states;
    if (dj.answer != Answer::Yes) {
        unknown.product_states = states;
        return unknown;
    }
    for (const auto& sym : sig.symbols) {
        bool known = false;
        for (const auto& c : cons) {
            if (c.symbol != sym.name) continue;
            if (c.splitter.sigma != s.sigma || c.splitter.vars.size() != 1) continue;
            Vsa cs = c.splitter;
            if (cs.vars[0] != s.vars[0]) cs = rename_var(cs, cs.vars[0], s.vars[0]);
            Verdict eq = equivalence(cs, s, lim);
            states += eq.product_states;
            if (eq.answer == Answer::Yes) {
                known = true;
                break;
            }
        }
        if (!known) {
            unknown.product_states = states;
            return unknown;
        }
    }
    SplittableResult r = splittable(alpha, s, lim);
    states += r.verdict.product_states;
    if (r.verdict.answer == Answer::Yes) return yes_verdict(states);
    unknown.product_states = states;
    return unknown;
}

std::vector<std::string> annotation_keys(const Vsa& a) {
    validate(a);
    std::set<std::string> keys;
    for (int f : a.finals) {
        auto it = a.annotations.find(f);
        if (it == a.annotations.end())
            throw domain_error("every final state needs an output key");
        keys.insert(it->second);
    }
    return {keys.begin(), keys.end()};
}

Vsa key_slice(const Vsa& a, const std::string& key) {
    Vsa out = a;
    out.finals.clear();
    for (int f : a.finals) {
        auto it = a.annotations.find(f);
        if (it != a.annotations.end() && it->second == key) out.finals.push_back(f);
    }
    out.annotations.clear();
    return out;
}

Vsa erase_keys(const Vsa& a) {
    Vsa out = a;
    out.annotations.clear();
    return out;
}

KeyedRelation annotated_evaluate(const Vsa& a, const std::string& doc, const Limits& lim) {
    KeyedRelation out;
    for (const auto& key : annotation_keys(a))
        for (const auto& t : evaluate(key_slice(a, key), doc, lim)) out.insert({key, t});
    return out;
}

namespace {

// two runs on one document, one per automaton, forced to produce the
// same span; both automata must be eps free
struct SameSpanState {
    int q1 = 0, q2 = 0;
    uint8_t st1 = 0, st2 = 0;
    uint8_t ob1 = 0, ob2 = 0;
    uint8_t eb1 = 0, eb2 = 0;
    auto operator<=>(const SameSpanState&) const = default;
};

struct SameSpanMove {
    int side = 0;  // 0 joint symbol, 1 or 2 own marker
    Label l;
};

std::optional<Verdict> same_span_pair(const Vsa& a, const Vsa& b, const std::string& x,
                                      long long& states, const Limits& lim) {
    std::vector<std::vector<std::pair<char, int>>> sym1(a.n_states), sym2(b.n_states);
    std::vector<std::vector<int>> open1(a.n_states), close1(a.n_states);
    std::vector<std::vector<int>> open2(b.n_states), close2(b.n_states);
    for (const auto& t : a.transitions) {
        if (t.label.kind == LabelKind::Sym)
            sym1[t.from].push_back({t.label.sym, t.to});
        else if (t.label.kind == LabelKind::Open)
            open1[t.from].push_back(t.to);
        else
            close1[t.from].push_back(t.to);
    }
    for (const auto& t : b.transitions) {
        if (t.label.kind == LabelKind::Sym)
            sym2[t.from].push_back({t.label.sym, t.to});
        else if (t.label.kind == LabelKind::Open)
            open2[t.from].push_back(t.to);
        else
            close2[t.from].push_back(t.to);
    }
    std::vector<char> fin1(a.n_states, 0), fin2(b.n_states, 0);
    for (int f : a.finals) fin1[f] = 1;
    for (int f : b.finals) fin2[f] = 1;

    SameSpanState start;
    start.q1 = a.initial;
    start.q2 = b.initial;
    std::map<SameSpanState, std::pair<SameSpanState, SameSpanMove>> parent;
    std::set<SameSpanState> seen{start};
    std::deque<SameSpanState> work{start};
    long long visits = 0;
    std::optional<SameSpanState> hit;
    auto push = [&](const SameSpanState& cur, SameSpanState nxt, const SameSpanMove& m) {
        if (seen.insert(nxt).second) {
            parent[nxt] = {cur, m};
            work.push_back(nxt);
        }
    };
    while (!work.empty() && !hit) {
        SameSpanState cur = work.front();
        work.pop_front();
        if (++visits > lim.visit_cap)
            throw resource_error("key uniqueness search exceeded the visit cap");
        if (fin1[cur.q1] && fin2[cur.q2] && cur.st1 == 2 && cur.st2 == 2 &&
            cur.eb1 == cur.eb2) {
            hit = cur;
            break;
        }
        if (cur.st1 == 0)
            for (int to : open1[cur.q1]) {
                SameSpanState n = cur;
                n.q1 = to;
                n.st1 = 1;
                n.ob1 = 1;
                push(cur, n, {1, open_label(x)});
            }
        if (cur.st1 == 1)
            for (int to : close1[cur.q1]) {
                SameSpanState n = cur;
                n.q1 = to;
                n.st1 = 2;
                n.eb1 = n.ob1;
                push(cur, n, {1, close_label(x)});
            }
        if (cur.st2 == 0)
            for (int to : open2[cur.q2]) {
                SameSpanState n = cur;
                n.q2 = to;
                n.st2 = 1;
                n.ob2 = 1;
                push(cur, n, {2, open_label(x)});
            }
        if (cur.st2 == 1)
            for (int to : close2[cur.q2]) {
                SameSpanState n = cur;
                n.q2 = to;
                n.st2 = 2;
                n.eb2 = n.ob2;
                push(cur, n, {2, close_label(x)});
            }
        if (cur.st1 == cur.st2 && cur.eb1 == cur.eb2)
            for (const auto& [c1, to1] : sym1[cur.q1])
                for (const auto& [c2, to2] : sym2[cur.q2]) {
                    if (c1 != c2) continue;
                    SameSpanState n = cur;
                    n.q1 = to1;
                    n.q2 = to2;
                    n.ob1 = n.ob2 = n.eb1 = n.eb2 = 0;
                    push(cur, n, {0, sym_label(c1)});
                }
    }
    states += (long long)seen.size();
    if (!hit) return std::nullopt;
    Verdict v;
    v.answer = Answer::No;
    v.product_states = states;
    std::vector<SameSpanMove> path;
    for (SameSpanState cur = *hit; !(cur == start);) {
        const auto& [prev, m] = parent.at(cur);
        path.push_back(m);
        cur = prev;
    }
    std::reverse(path.begin(), path.end());
    std::string doc;
    Span sp;
    int boundary = 1;
    for (const auto& m : path) {
        if (m.side == 0) {
            doc += m.l.sym;
            boundary++;
        } else if (m.side == 1) {
            (m.l.kind == LabelKind::Open ? sp.lo : sp.hi) = boundary;
        }
    }
    if ((int)doc.size() <= lim.witness_cap) {
        Witness w;
        w.document = doc;
        w.tuple[x] = sp;
        w.split = sp;
        v.witness = w;
    }
    return v;
}

Vsa rejecting_like(const Vsa& p) {
    Vsa none;
    none.sigma = p.sigma;
    none.vars = p.vars;
    none.n_states = 1;
    none.initial = 0;
    return none;
}

}  // namespace

Verdict is_highlander(const Vsa& s, const Limits& lim) {
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    auto keys = annotation_keys(s);
    Verdict dj = splitter_disjoint(erase_keys(s), lim);
    if (dj.answer != Answer::Yes) return dj;
    long long states = dj.product_states;
    std::vector<Vsa> slices;
    for (const auto& k : keys) slices.push_back(eliminate_eps(key_slice(s, k)));
    const std::string& x = s.vars[0];
    for (size_t i = 0; i < slices.size(); i++)
        for (size_t j = i + 1; j < slices.size(); j++) {
            auto hit = same_span_pair(slices[i], slices[j], x, states, lim);
            if (hit) return *hit;
        }
    return yes_verdict(states);
}

Verdict annotated_split_correct(const Vsa& p, const std::map<std::string, Vsa>& m,
                                const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    auto keys = annotation_keys(s);
    std::optional<Vsa> un;
    for (const auto& k : keys) {
        auto it = m.find(k);
        if (it == m.end()) throw domain_error("no window spanner for key " + k);
        validate(it->second);
        if (it->second.vars != p.vars)
            throw domain_error("window spanners need the variables of the document spanner");
        Vsa slice = detail::detach_splitter_var(key_slice(s, k), p.vars);
        Vsa c = compose_construct(it->second, slice, lim);
        un = un ? vsa_union(*un, c) : c;
    }
    if (!un) un = rejecting_like(p);
    return equivalence(p, *un, lim);
}

Verdict annotated_split_correct_ptime(const Vsa& p, const std::map<std::string, Vsa>& m,
                                      const Vsa& s, const Limits& lim) {
    validate(p);
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    auto keys = annotation_keys(s);
    Verdict hl = is_highlander(s, lim);
    if (hl.answer != Answer::Yes)
        throw domain_error("the polynomial route needs a highlander splitter");
    long long states = hl.product_states;
    Vsa se = erase_keys(s);
    if (!certify_dfvsa(p))
        throw domain_error(
            "the polynomial route needs a deterministic functional document spanner");
    if (!certify_dfvsa(se))
        throw domain_error("the polynomial route needs a deterministic functional splitter");
    if (p.sigma != s.sigma) throw domain_error("operands need one shared alphabet");
    for (const auto& k : keys) {
        auto it = m.find(k);
        if (it == m.end()) throw domain_error("no window spanner for key " + k);
        validate(it->second);
        if (it->second.vars != p.vars)
            throw domain_error("window spanners need the variables of the document spanner");
        if (it->second.sigma != p.sigma)
            throw domain_error("operands need one shared alphabet");
        if (!certify_dfvsa(it->second))
            throw domain_error(
                "the polynomial route needs deterministic functional window spanners");
    }

    Vsa s2 = detail::detach_splitter_var(se, p.vars);
    const std::string& x = s2.vars[0];
    Verdict cover = cover_condition_ptime(p, s2, lim);
    if (cover.answer != Answer::Yes) return cover;
    states += cover.product_states;

    if (!p.vars.empty()) {
        for (const auto& k : keys) {
            std::vector<char> mask(s2.n_states, 0);
            for (int f : s.finals)
                if (s.annotations.at(f) == k) mask[f] = 1;
            auto hit = detail::window_disagreement(p, m.at(k), s2, mask, x, states, lim);
            if (hit) return *hit;
        }
    }
    std::optional<Vsa> un;
    for (const auto& k : keys) {
        Vsa slice = key_slice(s, k);
        if (slice.vars[0] != x) slice = rename_var(slice, slice.vars[0], x);
        Vsa c = compose_construct(m.at(k), slice, lim);
        un = un ? vsa_union(*un, c) : c;
    }
    if (!un) un = rejecting_like(p);
    return detail::marked_block_equality(p, *un, p.vars, x, states, lim);
}

AnnotatedSplittableResult annotated_splittable(const Vsa& p, const Vsa& s,
                                               const Limits& lim) {
    validate(p);
    validate(s);
    if (s.vars.size() != 1) throw domain_error("a splitter carries exactly one variable");
    Verdict hl = is_highlander(s, lim);
    if (hl.answer != Answer::Yes)
        throw domain_error("annotated splittability needs a highlander splitter");
    AnnotatedSplittableResult r;
    std::map<std::string, Vsa> m;
    for (const auto& k : annotation_keys(s))
        m.emplace(k, canonical_split_spanner(p, key_slice(s, k), true, lim));
    r.verdict = annotated_split_correct(p, m, s, lim);
    if (r.verdict.answer == Answer::Yes) r.canonical = std::move(m);
    return r;
}

}  // namespace spanners
