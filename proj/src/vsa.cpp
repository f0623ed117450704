#include "spanners/vsa.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace spanners {

namespace {

const char* kMeta = "(){}*?+|.<>\\";

bool valid_sigma_char(char c) {
    if (!std::isprint((unsigned char)c) || std::isspace((unsigned char)c)) return false;
    for (const char* m = kMeta; *m; m++)
        if (*m == c) return false;
    return true;
}

bool valid_var_name(const std::string& v) {
    if (v.empty() || !std::isalpha((unsigned char)v[0])) return false;
    for (char c : v)
        if (!std::isalnum((unsigned char)c) && c != '_') return false;
    return true;
}

int var_index(const Vsa& a, const std::string& v) {
    auto it = std::lower_bound(a.vars.begin(), a.vars.end(), v);
    if (it == a.vars.end() || *it != v) return -1;
    return (int)(it - a.vars.begin());
}

std::vector<std::vector<std::pair<Label, int>>> label_adj(const Vsa& a) {
    std::vector<std::vector<std::pair<Label, int>>> adj(a.n_states);
    for (const auto& t : a.transitions) adj[t.from].push_back({t.label, t.to});
    return adj;
}

void dedupe(Vsa& a) {
    std::set<Transition> uniq(a.transitions.begin(), a.transitions.end());
    a.transitions.assign(uniq.begin(), uniq.end());
    std::sort(a.finals.begin(), a.finals.end());
    a.finals.erase(std::unique(a.finals.begin(), a.finals.end()), a.finals.end());
}

}  // namespace

void validate(const Vsa& a) {
    if (a.n_states <= 0) throw domain_error("automaton needs at least one state");
    if (a.initial < 0 || a.initial >= a.n_states)
        throw domain_error("initial state out of range");
    for (char c : a.sigma)
        if (!valid_sigma_char(c))
            throw domain_error(std::string("alphabet symbol not allowed: ") + c);
    std::set<char> sig(a.sigma.begin(), a.sigma.end());
    if ((int)sig.size() != (int)a.sigma.size())
        throw domain_error("alphabet has repeated symbols");
    if (!std::is_sorted(a.sigma.begin(), a.sigma.end()))
        throw domain_error("alphabet must be sorted");
    if (!std::is_sorted(a.vars.begin(), a.vars.end()) ||
        std::adjacent_find(a.vars.begin(), a.vars.end()) != a.vars.end())
        throw domain_error("variables must be sorted and unique");
    for (const auto& v : a.vars)
        if (!valid_var_name(v)) throw domain_error("bad variable name: " + v);
    for (int q : a.finals)
        if (q < 0 || q >= a.n_states) throw domain_error("final state out of range");
    for (const auto& t : a.transitions) {
        if (t.from < 0 || t.from >= a.n_states || t.to < 0 || t.to >= a.n_states)
            throw domain_error("transition state out of range");
        switch (t.label.kind) {
            case LabelKind::Sym:
                if (!sig.count(t.label.sym))
                    throw domain_error(std::string("transition symbol not in alphabet: ") +
                                       t.label.sym);
                break;
            case LabelKind::Open:
            case LabelKind::Close:
                if (var_index(a, t.label.var) < 0)
                    throw domain_error("transition variable not declared: " + t.label.var);
                break;
            case LabelKind::Eps:
                break;
        }
    }
    for (const auto& [q, key] : a.annotations) {
        if (std::find(a.finals.begin(), a.finals.end(), q) == a.finals.end())
            throw domain_error("annotation on a non-final state");
        if (key.empty()) throw domain_error("empty annotation key");
    }
}

Vsa vsa_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw domain_error("automaton json must be an object");
    Vsa a;
    try {
        a.sigma = j.at("sigma").get<std::string>();
        for (const auto& v : j.at("vars")) a.vars.push_back(v.get<std::string>());
        a.n_states = j.at("states").get<int>();
        a.initial = j.at("initial").get<int>();
        for (const auto& f : j.at("finals")) a.finals.push_back(f.get<int>());
        for (const auto& t : j.at("transitions")) {
            Transition tr;
            tr.from = t.at("from").get<int>();
            tr.to = t.at("to").get<int>();
            const auto& l = t.at("label");
            if (l.contains("sym")) {
                auto s = l.at("sym").get<std::string>();
                if (s.size() != 1) throw domain_error("label sym must be one character");
                tr.label = sym_label(s[0]);
            } else if (l.contains("open")) {
                tr.label = open_label(l.at("open").get<std::string>());
            } else if (l.contains("close")) {
                tr.label = close_label(l.at("close").get<std::string>());
            } else if (l.contains("eps")) {
                tr.label = eps_label();
            } else {
                throw domain_error("label needs one of sym/open/close/eps");
            }
            a.transitions.push_back(tr);
        }
        if (j.contains("annotations"))
            for (const auto& [k, v] : j.at("annotations").items())
                a.annotations[std::stoi(k)] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("bad automaton json: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw domain_error("bad automaton json: annotation keys must be state ids");
    }
    std::sort(a.sigma.begin(), a.sigma.end());
    std::sort(a.vars.begin(), a.vars.end());
    validate(a);
    return a;
}

nlohmann::ordered_json vsa_to_json(const Vsa& a) {
    nlohmann::ordered_json j;
    j["sigma"] = a.sigma;
    j["vars"] = a.vars;
    j["states"] = a.n_states;
    j["initial"] = a.initial;
    auto finals = a.finals;
    std::sort(finals.begin(), finals.end());
    j["finals"] = finals;
    auto trans = a.transitions;
    std::sort(trans.begin(), trans.end());
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& t : trans) {
        nlohmann::ordered_json l;
        switch (t.label.kind) {
            case LabelKind::Sym: l["sym"] = std::string(1, t.label.sym); break;
            case LabelKind::Eps: l["eps"] = true; break;
            case LabelKind::Open: l["open"] = t.label.var; break;
            case LabelKind::Close: l["close"] = t.label.var; break;
        }
        arr.push_back({{"from", t.from}, {"label", l}, {"to", t.to}});
    }
    j["transitions"] = arr;
    if (!a.annotations.empty()) {
        nlohmann::ordered_json ann;
        for (const auto& [q, key] : a.annotations) ann[std::to_string(q)] = key;
        j["annotations"] = ann;
    }
    return j;
}

Vsa load_vsa_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(path + ": " + e.what());
    }
    return vsa_from_json(j);
}

bool is_final(const Vsa& a, int q) {
    return std::find(a.finals.begin(), a.finals.end(), q) != a.finals.end();
}

Vsa eliminate_eps(const Vsa& a) {
    std::vector<std::vector<int>> eadj(a.n_states);
    for (const auto& t : a.transitions)
        if (t.label.kind == LabelKind::Eps) eadj[t.from].push_back(t.to);
    std::vector<char> fin(a.n_states, 0);
    for (int q : a.finals) fin[q] = 1;
    auto adj = label_adj(a);
    Vsa out;
    out.sigma = a.sigma;
    out.vars = a.vars;
    out.n_states = a.n_states;
    out.initial = a.initial;
    std::set<Transition> uniq;
    for (int q = 0; q < a.n_states; q++) {
        std::vector<char> seen(a.n_states, 0);
        std::deque<int> work{q};
        seen[q] = 1;
        bool f = false;
        while (!work.empty()) {
            int p = work.front();
            work.pop_front();
            if (fin[p]) f = true;
            for (auto& [l, r] : adj[p])
                if (l.kind != LabelKind::Eps) uniq.insert({q, l, r});
            for (int r : eadj[p])
                if (!seen[r]) {
                    seen[r] = 1;
                    work.push_back(r);
                }
        }
        if (f) out.finals.push_back(q);
    }
    out.transitions.assign(uniq.begin(), uniq.end());
    // key-per-final info does not survive merged acceptance; callers
    // that need it slice per key first
    return out;
}

Vsa trim_vsa(const Vsa& a) {
    std::vector<std::vector<int>> out(a.n_states), in(a.n_states);
    for (const auto& t : a.transitions) {
        out[t.from].push_back(t.to);
        in[t.to].push_back(t.from);
    }
    std::vector<char> fwd(a.n_states, 0), bwd(a.n_states, 0);
    std::deque<int> work{a.initial};
    fwd[a.initial] = 1;
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int r : out[q])
            if (!fwd[r]) {
                fwd[r] = 1;
                work.push_back(r);
            }
    }
    for (int q : a.finals)
        if (!bwd[q]) {
            bwd[q] = 1;
            work.push_back(q);
        }
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int r : in[q])
            if (!bwd[r]) {
                bwd[r] = 1;
                work.push_back(r);
            }
    }
    std::vector<int> remap(a.n_states, -1);
    int next = 0;
    for (int q = 0; q < a.n_states; q++)
        if (fwd[q] && bwd[q]) remap[q] = next++;
    if (remap[a.initial] < 0) {
        // empty language, keep a bare initial so the shape stays valid
        Vsa empty;
        empty.sigma = a.sigma;
        empty.vars = a.vars;
        empty.n_states = 1;
        empty.initial = 0;
        return empty;
    }
    Vsa outv;
    outv.sigma = a.sigma;
    outv.vars = a.vars;
    outv.n_states = next;
    outv.initial = remap[a.initial];
    for (int q : a.finals)
        if (remap[q] >= 0) outv.finals.push_back(remap[q]);
    for (const auto& t : a.transitions)
        if (remap[t.from] >= 0 && remap[t.to] >= 0)
            outv.transitions.push_back({remap[t.from], t.label, remap[t.to]});
    for (const auto& [q, key] : a.annotations)
        if (remap[q] >= 0) outv.annotations[remap[q]] = key;
    dedupe(outv);
    return outv;
}

bool functionality_check(const Vsa& a0) {
    Vsa a = trim_vsa(eliminate_eps(a0));
    if (a.finals.empty()) return true;  // nothing accepted, nothing wrong
    int nv = (int)a.vars.size();
    auto adj = label_adj(a);
    std::vector<char> fin(a.n_states, 0);
    for (int q : a.finals) fin[q] = 1;
    std::set<std::pair<int, std::vector<uint8_t>>> seen;
    std::deque<std::pair<int, std::vector<uint8_t>>> work;
    std::vector<uint8_t> start(nv, 0);
    seen.insert({a.initial, start});
    work.push_back({a.initial, start});
    while (!work.empty()) {
        auto [q, st] = work.front();
        work.pop_front();
        // every state here is co-reachable, so any illegal move or an
        // acceptance with an unfinished variable is a real violation
        if (fin[q])
            for (uint8_t s : st)
                if (s != 2) return false;
        for (const auto& [l, r] : adj[q]) {
            std::vector<uint8_t> st2 = st;
            if (l.kind == LabelKind::Open) {
                int i = var_index(a, l.var);
                if (st2[i] != 0) return false;
                st2[i] = 1;
            } else if (l.kind == LabelKind::Close) {
                int i = var_index(a, l.var);
                if (st2[i] != 1) return false;
                st2[i] = 2;
            }
            if (seen.insert({r, st2}).second) work.push_back({r, st2});
        }
    }
    return true;
}

bool is_weakly_deterministic(const Vsa& a) {
    std::set<std::pair<int, Label>> seen;
    for (const auto& t : a.transitions) {
        if (t.label.kind == LabelKind::Eps) return false;
        if (!seen.insert({t.from, t.label}).second) return false;
    }
    return true;
}

bool is_deterministic(const Vsa& a) {
    if (!is_weakly_deterministic(a)) return false;
    // consecutive marker transitions must respect the fixed order
    std::vector<std::vector<Label>> in(a.n_states), out(a.n_states);
    for (const auto& t : a.transitions)
        if (is_varop(t.label)) {
            in[t.to].push_back(t.label);
            out[t.from].push_back(t.label);
        }
    for (int q = 0; q < a.n_states; q++)
        for (const auto& g1 : in[q])
            for (const auto& g2 : out[q])
                if (!varop_less(g1, g2)) return false;
    return true;
}

bool certify_dfvsa(const Vsa& a) {
    return is_deterministic(a) && functionality_check(a);
}

namespace {

// subset construction over the full label alphabet
Vsa determinize_vsa(const Vsa& a, int state_cap) {
    auto adj = label_adj(a);
    std::vector<char> fin(a.n_states, 0);
    for (int q : a.finals) fin[q] = 1;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = (int)subsets.size();
        if (id >= state_cap) throw resource_error("normalize: state budget exceeded");
        ids.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    };
    Vsa out;
    out.sigma = a.sigma;
    out.vars = a.vars;
    out.initial = intern({a.initial});
    for (int id = 0; id < (int)subsets.size(); id++) {
        std::map<Label, std::set<int>> next;
        for (int q : subsets[id])
            for (const auto& [l, r] : adj[q]) next[l].insert(r);
        for (const auto& [l, tgt] : next) {
            int nid = intern(std::vector<int>(tgt.begin(), tgt.end()));
            out.transitions.push_back({id, l, nid});
        }
    }
    out.n_states = (int)subsets.size();
    for (int id = 0; id < out.n_states; id++)
        for (int q : subsets[id])
            if (fin[q]) {
                out.finals.push_back(id);
                break;
            }
    return out;
}

}  // namespace

Vsa normalize(const Vsa& a0, const Limits& lim) {
    validate(a0);
    Vsa a = trim_vsa(eliminate_eps(a0));
    Vsa empty;
    empty.sigma = a0.sigma;
    empty.vars = a0.vars;
    empty.n_states = 1;
    if (a.finals.empty()) return empty;
    int nv = (int)a.vars.size();
    auto adj = label_adj(a);
    std::vector<char> fin(a.n_states, 0);
    for (int q : a.finals) fin[q] = 1;

    // gather the markers of each boundary, then release them sorted just
    // before the next plain symbol (or before accepting). Runs that
    // misuse a marker are dropped here, not repaired.
    using CKey = std::tuple<int, std::vector<uint8_t>, std::vector<Label>>;
    std::map<CKey, int> ids;
    std::deque<CKey> work;
    int n_nodes = 0;
    std::vector<Transition> trans;
    int budget = lim.state_cap;
    auto fresh = [&]() {
        if (n_nodes >= budget) throw resource_error("normalize: state budget exceeded");
        return n_nodes++;
    };
    auto intern = [&](const CKey& k) {
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        int id = fresh();
        ids.emplace(k, id);
        work.push_back(k);
        return id;
    };
    int sink = fresh();
    CKey start{a.initial, std::vector<uint8_t>(nv, 0), {}};
    int start_id = intern(start);
    auto emit_chain = [&](int from, const std::vector<Label>& ops, const Label& last,
                          int to) {
        // ops then last, through fresh states
        int cur = from;
        for (size_t i = 0; i < ops.size(); i++) {
            int nxt = fresh();
            trans.push_back({cur, ops[i], nxt});
            cur = nxt;
        }
        trans.push_back({cur, last, to});
    };
    while (!work.empty()) {
        CKey key = work.front();
        work.pop_front();
        int id = ids.at(key);
        const auto& [q, st, pend] = key;
        for (const auto& [l, r] : adj[q]) {
            if (l.kind == LabelKind::Open) {
                int i = var_index(a, l.var);
                if (st[i] != 0) continue;
                auto st2 = st;
                st2[i] = 1;
                auto pend2 = pend;
                pend2.insert(std::upper_bound(pend2.begin(), pend2.end(), l, varop_less),
                             l);
                trans.push_back({id, eps_label(), intern({r, st2, pend2})});
            } else if (l.kind == LabelKind::Close) {
                int i = var_index(a, l.var);
                if (st[i] != 1) continue;
                auto st2 = st;
                st2[i] = 2;
                auto pend2 = pend;
                pend2.insert(std::upper_bound(pend2.begin(), pend2.end(), l, varop_less),
                             l);
                trans.push_back({id, eps_label(), intern({r, st2, pend2})});
            } else if (l.kind == LabelKind::Sym) {
                int to = intern({r, st, {}});
                emit_chain(id, pend, l, to);
            }
        }
        bool closed = true;
        for (uint8_t s : st)
            if (s != 2) closed = false;
        if (fin[q] && closed) {
            if (pend.empty())
                trans.push_back({id, eps_label(), sink});
            else
                emit_chain(id, std::vector<Label>(pend.begin(), pend.end() - 1),
                           pend.back(), sink);
        }
    }
    Vsa c;
    c.sigma = a.sigma;
    c.vars = a.vars;
    c.n_states = n_nodes;
    c.initial = start_id;
    c.finals = {sink};
    c.transitions = std::move(trans);
    c = eliminate_eps(c);
    c = trim_vsa(c);
    if (c.finals.empty()) return empty;
    Vsa d = determinize_vsa(c, lim.state_cap);
    return trim_vsa(d);
}

SpanRelation evaluate(const Vsa& a0, const std::string& doc, const Limits& lim) {
    validate(a0);
    for (char ch : doc)
        if (a0.sigma.find(ch) == std::string::npos)
            throw domain_error(std::string("document symbol not in alphabet: ") + ch);
    Vsa a = eliminate_eps(a0);
    int nv = (int)a.vars.size();
    int n = (int)doc.size();
    auto adj = label_adj(a);
    std::vector<char> fin(a.n_states, 0);
    for (int q : a.finals) fin[q] = 1;
    SpanRelation out;
    // node: state, boundary, status / open / close positions per variable
    std::set<std::vector<int>> seen;
    std::deque<std::vector<int>> work;
    auto mk = [&](int q, int pos, const std::vector<int>& rest) {
        std::vector<int> node{q, pos};
        node.insert(node.end(), rest.begin(), rest.end());
        return node;
    };
    std::vector<int> rest0(3 * nv, 0);
    auto push = [&](std::vector<int> node) {
        if ((long long)seen.size() >= lim.visit_cap)
            throw resource_error("evaluate: visit budget exceeded");
        if (seen.insert(node).second) work.push_back(std::move(node));
    };
    push(mk(a.initial, 0, rest0));
    while (!work.empty()) {
        auto node = work.front();
        work.pop_front();
        int q = node[0], pos = node[1];
        const int* st = node.data() + 2;
        const int* lo = st + nv;
        const int* hi = lo + nv;
        if (fin[q] && pos == n) {
            bool closed = true;
            for (int i = 0; i < nv; i++)
                if (st[i] != 2) closed = false;
            if (closed) {
                SpanTuple t;
                for (int i = 0; i < nv; i++) t[a.vars[i]] = Span{lo[i], hi[i]};
                out.insert(t);
                if ((int)out.size() > lim.result_cap)
                    throw resource_error("evaluate: result budget exceeded");
            }
        }
        for (const auto& [l, r] : adj[q]) {
            if (l.kind == LabelKind::Sym) {
                if (pos < n && doc[pos] == l.sym) {
                    auto n2 = node;
                    n2[0] = r;
                    n2[1] = pos + 1;
                    push(std::move(n2));
                }
            } else if (l.kind == LabelKind::Open) {
                int i = var_index(a, l.var);
                if (st[i] == 0) {
                    auto n2 = node;
                    n2[0] = r;
                    n2[2 + i] = 1;
                    n2[2 + nv + i] = pos + 1;
                    push(std::move(n2));
                }
            } else if (l.kind == LabelKind::Close) {
                int i = var_index(a, l.var);
                if (st[i] == 1) {
                    auto n2 = node;
                    n2[0] = r;
                    n2[2 + i] = 2;
                    n2[2 + 2 * nv + i] = pos + 1;
                    push(std::move(n2));
                }
            }
        }
    }
    return out;
}

Vsa vsa_union(const Vsa& a, const Vsa& b) {
    if (a.vars != b.vars) throw domain_error("union needs equal variable sets");
    if (a.sigma != b.sigma) throw domain_error("union needs equal alphabets");
    Vsa out;
    out.sigma = a.sigma;
    out.vars = a.vars;
    out.n_states = 1 + a.n_states + b.n_states;
    out.initial = 0;
    int offa = 1, offb = 1 + a.n_states;
    out.transitions.push_back({0, eps_label(), offa + a.initial});
    out.transitions.push_back({0, eps_label(), offb + b.initial});
    for (const auto& t : a.transitions)
        out.transitions.push_back({t.from + offa, t.label, t.to + offa});
    for (const auto& t : b.transitions)
        out.transitions.push_back({t.from + offb, t.label, t.to + offb});
    for (int q : a.finals) out.finals.push_back(q + offa);
    for (int q : b.finals) out.finals.push_back(q + offb);
    for (const auto& [q, k] : a.annotations) out.annotations[q + offa] = k;
    for (const auto& [q, k] : b.annotations) out.annotations[q + offb] = k;
    return out;
}

Vsa projection(const Vsa& a, const std::vector<std::string>& keep) {
    std::vector<std::string> k = keep;
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    for (const auto& v : k)
        if (var_index(a, v) < 0)
            throw domain_error("projection variable not in automaton: " + v);
    Vsa out = a;
    out.vars = k;
    std::set<std::string> ks(k.begin(), k.end());
    for (auto& t : out.transitions)
        if (is_varop(t.label) && !ks.count(t.label.var)) t.label = eps_label();
    out.annotations.clear();
    return eliminate_eps(out);
}

Vsa vsa_join(const Vsa& a0, const Vsa& b0, const Limits& lim) {
    if (a0.sigma != b0.sigma) throw domain_error("join needs equal alphabets");
    std::vector<std::string> shared;
    std::set_intersection(a0.vars.begin(), a0.vars.end(), b0.vars.begin(), b0.vars.end(),
                          std::back_inserter(shared));
    Vsa a, b;
    if (!shared.empty()) {
        // synchronized marker steps need the one-sorted-block form
        a = normalize(a0, lim);
        b = normalize(b0, lim);
    } else {
        a = functionality_check(a0) ? eliminate_eps(a0) : normalize(a0, lim);
        b = functionality_check(b0) ? eliminate_eps(b0) : normalize(b0, lim);
    }
    std::set<std::string> sh(shared.begin(), shared.end());
    auto aadj = label_adj(a);
    auto badj = label_adj(b);
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    auto intern = [&](std::pair<int, int> s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = (int)states.size();
        if (id >= lim.state_cap) throw resource_error("join: state budget exceeded");
        ids.emplace(s, id);
        states.push_back(s);
        return id;
    };
    Vsa out;
    out.sigma = a0.sigma;
    std::set_union(a0.vars.begin(), a0.vars.end(), b0.vars.begin(), b0.vars.end(),
                   std::back_inserter(out.vars));
    out.initial = intern({a.initial, b.initial});
    for (int id = 0; id < (int)states.size(); id++) {
        auto [qa, qb] = states[id];
        for (const auto& [la, ra] : aadj[qa]) {
            if (la.kind == LabelKind::Sym || (is_varop(la) && sh.count(la.var))) {
                // synchronized move
                for (const auto& [lb, rb] : badj[qb])
                    if (lb == la)
                        out.transitions.push_back({id, la, intern({ra, rb})});
            } else {
                out.transitions.push_back({id, la, intern({ra, qb})});
            }
        }
        for (const auto& [lb, rb] : badj[qb])
            if (is_varop(lb) && !sh.count(lb.var))
                out.transitions.push_back({id, lb, intern({qa, rb})});
    }
    out.n_states = (int)states.size();
    std::set<int> afin(a.finals.begin(), a.finals.end());
    std::set<int> bfin(b.finals.begin(), b.finals.end());
    for (int id = 0; id < out.n_states; id++)
        if (afin.count(states[id].first) && bfin.count(states[id].second))
            out.finals.push_back(id);
    return trim_vsa(out);
}

Vsa vsa_concat(const Vsa& a, const Vsa& b) {
    if (a.sigma != b.sigma) throw domain_error("concat needs equal alphabets");
    if (!a.vars.empty() && !b.vars.empty())
        throw domain_error("concat needs one variable-free operand");
    Vsa out;
    out.sigma = a.sigma;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                   std::back_inserter(out.vars));
    out.n_states = a.n_states + b.n_states;
    out.initial = a.initial;
    int off = a.n_states;
    out.transitions = a.transitions;
    for (const auto& t : b.transitions)
        out.transitions.push_back({t.from + off, t.label, t.to + off});
    for (int q : a.finals) out.transitions.push_back({q, eps_label(), b.initial + off});
    for (int q : b.finals) out.finals.push_back(q + off);
    return out;
}

Vsa rename_var(const Vsa& a, const std::string& from, const std::string& to) {
    if (from == to) return a;
    if (var_index(a, from) < 0) throw domain_error("rename: no such variable: " + from);
    if (var_index(a, to) >= 0) throw domain_error("rename: name already taken: " + to);
    if (!valid_var_name(to)) throw domain_error("rename: bad variable name: " + to);
    Vsa out = a;
    for (auto& v : out.vars)
        if (v == from) v = to;
    std::sort(out.vars.begin(), out.vars.end());
    for (auto& t : out.transitions)
        if (is_varop(t.label) && t.label.var == from) t.label.var = to;
    return out;
}

std::vector<std::vector<uint8_t>> state_configs(const Vsa& a) {
    int nv = (int)a.vars.size();
    std::vector<std::vector<uint8_t>> cfg(a.n_states);
    std::vector<char> seen(a.n_states, 0);
    auto adj = label_adj(a);
    std::deque<int> work{a.initial};
    seen[a.initial] = 1;
    cfg[a.initial].assign(nv, 0);
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (const auto& [l, r] : adj[q]) {
            auto c = cfg[q];
            if (l.kind == LabelKind::Eps)
                throw domain_error("state_configs needs an eps-free automaton");
            if (l.kind == LabelKind::Open) c[var_index(a, l.var)] = 1;
            if (l.kind == LabelKind::Close) c[var_index(a, l.var)] = 2;
            if (!seen[r]) {
                seen[r] = 1;
                cfg[r] = c;
                work.push_back(r);
            } else if (cfg[r] != c) {
                throw domain_error("state with two marker configurations");
            }
        }
    }
    for (int q = 0; q < a.n_states; q++)
        if (!seen[q]) throw domain_error("state_configs needs a trimmed automaton");
    return cfg;
}

int SymTable::id(const Label& l) {
    auto it = ids.find(l);
    if (it != ids.end()) return it->second;
    int v = (int)syms.size();
    ids.emplace(l, v);
    syms.push_back(l);
    return v;
}

int SymTable::find(const Label& l) const {
    auto it = ids.find(l);
    return it == ids.end() ? -1 : it->second;
}

Nfa ref_nfa(const Vsa& a, SymTable& tab) {
    Nfa n;
    n.n = a.n_states;
    n.initials = {a.initial};
    n.finals = a.finals;
    for (const auto& t : a.transitions) {
        if (t.label.kind == LabelKind::Eps)
            throw domain_error("ref_nfa needs an eps-free automaton");
        n.trans.push_back({t.from, tab.id(t.label), t.to});
    }
    // callers that build several automata over one table must bump
    // n_syms to the final table size afterwards
    n.n_syms = (int)tab.syms.size();
    return n;
}

RefWord word_of_ids(const std::vector<int>& w, const SymTable& tab) {
    RefWord r;
    for (int s : w) r.push_back(tab.syms.at(s));
    return r;
}

std::string fresh_var(const std::string& base, const std::vector<std::string>& taken) {
    std::string v = base;
    while (std::find(taken.begin(), taken.end(), v) != taken.end()) v += "_";
    return v;
}

}  // namespace spanners
