#include "spanners/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "spanners/core.hpp"

namespace spanners {

using boost::multiprecision::cpp_int;

namespace {

// adj[sym][from] -> targets
std::vector<std::vector<std::vector<int>>> sym_adj(const Nfa& a) {
    std::vector<std::vector<std::vector<int>>> adj(
        a.n_syms, std::vector<std::vector<int>>(a.n));
    for (const auto& t : a.trans) adj[t[1]][t[0]].push_back(t[2]);
    return adj;
}

std::vector<char> reach_forward(const Nfa& a) {
    std::vector<std::vector<int>> out(a.n);
    for (const auto& t : a.trans) out[t[0]].push_back(t[2]);
    std::vector<char> seen(a.n, 0);
    std::deque<int> work(a.initials.begin(), a.initials.end());
    for (int q : a.initials) seen[q] = 1;
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int r : out[q])
            if (!seen[r]) {
                seen[r] = 1;
                work.push_back(r);
            }
    }
    return seen;
}

std::vector<char> reach_backward(const Nfa& a) {
    std::vector<std::vector<int>> in(a.n);
    for (const auto& t : a.trans) in[t[2]].push_back(t[0]);
    std::vector<char> seen(a.n, 0);
    std::deque<int> work;
    for (int q : a.finals)
        if (!seen[q]) {
            seen[q] = 1;
            work.push_back(q);
        }
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int r : in[q])
            if (!seen[r]) {
                seen[r] = 1;
                work.push_back(r);
            }
    }
    return seen;
}

}  // namespace

Nfa trim_nfa(const Nfa& a) {
    if (a.n == 0) return Nfa{0, a.n_syms, {}, {}, {}};
    auto fwd = reach_forward(a);
    auto bwd = reach_backward(a);
    std::vector<int> remap(a.n, -1);
    int next = 0;
    for (int q = 0; q < a.n; q++)
        if (fwd[q] && bwd[q]) remap[q] = next++;
    Nfa out;
    out.n = next;
    out.n_syms = a.n_syms;
    for (int q : a.initials)
        if (remap[q] >= 0) out.initials.push_back(remap[q]);
    for (int q : a.finals)
        if (remap[q] >= 0) out.finals.push_back(remap[q]);
    std::set<std::array<int, 3>> uniq;
    for (const auto& t : a.trans)
        if (remap[t[0]] >= 0 && remap[t[2]] >= 0)
            uniq.insert({remap[t[0]], t[1], remap[t[2]]});
    out.trans.assign(uniq.begin(), uniq.end());
    std::sort(out.initials.begin(), out.initials.end());
    out.initials.erase(std::unique(out.initials.begin(), out.initials.end()),
                       out.initials.end());
    std::sort(out.finals.begin(), out.finals.end());
    out.finals.erase(std::unique(out.finals.begin(), out.finals.end()), out.finals.end());
    return out;
}

bool nfa_empty(const Nfa& a) { return trim_nfa(a).n == 0; }

bool nfa_accepts(const Nfa& a, const std::vector<int>& word) {
    auto adj = sym_adj(a);
    std::vector<char> cur(a.n, 0);
    for (int q : a.initials) cur[q] = 1;
    for (int s : word) {
        if (s < 0 || s >= a.n_syms) return false;
        std::vector<char> next(a.n, 0);
        for (int q = 0; q < a.n; q++)
            if (cur[q])
                for (int r : adj[s][q]) next[r] = 1;
        cur.swap(next);
    }
    for (int q : a.finals)
        if (cur[q]) return true;
    return false;
}

std::optional<std::vector<int>> shortest_word(const Nfa& a) {
    std::vector<std::pair<int, int>> parent(a.n, {-2, -1});  // (prev state, sym)
    std::deque<int> work;
    for (int q : a.initials)
        if (parent[q].first == -2) {
            parent[q] = {-1, -1};
            work.push_back(q);
        }
    std::vector<std::vector<std::pair<int, int>>> out(a.n);
    for (const auto& t : a.trans) out[t[0]].push_back({t[1], t[2]});
    std::set<int> fin(a.finals.begin(), a.finals.end());
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        if (fin.count(q)) {
            std::vector<int> w;
            int cur = q;
            while (parent[cur].first >= 0) {
                w.push_back(parent[cur].second);
                cur = parent[cur].first;
            }
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (auto [s, r] : out[q])
            if (parent[r].first == -2) {
                parent[r] = {q, s};
                work.push_back(r);
            }
    }
    return std::nullopt;
}

Nfa eliminate_eps_nfa(const Nfa& a, const std::vector<std::pair<int, int>>& eps) {
    std::vector<std::vector<int>> eadj(a.n);
    for (auto [p, q] : eps) eadj[p].push_back(q);
    // closure per state
    std::vector<std::vector<int>> closure(a.n);
    for (int q = 0; q < a.n; q++) {
        std::vector<char> seen(a.n, 0);
        std::deque<int> work{q};
        seen[q] = 1;
        while (!work.empty()) {
            int p = work.front();
            work.pop_front();
            closure[q].push_back(p);
            for (int r : eadj[p])
                if (!seen[r]) {
                    seen[r] = 1;
                    work.push_back(r);
                }
        }
    }
    Nfa out;
    out.n = a.n;
    out.n_syms = a.n_syms;
    out.initials = a.initials;
    std::vector<char> fin(a.n, 0);
    for (int q : a.finals) fin[q] = 1;
    std::set<std::array<int, 3>> uniq(a.trans.begin(), a.trans.end());
    std::vector<std::vector<std::pair<int, int>>> outs(a.n);
    for (const auto& t : a.trans) outs[t[0]].push_back({t[1], t[2]});
    for (int q = 0; q < a.n; q++) {
        bool f = false;
        for (int p : closure[q]) {
            if (fin[p]) f = true;
            if (p != q)
                for (auto [s, r] : outs[p]) uniq.insert({q, s, r});
        }
        if (f) out.finals.push_back(q);
    }
    out.trans.assign(uniq.begin(), uniq.end());
    return out;
}

Nfa determinize_nfa(const Nfa& a, int state_cap) {
    auto adj = sym_adj(a);
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = (int)subsets.size();
        if (id >= state_cap) throw resource_error("determinize: state budget exceeded");
        ids.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    };
    std::vector<int> start(a.initials);
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    Nfa out;
    out.n_syms = a.n_syms;
    out.initials = {intern(start)};
    std::vector<char> fin(a.n, 0);
    for (int q : a.finals) fin[q] = 1;
    for (int id = 0; id < (int)subsets.size(); id++) {
        for (int s = 0; s < a.n_syms; s++) {
            std::set<int> tgt;
            for (int q : subsets[id])
                for (int r : adj[s][q]) tgt.insert(r);
            if (tgt.empty()) continue;
            int nid = intern(std::vector<int>(tgt.begin(), tgt.end()));
            out.trans.push_back({id, s, nid});
        }
    }
    out.n = (int)subsets.size();
    for (int id = 0; id < out.n; id++)
        for (int q : subsets[id])
            if (fin[q]) {
                out.finals.push_back(id);
                break;
            }
    return out;
}

bool nfa_unambiguous(const Nfa& a0, long long work_cap) {
    Nfa a = trim_nfa(a0);
    if (a.n == 0) return true;
    auto adj = sym_adj(a);
    auto code = [&](int p, int q) { return (long long)p * a.n + q; };
    // forward: pairs of states reached by the same word
    std::set<long long> fwd;
    std::deque<std::pair<int, int>> work;
    for (int p : a.initials)
        for (int q : a.initials)
            if (fwd.insert(code(p, q)).second) work.push_back({p, q});
    long long steps = 0;
    while (!work.empty()) {
        auto [p, q] = work.front();
        work.pop_front();
        for (int s = 0; s < a.n_syms; s++)
            for (int p2 : adj[s][p])
                for (int q2 : adj[s][q]) {
                    if (++steps > work_cap)
                        throw resource_error("unambiguity check: work budget exceeded");
                    if (fwd.insert(code(p2, q2)).second) work.push_back({p2, q2});
                }
    }
    // backward: pairs that can both still accept the same word
    std::vector<std::vector<std::vector<int>>> radj(
        a.n_syms, std::vector<std::vector<int>>(a.n));
    for (const auto& t : a.trans) radj[t[1]][t[2]].push_back(t[0]);
    std::set<long long> bwd;
    for (int p : a.finals)
        for (int q : a.finals)
            if (bwd.insert(code(p, q)).second) work.push_back({p, q});
    while (!work.empty()) {
        auto [p, q] = work.front();
        work.pop_front();
        for (int s = 0; s < a.n_syms; s++)
            for (int p2 : radj[s][p])
                for (int q2 : radj[s][q]) {
                    if (++steps > work_cap)
                        throw resource_error("unambiguity check: work budget exceeded");
                    if (bwd.insert(code(p2, q2)).second) work.push_back({p2, q2});
                }
    }
    for (long long c : fwd) {
        int p = (int)(c / a.n), q = (int)(c % a.n);
        if (p != q && bwd.count(c)) return false;
    }
    return true;
}

namespace {

// shortest word accepted by a but not b, by lazy subset product
std::optional<std::vector<int>> subset_witness(const Nfa& a, const Nfa& b,
                                               int state_cap, long long* explored) {
    auto aadj = sym_adj(a);
    auto badj = sym_adj(b);
    std::map<std::vector<int>, int> subset_ids;
    std::vector<std::vector<int>> subsets;
    std::vector<char> bfin(b.n, 0);
    for (int q : b.finals) bfin[q] = 1;
    auto intern = [&](std::vector<int> s) {
        auto it = subset_ids.find(s);
        if (it != subset_ids.end()) return it->second;
        int id = (int)subsets.size();
        if (id >= state_cap) throw resource_error("containment: subset budget exceeded");
        subset_ids.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    };
    std::vector<int> bstart(b.initials);
    std::sort(bstart.begin(), bstart.end());
    bstart.erase(std::unique(bstart.begin(), bstart.end()), bstart.end());
    int start_id = intern(bstart);
    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int>> parent;
    std::deque<std::pair<int, int>> work;
    std::vector<char> afin(a.n, 0);
    for (int q : a.finals) afin[q] = 1;
    auto push = [&](std::pair<int, int> node, std::pair<int, int> from, int sym) {
        if (parent.count(node)) return;
        if ((long long)parent.size() >= (long long)state_cap * 4)
            throw resource_error("containment: pair budget exceeded");
        parent[node] = {from, sym};
        work.push_back(node);
    };
    for (int q : a.initials) push({q, start_id}, {-1, -1}, -1);
    while (!work.empty()) {
        auto node = work.front();
        work.pop_front();
        auto [aq, sid] = node;
        bool bacc = false;
        for (int q : subsets[sid])
            if (bfin[q]) bacc = true;
        if (afin[aq] && !bacc) {
            std::vector<int> w;
            auto cur = node;
            while (parent.at(cur).second >= 0) {
                w.push_back(parent.at(cur).second);
                cur = parent.at(cur).first;
            }
            std::reverse(w.begin(), w.end());
            if (explored) *explored = (long long)parent.size();
            return w;
        }
        for (int s = 0; s < a.n_syms; s++) {
            if (aadj[s][aq].empty()) continue;
            std::set<int> tgt;
            for (int q : subsets[sid])
                for (int r : badj[s][q]) tgt.insert(r);
            int nid = intern(std::vector<int>(tgt.begin(), tgt.end()));
            for (int ar : aadj[s][aq]) push({ar, nid}, node, s);
        }
    }
    if (explored) *explored = (long long)parent.size();
    return std::nullopt;
}

}  // namespace

ContainResult ufa_contained(const Nfa& a0, const Nfa& b0, long long work_cap) {
    Nfa a = trim_nfa(a0);
    ContainResult res;
    res.counted = true;
    if (a.n == 0) return res;
    Nfa b = trim_nfa(b0);
    if (!nfa_unambiguous(a, work_cap) || !nfa_unambiguous(b, work_cap))
        throw domain_error("path counting needs unambiguous automata");
    // reachable part of the product
    std::map<std::pair<int, int>, int> pid;
    std::vector<std::pair<int, int>> pstates;
    auto intern = [&](std::pair<int, int> s) {
        auto it = pid.find(s);
        if (it != pid.end()) return it->second;
        int id = (int)pstates.size();
        pid.emplace(s, id);
        pstates.push_back(s);
        return id;
    };
    auto aadj = sym_adj(a);
    auto badj = sym_adj(b);
    Nfa prod;
    prod.n_syms = a.n_syms;
    std::deque<int> work;
    for (int p : a.initials)
        for (int q : b.initials) {
            int id = intern({p, q});
            prod.initials.push_back(id);
            work.push_back(id);
        }
    std::set<int> seen(prod.initials.begin(), prod.initials.end());
    long long steps = 0;
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        auto [p, q] = pstates[id];
        for (int s = 0; s < a.n_syms && s < b.n_syms; s++)
            for (int p2 : aadj[s][p])
                for (int q2 : badj[s][q]) {
                    if (++steps > work_cap)
                        throw resource_error("path counting: product budget exceeded");
                    int nid = intern({p2, q2});
                    prod.trans.push_back({id, s, nid});
                    if (seen.insert(nid).second) work.push_back(nid);
                }
    }
    prod.n = (int)pstates.size();
    std::set<int> afin(a.finals.begin(), a.finals.end());
    std::set<int> bfin(b.finals.begin(), b.finals.end());
    for (int id = 0; id < prod.n; id++)
        if (afin.count(pstates[id].first) && bfin.count(pstates[id].second))
            prod.finals.push_back(id);
    prod = trim_nfa(prod);
    res.product_states = prod.n;

    // two length-indexed path counts agree everywhere iff they agree up
    // to the sum of the automaton sizes
    long long horizon = (long long)a.n + prod.n;
    if (((long long)a.trans.size() + prod.trans.size()) * horizon > work_cap)
        throw resource_error("path counting: length budget exceeded");
    std::vector<cpp_int> va(a.n, 0), vp(prod.n, 0);
    for (int q : a.initials) va[q] += 1;
    for (int q : prod.initials) vp[q] += 1;
    for (long long len = 0; len <= horizon; len++) {
        cpp_int ca = 0, cp = 0;
        for (int q : a.finals) ca += va[q];
        for (int q : prod.finals) cp += vp[q];
        if (ca != cp) {
            res.contained = false;
            res.witness = subset_witness(a, b, 100000, nullptr);
            return res;
        }
        std::vector<cpp_int> na(a.n, 0), np(prod.n, 0);
        for (const auto& t : a.trans) na[t[2]] += va[t[0]];
        for (const auto& t : prod.trans) np[t[2]] += vp[t[0]];
        va.swap(na);
        vp.swap(np);
    }
    return res;
}

ContainResult nfa_contained(const Nfa& a, const Nfa& b, int state_cap) {
    try {
        return ufa_contained(a, b, 20000000LL);
    } catch (const domain_error&) {
    } catch (const resource_error&) {
    }
    ContainResult res;
    res.counted = false;
    long long explored = 0;
    Nfa at = trim_nfa(a);
    if (at.n == 0) return res;
    auto w = subset_witness(at, b, state_cap, &explored);
    res.product_states = explored;
    if (w) {
        res.contained = false;
        res.witness = std::move(w);
    }
    return res;
}

}  // namespace spanners
