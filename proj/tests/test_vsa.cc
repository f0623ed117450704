#include <catch2/catch_amalgamated.hpp>

#include "spanners/vsa.hpp"

#include <filesystem>
#include <fstream>

#include "spanners/regex.hpp"

using namespace spanners;

namespace {

SpanRelation rel(std::initializer_list<SpanTuple> ts) { return SpanRelation(ts); }

SpanTuple one(const std::string& v, Span s) { return SpanTuple{{v, s}}; }

std::vector<std::string> docs_up_to(const std::string& sigma, int max_len) {
    std::vector<std::string> out{""};
    size_t lo = 0;
    for (int len = 1; len <= max_len; len++) {
        size_t hi = out.size();
        for (size_t i = lo; i < hi; i++)
            for (char c : sigma) out.push_back(out[i] + c);
        lo = hi;
    }
    return out;
}

// all ref-words the automaton accepts, up to a length bound
std::vector<RefWord> accepted_refwords(const Vsa& a, int max_len) {
    SymTable tab;
    Nfa nfa = ref_nfa(a, tab);
    std::vector<char> fin(nfa.n, 0);
    for (int q : nfa.finals) fin[q] = 1;
    std::vector<std::vector<std::pair<int, int>>> adj(nfa.n);
    for (const auto& t : nfa.trans) adj[t[0]].push_back({t[1], t[2]});
    std::vector<RefWord> out;
    std::vector<int> word;
    auto dfs = [&](auto&& self, int q) -> void {
        if (fin[q]) out.push_back(word_of_ids(word, tab));
        if ((int)word.size() == max_len) return;
        for (auto [s, r] : adj[q]) {
            word.push_back(s);
            self(self, r);
            word.pop_back();
        }
    };
    for (int q : nfa.initials) dfs(dfs, q);
    return out;
}

}  // namespace

TEST_CASE("structural validation catches malformed automata") {
    Vsa a;
    a.sigma = "ab";
    a.n_states = 2;
    a.initial = 0;
    a.finals = {1};
    a.transitions = {{0, sym_label('a'), 1}};
    validate(a);

    Vsa bad = a;
    bad.transitions[0].to = 5;
    CHECK_THROWS_AS(validate(bad), domain_error);

    bad = a;
    bad.transitions[0].label = open_label("x");  // x not declared
    CHECK_THROWS_AS(validate(bad), domain_error);

    bad = a;
    bad.transitions[0].label = sym_label('c');  // c not in sigma
    CHECK_THROWS_AS(validate(bad), domain_error);

    bad = a;
    bad.initial = 7;
    CHECK_THROWS_AS(validate(bad), domain_error);
}

TEST_CASE("json round trip keeps every field") {
    Vsa a = vsa_of("a x{b*} a", "ab");
    a.annotations[a.finals[0]] = "k1";
    Vsa b = vsa_from_json(vsa_to_json(a));
    CHECK(b.sigma == a.sigma);
    CHECK(b.vars == a.vars);
    CHECK(b.n_states == a.n_states);

    CHECK(b.initial == a.initial);
    CHECK(b.finals == a.finals);
    CHECK(b.annotations == a.annotations);
    for (const auto& d : docs_up_to("ab", 4))
        CHECK(evaluate(b, d) == evaluate(a, d));
}

TEST_CASE("automaton files load through the json form") {
    Vsa a = vsa_of("x{a}b", "ab");
    auto p = std::filesystem::temp_directory_path() / "vsa_roundtrip.json";
    {
        std::ofstream out(p);
        out << vsa_to_json(a).dump(2);
    }
    Vsa b = load_vsa_file(p.string());
    CHECK(evaluate(b, "ab") == rel({one("x", Span{1, 2})}));
    std::filesystem::remove(p);
    CHECK_THROWS_AS(load_vsa_file("/nonexistent/a.json"), error);
}

TEST_CASE("evaluation of a handwritten nondeterministic automaton") {
    // x spans any single character
    Vsa a;
    a.sigma = "ab";
    a.vars = {"x"};
    a.n_states = 4;
    a.initial = 0;
    a.finals = {3};
    a.transitions = {
        {0, sym_label('a'), 0}, {0, sym_label('b'), 0},
        {0, open_label("x"), 1}, {1, sym_label('a'), 2}, {1, sym_label('b'), 2},
        {2, close_label("x"), 3},
        {3, sym_label('a'), 3}, {3, sym_label('b'), 3},
    };
    CHECK(evaluate(a, "ab") == rel({one("x", Span{1, 2}), one("x", Span{2, 3})}));
    CHECK(evaluate(a, "").empty());
}

TEST_CASE("evaluation respects the result budget") {
    Vsa a = vsa_of("(a+b)* x{(a+b)} (a+b)*", "ab");
    Limits tight;
    tight.result_cap = 2;
    CHECK_THROWS_AS(evaluate(a, "aaa", tight), resource_error);
    CHECK(evaluate(a, "aaa").size() == 3);
}

TEST_CASE("normalization preserves semantics and certifies") {
    for (const char* text :
         {"x{a*} (a+b)*", "x{a}a + a x{a}", "a y{b} b", "(a+b)* x{ab} (a+b)*"}) {
        Vsa a = vsa_of(text, "ab");
        Vsa n = normalize(a);
        CHECK(certify_dfvsa(n));
        for (const auto& d : docs_up_to("ab", 4))
            CHECK(evaluate(n, d) == evaluate(a, d));
    }
}

TEST_CASE("normalized automata emit markers in sorted blocks") {
    Vsa n = normalize(vsa_of("y{ x{a} b } + x{a} y{b}", "ab"));
    for (const RefWord& w : accepted_refwords(n, 8)) {
        for (size_t i = 0; i + 1 < w.size(); i++)
            if (is_varop(w[i]) && is_varop(w[i + 1]))
                CHECK(varop_less(w[i], w[i + 1]));
    }
    CHECK(accepted_refwords(n, 8).size() == 2);
}

TEST_CASE("a deterministic encoding accepts one ref-word per tuple") {
    // the raw compilation has two runs for x at the same position
    Vsa a = vsa_of("x{a}(a+b) + x{a}(a+b)", "ab");
    Vsa n = normalize(a);
    auto words = accepted_refwords(n, 8);
    std::set<std::pair<std::string, SpanTuple>> seen;
    for (const RefWord& w : words) {
        REQUIRE(refword_valid(w, n.vars));
        CHECK(seen.insert({clr(w), tuple_of_refword(w, n.vars)}).second);
    }
    CHECK(words.size() == 2);
}

TEST_CASE("normalization respects the state budget") {
    Limits tight;
    tight.state_cap = 1;
    CHECK_THROWS_AS(normalize(vsa_of("x{a*}(a+b)*", "ab"), tight), resource_error);
}

TEST_CASE("determinism and functionality predicates") {
    Vsa n = normalize(vsa_of("a x{b} b", "ab"));
    CHECK(is_deterministic(n));
    CHECK(is_weakly_deterministic(n));
    CHECK(functionality_check(n));

    Vsa raw = vsa_of("x{a}a + a x{a}", "ab");
    CHECK_FALSE(is_deterministic(raw));  // compilation leaves eps edges

    Vsa partial = vsa_of("x{a} + b", "ab");
    CHECK_FALSE(functionality_check(partial));
}

TEST_CASE("normalization keeps only runs binding every variable") {
    Vsa n = normalize(vsa_of("x{a}?", "ab"));
    CHECK(certify_dfvsa(n));
    CHECK(evaluate(n, "").empty());
    CHECK(evaluate(n, "a") == rel({one("x", Span{1, 2})}));
}

TEST_CASE("union concatenates the tuple sets") {
    Vsa u = vsa_union(vsa_of("x{a}b", "ab"), vsa_of("a x{b}", "ab"));
    CHECK(evaluate(u, "ab") == rel({one("x", Span{1, 2}), one("x", Span{2, 3})}));
    CHECK_THROWS_AS(vsa_union(vsa_of("x{a}", "ab"), vsa_of("y{a}", "ab")),
                    domain_error);
    CHECK_THROWS_AS(vsa_union(vsa_of("x{a}", "ab"), vsa_of("x{a}", "ac")),
                    domain_error);
}

TEST_CASE("projection drops variables and may collapse tuples") {
    Vsa p = vsa_of("x{a} y{b} + x{a} y{<e>} b", "ab");
    Vsa keep_x = projection(p, {"x"});
    CHECK(keep_x.vars == std::vector<std::string>{"x"});
    CHECK(evaluate(keep_x, "ab") == rel({one("x", Span{1, 2})}));

    Vsa none = projection(p, {});
    CHECK(none.vars.empty());
    CHECK(evaluate(none, "ab") == rel({SpanTuple{}}));
    CHECK(evaluate(none, "ba").empty());
}

TEST_CASE("join on disjoint variables pairs the tuples") {
    Vsa j = vsa_join(vsa_of("x{a} .", "ab"), vsa_of(". y{b}", "ab"));
    CHECK(evaluate(j, "ab") ==
          rel({SpanTuple{{"x", Span{1, 2}}, {"y", Span{2, 3}}}}));
    CHECK(evaluate(j, "aa").empty());
    CHECK(evaluate(j, "ba").empty());
}

TEST_CASE("join on a shared variable needs agreeing spans") {
    Vsa a = vsa_of("x{a} .", "ab");
    Vsa b = vsa_of("x{a} . + . x{b}", "ab");
    Vsa j = vsa_join(a, b);
    CHECK(evaluate(j, "ab") == rel({one("x", Span{1, 2})}));
    CHECK(evaluate(j, "aa") == rel({one("x", Span{1, 2})}));
    // a's x always starts at 1, b's second branch never agrees
    for (const auto& d : docs_up_to("ab", 3)) {
        SpanRelation want;
        if (d.size() == 2 && d[0] == 'a') want.insert(one("x", Span{1, 2}));
        CHECK(evaluate(j, d) == want);
    }
}

TEST_CASE("concatenation requires a variable-free side") {
    Vsa c = vsa_concat(vsa_of("x{a}", "ab"), vsa_of("b*", "ab"));
    CHECK(evaluate(c, "a") == rel({one("x", Span{1, 2})}));
    CHECK(evaluate(c, "abb") == rel({one("x", Span{1, 2})}));
    CHECK(evaluate(c, "ba").empty());
    CHECK_THROWS_AS(vsa_concat(vsa_of("x{a}", "ab"), vsa_of("y{b}", "ab")),
                    domain_error);
}

TEST_CASE("variable renaming rewrites markers and declarations") {
    Vsa r = rename_var(vsa_of("a x{b} b", "ab"), "x", "z");
    CHECK(r.vars == std::vector<std::string>{"z"});
    CHECK(evaluate(r, "abb") == rel({one("z", Span{2, 3})}));
    CHECK_THROWS_AS(rename_var(r, "q", "w"), domain_error);
    CHECK_THROWS_AS(rename_var(vsa_of("x{a}y{b}", "ab"), "x", "y"), domain_error);
}

TEST_CASE("state configurations are unique on normalized automata") {
    Vsa n = normalize(vsa_of("a x{b} b", "ab"));
    auto cfg = state_configs(n);
    REQUIRE((int)cfg.size() == n.n_states);
    CHECK(cfg[n.initial] == std::vector<uint8_t>{0});
    for (int q : n.finals) CHECK(cfg[q] == std::vector<uint8_t>{2});
}

TEST_CASE("ref nfa and word decoding invert each other") {
    Vsa n = normalize(vsa_of("a x{b} b", "ab"));
    SymTable tab;
    Nfa nfa = ref_nfa(n, tab);
    auto w = shortest_word(nfa);
    REQUIRE(w.has_value());
    RefWord r = word_of_ids(*w, tab);
    CHECK(clr(r) == "abb");
    CHECK(refword_valid(r, n.vars));
    CHECK(tuple_of_refword(r, n.vars) == one("x", Span{2, 3}));
}

TEST_CASE("fresh variable names avoid the taken set") {
    CHECK(fresh_var("x", {}) == "x");
    std::string v = fresh_var("x", {"x", "x_"});
    CHECK(v != "x");
    CHECK(v != "x_");
}
