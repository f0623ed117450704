#include <catch2/catch_amalgamated.hpp>

#include "spanners/oracle.hpp"

#include <algorithm>

#include "spanners/regex.hpp"

using namespace spanners;

namespace {

SpanRelation rel(std::initializer_list<SpanTuple> ts) { return SpanRelation(ts); }

SpanTuple one(const std::string& v, Span s) { return SpanTuple{{v, s}}; }

// complete one-state DFA accepting everything
Nfa dfa_all() { return Nfa{1, 2, {0}, {0}, {{0, 0, 0}, {0, 1, 0}}}; }

// complete one-state DFA accepting nothing
Nfa dfa_none() { return Nfa{1, 2, {0}, {}, {{0, 0, 0}, {0, 1, 0}}}; }

// words of even length
Nfa dfa_even() {
    return Nfa{2, 2, {0}, {0}, {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}}};
}

Nfa dfa_odd() {
    return Nfa{2, 2, {0}, {1}, {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}}};
}

// splitter with one key per first letter
Vsa keyed_splitter() {
    Vsa s1 = vsa_of("x{a}(a+b)*", "ab");
    for (int q : s1.finals) s1.annotations[q] = "k1";
    Vsa s2 = vsa_of("x{b}(a+b)*", "ab");
    for (int q : s2.finals) s2.annotations[q] = "k2";
    return vsa_union(s1, s2);
}

}  // namespace

TEST_CASE("document enumeration is layered by length") {
    auto docs = all_docs("ab", 2);
    CHECK(docs.size() == 7);
    CHECK(docs[0] == "");
    CHECK(std::count(docs.begin(), docs.end(), "ba") == 1);
    CHECK(all_docs("abc", 0) == std::vector<std::string>{""});
}

TEST_CASE("brute evaluation agrees with the engine on random automata") {
    auto docs = all_docs("ab", 3);
    for (unsigned seed = 1; seed <= 30; seed++) {
        Rng rng(seed);
        Vsa a = random_vsa(rng, "ab", {"y"}, 4);
        for (const auto& d : docs) {
            INFO("seed " << seed << " doc '" << d << "'");
            CHECK(brute_eval(a, d) == evaluate(a, d));
        }
    }
}

TEST_CASE("brute evaluation of a formula without compiling it") {
    Formula f = parse_formula("a y{b} b", "ab");
    CHECK(brute_eval_formula(f, "ab", "abb") == rel({one("y", Span{2, 3})}));
    CHECK(brute_eval_formula(f, "ab", "ab").empty());
    CHECK(brute_eval_formula(f, "ab", "abbb").empty());
}

TEST_CASE("literal composition shifts window tuples back") {
    Vsa s = vsa_of("x{ab}b + a x{bb}", "ab");
    CHECK(brute_compose(vsa_of("a y{b}", "ab"), s, "abb") ==
          rel({one("y", Span{2, 3})}));
    CHECK(brute_compose(vsa_of("y{b} b", "ab"), s, "abb") ==
          rel({one("y", Span{2, 3})}));
    CHECK(brute_compose(vsa_of("y{b}", "ab"), s, "abb").empty());
}

TEST_CASE("bounded disjointness finds the overlapping splits") {
    auto r = bounded_disjoint(vsa_of("x{ab}b + a x{bb}", "ab"), 4);
    CHECK(r.counterexample_found);
    CHECK(r.document == "abb");
    CHECK_FALSE(bounded_disjoint(vsa_of("x{(a+b)*}", "ab"), 4).counterexample_found);
}

TEST_CASE("bounded cover checks tuples against split windows") {
    Vsa s = vsa_of("x{ab}b + a x{bb}", "ab");
    CHECK_FALSE(bounded_cover(vsa_of("a y{b} b", "ab"), s, 4).counterexample_found);
    auto r = bounded_cover(vsa_of("y{(a+b)(a+b)(a+b)}", "ab"), s, 4);
    CHECK(r.counterexample_found);
    CHECK(r.document.size() == 3);
}

TEST_CASE("bounded equivalence reports the first separating document") {
    CHECK_FALSE(bounded_equivalence(vsa_of("x{a}", "ab"), vsa_of("x{a}", "ab"), 3)
                    .counterexample_found);
    auto r = bounded_equivalence(vsa_of("x{a}", "ab"), vsa_of("x{a} + x{b}", "ab"), 3);
    CHECK(r.counterexample_found);
    CHECK(r.document == "b");
}

TEST_CASE("bounded split-correctness replays the composition") {
    Vsa p = vsa_of("a y{b} b", "ab");
    Vsa s = vsa_of("x{ab}b + a x{bb}", "ab");
    CHECK_FALSE(
        bounded_split_correct(p, vsa_of("a y{b}", "ab"), s, 4).counterexample_found);
    auto r = bounded_split_correct(p, vsa_of("y{b}", "ab"), s, 4);
    CHECK(r.counterexample_found);
    CHECK(r.document == "abb");
}

TEST_CASE("bounded highlander check distinguishes both failure modes") {
    CHECK_FALSE(bounded_highlander(keyed_splitter(), 3).counterexample_found);

    // same span under two keys
    Vsa s1 = vsa_of("x{a}(a+b)*", "ab");
    for (int q : s1.finals) s1.annotations[q] = "k1";
    Vsa s2 = vsa_of("x{(a+b)}(a+b)*", "ab");
    for (int q : s2.finals) s2.annotations[q] = "k2";
    auto r = bounded_highlander(vsa_union(s1, s2), 2);
    CHECK(r.counterexample_found);
    CHECK(r.document == "a");
}

TEST_CASE("bounded splittability needs consistent window contents") {
    Vsa s = vsa_of("x{(a+b)} (a+b) + (a+b) x{(a+b)}", "ab");
    auto cover_fail = bounded_splittability_condition(
        vsa_of("y{(a+b)(a+b)}", "ab"), s, 3);
    CHECK(cover_fail.counterexample_found);

    // covered, but the window "a" must both produce and not produce a tuple
    auto incons = bounded_splittability_condition(
        vsa_of("y{a}b + b y{b}", "ab"), s, 3);
    CHECK(incons.counterexample_found);
    CHECK(!incons.document.empty());
    CHECK(!incons.document2.empty());

    CHECK_FALSE(bounded_splittability_condition(
                    vsa_of("a y{b} b", "ab"), vsa_of("x{ab}b + a x{bb}", "ab"), 4)
                    .counterexample_found);
}

TEST_CASE("seeded rng is reproducible and bounded") {
    Rng r1(7), r2(7);
    for (int i = 0; i < 50; i++) {
        int lo = -3, hi = 9;
        int v = r1.pick(lo, hi);
        CHECK(v == r2.pick(lo, hi));
        CHECK(lo <= v);
        CHECK(v <= hi);
    }
    Rng r3(8);
    for (int i = 0; i < 20; i++) {
        CHECK_FALSE(r3.chance(0.0));
        CHECK(r3.chance(1.0));
    }
}

TEST_CASE("random automata are structurally sound") {
    for (unsigned seed = 1; seed <= 20; seed++) {
        Rng rng(seed);
        Vsa a = random_vsa(rng, "abc", {"y", "z"}, 5);
        validate(a);
        CHECK(a.sigma == "abc");
        CHECK(a.n_states <= 5);

        Vsa s = random_splitter(rng, "ab");
        validate(s);
        CHECK(s.vars == std::vector<std::string>{"x"});

        Nfa d = random_dfa(rng, 2, 3);
        CHECK(d.initials.size() == 1);
        CHECK((int)d.trans.size() == d.n * d.n_syms);
    }
}

TEST_CASE("union universality on handwritten families") {
    CHECK(union_universal({dfa_all()}, 2));
    CHECK_FALSE(union_universal({dfa_none()}, 2));
    CHECK_FALSE(union_universal({dfa_even()}, 2));
    CHECK(union_universal({dfa_even(), dfa_odd()}, 2));
    CHECK(union_universal({dfa_even(), dfa_odd(), dfa_none()}, 2));
    CHECK_FALSE(union_universal({dfa_none(), dfa_even()}, 2));
}

TEST_CASE("annotated brute evaluation keys every tuple") {
    KeyedRelation r = brute_annotated_eval(keyed_splitter(), "ab");
    REQUIRE(r.size() == 1);
    CHECK(r.begin()->first == "k1");
    CHECK(r.begin()->second == one("x", Span{1, 2}));
    CHECK(brute_annotated_eval(keyed_splitter(), "ba").begin()->first == "k2");
}

TEST_CASE("gadget instances are well formed automata") {
    GadgetPair gp = gadget_containment({dfa_even(), dfa_odd()}, "ab");
    validate(gp.lhs);
    validate(gp.rhs);
    CHECK(gp.lhs.vars == gp.rhs.vars);

    GadgetTriple gt = gadget_split({dfa_even()}, "ab");
    validate(gt.p);
    validate(gt.ps);
    validate(gt.s);
    CHECK(gt.s.vars.size() == 1);

    Formula r1 = parse_formula("a*", "ab");
    Formula r2 = parse_formula("(a+b)*", "ab");
    GadgetTriple gb = gadget_boolean_splittable(r1, r2, "ab");
    validate(gb.p);
    validate(gb.ps);
    validate(gb.s);

    GadgetTriple gs = gadget_selfsplit(r1, r2, "ab", 'c');
    validate(gs.p);
    validate(gs.s);
    CHECK(gs.p.sigma.find('c') != std::string::npos);
}
