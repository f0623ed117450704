#include <catch2/catch_amalgamated.hpp>

#include "spanners/decisions.hpp"

#include "spanners/oracle.hpp"
#include "spanners/regex.hpp"

using namespace spanners;

namespace {

Vsa V(const std::string& text) { return vsa_of(text, "ab"); }

SpanRelation rel(std::initializer_list<SpanTuple> ts) { return SpanRelation(ts); }

SpanTuple one(const std::string& v, Span s) { return SpanTuple{{v, s}}; }

// the running example: occurrences of b between an a and a trailing b
Vsa doc_spanner() { return V("a y{b} b"); }
// overlapping two-character windows, not disjoint
Vsa overlap_splitter() { return V("x{ab}b + a x{bb}"); }
// one window per whole three-character document
Vsa whole3_splitter() { return V("x{(a+b)(a+b)(a+b)}"); }
// one window per character
Vsa char_splitter() { return V("x{(a+b)} (a+b) + (a+b) x{(a+b)} + x{(a+b)}"); }

}  // namespace

TEST_CASE("containment and its witnesses") {
    CHECK(containment(V("x{a}"), V("x{a} + x{b}")).answer == Answer::Yes);

    Verdict v = containment(V("x{a} + x{b}"), V("x{a}"));
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "b");
    CHECK(v.witness->tuple == one("x", Span{1, 2}));
    // replay: the tuple really separates the two sides
    CHECK(brute_eval(V("x{a} + x{b}"), "b").count(v.witness->tuple) == 1);
    CHECK(brute_eval(V("x{a}"), "b").count(v.witness->tuple) == 0);

    CHECK_THROWS_AS(containment(V("x{a}"), V("y{a}")), domain_error);
    CHECK_THROWS_AS(containment(V("x{a}"), vsa_of("x{a}", "ac")), domain_error);
}

TEST_CASE("equivalence tells the side that has the extra tuple") {
    CHECK(equivalence(V("x{a}b + x{a}b"), V("x{a}b")).answer == Answer::Yes);
    Verdict v = equivalence(V("x{a}"), V("x{a} + x{b}"));
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "b");
    CHECK(v.witness->side == "rhs");
}

TEST_CASE("a tight state budget aborts the product walk") {
    Limits t;
    t.state_cap = 1;
    CHECK_THROWS_AS(containment(V("x{a*}(a+b)*"), V("x{(a+b)*}"), t), resource_error);
}

TEST_CASE("splitter disjointness with an overlap witness") {
    Verdict v = splitter_disjoint(overlap_splitter());
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "abb");
    CHECK(v.witness->tuple == one("x", Span{1, 3}));
    CHECK(v.witness->split == Span{2, 4});
    // replay: both splits are real outputs and they overlap
    SpanRelation out = brute_eval(overlap_splitter(), "abb");
    CHECK(out.count(one("x", Span{1, 3})) == 1);
    CHECK(out.count(one("x", Span{2, 4})) == 1);
    CHECK(spans_overlap(Span{1, 3}, Span{2, 4}));

    CHECK(splitter_disjoint(whole3_splitter()).answer == Answer::Yes);
    CHECK(splitter_disjoint(char_splitter()).answer == Answer::Yes);
    CHECK(splitter_disjoint(V("x{(a+b)*}")).answer == Answer::Yes);
}

TEST_CASE("an empty split overlaps a window it sits inside") {
    Verdict v = splitter_disjoint(V("x{<e>} (a+b)++ + x{(a+b)++}"));
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "a");
    CHECK(v.witness->tuple == one("x", Span{1, 1}));
    CHECK(v.witness->split == Span{1, 2});

    // two empty splits at distinct positions never overlap
    CHECK(splitter_disjoint(V("x{<e>} (a+b)*")).answer == Answer::Yes);
}

TEST_CASE("disjointness needs a unary splitter") {
    CHECK_THROWS_AS(splitter_disjoint(V("x{a} y{b}")), domain_error);
    CHECK_THROWS_AS(splitter_disjoint(V("(a+b)*")), domain_error);
}

TEST_CASE("cover holds when every tuple fits a split") {
    CHECK(cover_condition_general(doc_spanner(), overlap_splitter()).answer ==
          Answer::Yes);

    Verdict v = cover_condition_general(V("y{(a+b)(a+b)(a+b)}"), overlap_splitter());
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "aaa");
    CHECK(v.witness->tuple == one("y", Span{1, 4}));
    // replay: the tuple exists and no split of the witness document holds it
    CHECK(brute_eval(V("y{(a+b)(a+b)(a+b)}"), "aaa").count(v.witness->tuple) == 1);
    for (const auto& t : brute_eval(overlap_splitter(), "aaa"))
        CHECK_FALSE(span_contains(t.begin()->second, Span{1, 4}));
}

TEST_CASE("the polynomial cover route agrees with the general one") {
    // certified instances with disjoint splitters
    std::vector<std::pair<Vsa, Vsa>> cases = {
        {normalize(doc_spanner()), normalize(whole3_splitter())},
        {normalize(doc_spanner()), normalize(char_splitter())},
        {normalize(V("y{(a+b)(a+b)}")), normalize(char_splitter())},
        {normalize(V("(a+b)* y{a} (a+b)*")), normalize(char_splitter())},
    };
    for (const auto& [p, s] : cases) {
        Verdict g = cover_condition_general(p, s);
        Verdict q = cover_condition_ptime(p, s);
        CHECK(g.answer == q.answer);
        if (q.answer == Answer::No) {
            REQUIRE(q.witness.has_value());
            // replay the polynomial witness against the naive route
            const auto& w = *q.witness;
            CHECK(brute_eval(p, w.document).count(w.tuple) == 1);
            for (const auto& t : brute_eval(s, w.document))
                CHECK_FALSE(span_contains(t.begin()->second,
                                          w.tuple.begin()->second));
        }
    }
}

TEST_CASE("the polynomial cover route gates its preconditions") {
    // raw compilation is not certified
    CHECK_THROWS_AS(cover_condition_ptime(doc_spanner(), normalize(whole3_splitter())),
                    domain_error);
    // certified but overlapping splitter
    CHECK_THROWS_AS(cover_condition_ptime(normalize(doc_spanner()),
                                          normalize(overlap_splitter())),
                    domain_error);
}

TEST_CASE("composition construct matches the literal composition") {
    Vsa s = overlap_splitter();
    for (const char* ps : {"a y{b}", "y{b} b", "y{b}", "a y{b} b"}) {
        Vsa c = compose_construct(V(ps), s);
        for (const auto& d : all_docs("ab", 4)) {
            INFO("ps " << ps << " doc '" << d << "'");
            CHECK(evaluate(c, d) == brute_compose(V(ps), s, d));
        }
    }
    Vsa c2 = compose_construct(V("a y{b}"), whole3_splitter());
    for (const auto& d : all_docs("ab", 4))
        CHECK(evaluate(c2, d) == brute_compose(V("a y{b}"), whole3_splitter(), d));
}

TEST_CASE("composition requires a unary splitter on fresh variables") {
    CHECK_THROWS_AS(compose_construct(V("x{a}"), V("x{(a+b)*}")), domain_error);
    CHECK_THROWS_AS(compose_construct(V("y{a}"), V("x{a} y{b}")), domain_error);
    CHECK_THROWS_AS(compose_construct(V("y{a}"), V("(a+b)*")), domain_error);
}

TEST_CASE("split-correctness of the running example") {
    Vsa p = doc_spanner();
    Vsa s = overlap_splitter();
    CHECK(split_correct(p, V("a y{b}"), s).answer == Answer::Yes);
    CHECK(split_correct(p, V("y{b} b"), s).answer == Answer::Yes);

    Verdict v = split_correct(p, V("y{b}"), s);
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "abb");
    CHECK(v.witness->tuple == one("y", Span{2, 3}));
    CHECK(v.witness->side == "lhs");
    // replay: p outputs the tuple, the composition does not
    CHECK(brute_eval(p, "abb").count(v.witness->tuple) == 1);
    CHECK(brute_compose(V("y{b}"), s, "abb").count(v.witness->tuple) == 0);
}

TEST_CASE("evaluating the composition equals the running example") {
    Vsa composed = compose_construct(V("a y{b}"), overlap_splitter());
    CHECK(evaluate(composed, "abb") == rel({one("y", Span{2, 3})}));
    CHECK(evaluate(doc_spanner(), "abb") == rel({one("y", Span{2, 3})}));
}

TEST_CASE("the polynomial split-correctness route agrees with the general one") {
    Vsa p = normalize(doc_spanner());
    Vsa s = normalize(whole3_splitter());
    for (const char* ps : {"a y{b} b", "a y{b}", "y{b}"}) {
        Vsa w = normalize(V(ps));
        Verdict g = split_correct(p, w, s);
        Verdict q = split_correct_ptime(p, w, s);
        INFO("window spanner " << ps);
        CHECK(g.answer == q.answer);
        if (q.answer == Answer::No) {
            REQUIRE(q.witness.has_value());
            SpanRelation lhs = brute_eval(p, q.witness->document);
            SpanRelation rhs = brute_compose(w, s, q.witness->document);
            CHECK(lhs != rhs);
        }
    }
}

TEST_CASE("the polynomial split-correctness route gates its preconditions") {
    Vsa p = normalize(doc_spanner());
    Vsa w = normalize(V("a y{b}"));
    CHECK_THROWS_AS(split_correct_ptime(p, w, normalize(overlap_splitter())),
                    domain_error);
    CHECK_THROWS_AS(split_correct_ptime(doc_spanner(), w, normalize(whole3_splitter())),
                    domain_error);
    CHECK_THROWS_AS(split_correct_ptime(p, V("y{a}b"), normalize(whole3_splitter())),
                    domain_error);
}

TEST_CASE("canonical window spanner of the running example") {
    Vsa p = doc_spanner();
    Vsa s = overlap_splitter();
    CHECK_THROWS_AS(canonical_split_spanner(p, s), domain_error);

    Vsa can = canonical_split_spanner(p, s, true);
    CHECK(evaluate(can, "ab") == rel({one("y", Span{2, 3})}));
    CHECK(evaluate(can, "bb") == rel({one("y", Span{1, 2})}));
    CHECK(evaluate(can, "abb").empty());

    // composing it back recovers exactly the spanner's own output
    Vsa composed = compose_construct(can, s);
    CHECK(evaluate(composed, "abb") == rel({one("y", Span{2, 3})}));
    for (const auto& d : all_docs("ab", 4))
        CHECK(evaluate(composed, d) == evaluate(p, d));
}

TEST_CASE("splittable returns the canonical witness on yes") {
    SplittableResult r = splittable(doc_spanner(), whole3_splitter());
    CHECK(r.verdict.answer == Answer::Yes);
    REQUIRE(r.canonical.has_value());
    CHECK(split_correct(doc_spanner(), *r.canonical, whole3_splitter()).answer ==
          Answer::Yes);
}

TEST_CASE("splittable refutes with an uncoverable tuple") {
    SplittableResult r = splittable(V("y{(a+b)(a+b)}"), char_splitter());
    CHECK(r.verdict.answer == Answer::No);
    CHECK_FALSE(r.canonical.has_value());
    REQUIRE(r.verdict.witness.has_value());
    CHECK(r.verdict.witness->document == "aa");
    CHECK(r.verdict.witness->tuple == one("y", Span{1, 3}));
}

TEST_CASE("splittable rejects overlapping splitters outright") {
    CHECK_THROWS_WITH(
        splittable(doc_spanner(), overlap_splitter()),
        "splittability requires a disjoint splitter; no decision procedure is known "
        "otherwise");
}

TEST_CASE("a fixed split spanner does not survive wider windows") {
    Vsa p = V(".* y{a} .*");
    Vsa ps = V("y{a}");
    Vsa s1 = V(".* x{.} .*");
    Vsa s2 = V(".* x{..} .* + x{.}");
    CHECK(self_splittable(p, s1).answer == Answer::Yes);
    CHECK(split_correct(p, ps, s1).answer == Answer::Yes);

    // the canonical spanner adapts to the two-character windows, the
    // one-character spanner ps does not
    CHECK(self_splittable(p, s2).answer == Answer::Yes);
    Verdict v = split_correct(p, ps, s2);
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "aa");
    CHECK(v.witness->tuple == one("y", Span{2, 3}));
    CHECK(v.witness->side == "lhs");
    // replay: p outputs the tuple, the composition misses it
    CHECK(brute_eval(p, "aa").count(v.witness->tuple) == 1);
    CHECK(brute_compose(ps, s2, "aa").count(v.witness->tuple) == 0);
}

TEST_CASE("the polynomial self-split route agrees on certified instances") {
    Vsa p = normalize(V(".* y{a} .*"));
    Vsa s1 = normalize(V(".* x{.} .*"));
    CHECK(self_splittable_ptime(p, s1).answer == Answer::Yes);
    CHECK(self_splittable(p, s1).answer == Answer::Yes);

    Vsa p2 = normalize(V("y{(a+b)(a+b)}"));
    Vsa sc = normalize(char_splitter());
    CHECK(self_splittable_ptime(p2, sc).answer == Answer::No);
    CHECK(self_splittable(p2, sc).answer == Answer::No);
}

TEST_CASE("containment gadgets track union universality") {
    Nfa all{1, 2, {0}, {0}, {{0, 0, 0}, {0, 1, 0}}};
    Nfa none{1, 2, {0}, {}, {{0, 0, 0}, {0, 1, 0}}};
    Nfa even{2, 2, {0}, {0}, {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}}};
    Nfa odd{2, 2, {0}, {1}, {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}}};
    std::vector<std::vector<Nfa>> families = {
        {all}, {none}, {even}, {odd}, {even, odd}, {none, even}, {all, none}};
    for (size_t i = 0; i < families.size(); i++) {
        INFO("family " << i);
        bool expect = union_universal(families[i], 2);
        GadgetPair g = gadget_containment(families[i], "ab");
        CHECK((containment(g.lhs, g.rhs).answer == Answer::Yes) == expect);
        GadgetTriple t = gadget_split(families[i], "ab");
        CHECK((split_correct(t.p, t.ps, t.s).answer == Answer::Yes) == expect);
    }
}

TEST_CASE("boolean splittability gadget tracks language containment") {
    Formula astar = parse_formula("a*", "ab");
    Formula sigstar = parse_formula("(a+b)*", "ab");
    GadgetTriple g1 = gadget_boolean_splittable(astar, sigstar, "ab");
    CHECK(split_correct(g1.p, g1.ps, g1.s).answer == Answer::Yes);
    GadgetTriple g2 = gadget_boolean_splittable(sigstar, astar, "ab");
    CHECK(split_correct(g2.p, g2.ps, g2.s).answer == Answer::No);
}

TEST_CASE("self-split gadget tracks language containment") {
    Formula astar = parse_formula("a*", "ab");
    Formula sigstar = parse_formula("(a+b)*", "ab");
    GadgetTriple g1 = gadget_selfsplit(astar, sigstar, "ab", 'c');
    CHECK(self_splittable(g1.p, g1.s).answer == Answer::Yes);

    GadgetTriple g2 = gadget_selfsplit(sigstar, astar, "ab", 'c');
    Verdict v = self_splittable(g2.p, g2.s);
    CHECK(v.answer == Answer::No);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->document == "cb");
    CHECK(v.witness->side == "rhs");
    // replay: the composition invents a tuple on a document p rejects
    CHECK(brute_eval(g2.p, "cb").empty());
    CHECK(brute_compose(g2.p, g2.s, "cb").count(v.witness->tuple) == 1);
}
