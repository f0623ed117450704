#include <catch2/catch_amalgamated.hpp>

#include "spanners/nfa.hpp"

#include "spanners/core.hpp"

using namespace spanners;

namespace {

Nfa make(int n, int n_syms, std::vector<int> initials, std::vector<int> finals,
         std::vector<std::array<int, 3>> trans) {
    Nfa a;
    a.n = n;
    a.n_syms = n_syms;
    a.initials = std::move(initials);
    a.finals = std::move(finals);
    a.trans = std::move(trans);
    return a;
}

// words over {0,1} ending in 0, with a unique accepting run
Nfa ends_in_zero() {
    return make(2, 2, {0}, {1}, {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}});
}

Nfa all_words() { return make(1, 2, {0}, {0}, {{0, 0, 0}, {0, 1, 0}}); }

}  // namespace

TEST_CASE("acceptance by direct simulation") {
    Nfa a = ends_in_zero();
    CHECK(nfa_accepts(a, {0}));
    CHECK(nfa_accepts(a, {1, 0}));
    CHECK(nfa_accepts(a, {0, 1, 0}));
    CHECK_FALSE(nfa_accepts(a, {}));
    CHECK_FALSE(nfa_accepts(a, {1}));
    CHECK_FALSE(nfa_accepts(a, {0, 1}));
}

TEST_CASE("trimming keeps exactly the useful states") {
    // state 2 unreachable, state 3 reachable but dead
    Nfa a = make(4, 2, {0}, {1},
                 {{0, 0, 1}, {2, 0, 1}, {0, 1, 3}, {3, 1, 3}});
    Nfa t = trim_nfa(a);
    CHECK(t.n == 2);
    CHECK(t.trans.size() == 1);
    CHECK(nfa_accepts(t, {0}));
    CHECK_FALSE(nfa_accepts(t, {1}));
}

TEST_CASE("an empty language trims to nothing") {
    Nfa a = make(2, 1, {0}, {}, {{0, 0, 1}});
    Nfa t = trim_nfa(a);
    CHECK(t.n == 0);
    CHECK(nfa_empty(a));
    CHECK_FALSE(nfa_empty(all_words()));
}

TEST_CASE("shortest accepted word is found by length") {
    CHECK(shortest_word(all_words()) == std::vector<int>{});
    CHECK(shortest_word(ends_in_zero()) == std::vector<int>{0});
    Nfa dead = make(1, 1, {0}, {}, {});
    CHECK_FALSE(shortest_word(dead).has_value());
}

TEST_CASE("eps edges are inlined away") {
    // 0 -eps-> 1 -sym0-> 2
    Nfa a = make(3, 1, {0}, {2}, {{1, 0, 2}});
    Nfa b = eliminate_eps_nfa(a, {{0, 1}});
    CHECK(nfa_accepts(b, {0}));
    CHECK_FALSE(nfa_accepts(b, {}));

    // eps into a final state makes the source accepting
    Nfa c = make(2, 1, {0}, {1}, {});
    Nfa d = eliminate_eps_nfa(c, {{0, 1}});
    CHECK(nfa_accepts(d, {}));
}

TEST_CASE("subset construction preserves the language") {
    Nfa d = determinize_nfa(ends_in_zero(), 100);
    for (auto w : std::vector<std::vector<int>>{
             {}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 1, 0}})
        CHECK(nfa_accepts(d, w) == nfa_accepts(ends_in_zero(), w));
    CHECK(d.initials.size() == 1);
}

TEST_CASE("subset construction respects the state budget") {
    CHECK_THROWS_AS(determinize_nfa(ends_in_zero(), 1), resource_error);
}

TEST_CASE("ambiguity detection") {
    CHECK(nfa_unambiguous(ends_in_zero(), 100000));
    CHECK(nfa_unambiguous(all_words(), 100000));
    // two initial-and-final states give the empty word two runs
    Nfa two = make(2, 1, {0, 1}, {0, 1}, {});
    CHECK_FALSE(nfa_unambiguous(two, 100000));
}

TEST_CASE("counting containment decides inclusion both ways") {
    ContainResult r1 = ufa_contained(ends_in_zero(), all_words(), 1000000);
    CHECK(r1.contained);
    CHECK(r1.counted);

    ContainResult r2 = ufa_contained(all_words(), ends_in_zero(), 1000000);
    CHECK_FALSE(r2.contained);
    REQUIRE(r2.witness.has_value());
    CHECK(nfa_accepts(all_words(), *r2.witness));
    CHECK_FALSE(nfa_accepts(ends_in_zero(), *r2.witness));
}

TEST_CASE("counting containment refuses ambiguous input") {
    Nfa two = make(2, 1, {0, 1}, {0, 1}, {});
    CHECK_THROWS_AS(ufa_contained(two, two, 1000000), domain_error);
}

TEST_CASE("general containment falls back past ambiguity") {
    Nfa two = make(2, 2, {0, 1}, {0, 1}, {{0, 0, 0}, {1, 0, 1}, {1, 1, 1}});
    // L(two) = words over {0} union words over {0,1}; contains all_words
    ContainResult r = nfa_contained(all_words(), two, 10000);
    CHECK(r.contained);

    ContainResult r2 = nfa_contained(two, ends_in_zero(), 10000);
    CHECK_FALSE(r2.contained);
    REQUIRE(r2.witness.has_value());
    CHECK(nfa_accepts(two, *r2.witness));
    CHECK_FALSE(nfa_accepts(ends_in_zero(), *r2.witness));
}
