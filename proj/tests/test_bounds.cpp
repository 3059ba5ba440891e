#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "rdlab/bounds.hpp"

using namespace rdlab;

namespace {
struct CatalogueGuard {
    CatalogueGuard() { set_catalogue_path(std::string(TEST_DATA_DIR) + "/rd_catalogue.json"); }
} guard;
}  // namespace

TEST_CASE("bring_hamilton_bound: schedule values") {
    CHECK(bring_hamilton_bound(2) == 1);
    CHECK(bring_hamilton_bound(5) == 1);
    CHECK(bring_hamilton_bound(6) == 2);
    CHECK(bring_hamilton_bound(9) == 5);
    CHECK_THROWS_AS(bring_hamilton_bound(1), invalid_input);
}

TEST_CASE("brauer_bound: factorial thresholds") {
    CHECK(brauer_bound(25) == 20);   // r* = 5 since 4!+1 = 25
    CHECK(brauer_bound(24) == 20);   // r* = 4 since 3!+1 = 7 <= 24 < 25
    CHECK(brauer_bound(121) == 115); // r* = 6 since 5!+1 = 121
    CHECK(brauer_bound(4) == 1);     // r* = 3 since 2!+1 = 3 <= 4
    CHECK_THROWS_AS(brauer_bound(3), invalid_input);
}

TEST_CASE("best_classical_bound: low-degree table and a big-n Brauer win") {
    int want[] = {1, 2, 3, 4, 5};
    for (int n = 5; n <= 9; ++n) {
        auto rep = best_classical_bound(n);
        CHECK(rep.bound == want[n - 5]);
        CHECK(rep.provenance.front().find("B") == 0);  // Bring... in all of these
    }
    auto big = best_classical_bound(1000);
    CHECK(big.bound == 993);  // r* = 7 since 6!+1 = 721 <= 1000
    CHECK(big.provenance.front().find("Brauer") != std::string::npos);
}

TEST_CASE("hamilton_H: tabulated thresholds") {
    CHECK(hamilton_H(4) == 5);
    CHECK(hamilton_H(5) == 11);
    CHECK(hamilton_H(6) == 47);
    CHECK(hamilton_H(7) == 923);
    CHECK(hamilton_H(8) == 409619);
    CHECK(hamilton_H(9) == 83763206255LL);
    CHECK_THROWS_AS(hamilton_H(3), unsupported);
    CHECK_THROWS_AS(hamilton_H(10), unsupported);
}

TEST_CASE("best_classical_bound is nondecreasing up to 10^4") {
    int prev = best_classical_bound(2).bound;
    for (int n = 3; n <= 10000; ++n) {
        int cur = best_classical_bound(n).bound;
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("brauer first beats bring-hamilton exactly at n = 25") {
    for (int n = 4; n <= 10000; ++n) {
        bool brauer_wins = brauer_bound(n) < bring_hamilton_bound(n);
        CHECK(brauer_wins == (n >= 25));
    }
}

TEST_CASE("group_rd_bound via labels: spec anchor values") {
    CHECK(group_rd_bound_label("S6").bound == 2);
    CHECK(group_rd_bound_label("S7").bound == 3);
    CHECK(group_rd_bound_label("S8").bound == 4);
    CHECK(group_rd_bound_label("W(E6)").bound == 3);
    CHECK(group_rd_bound_label("W(E6)+").bound == 3);
    CHECK(group_rd_bound_label("W(D5)").bound == 1);
    CHECK(group_rd_bound_label("A5").bound == 1);
    CHECK(group_rd_bound_label("PSL(2,7)").bound == 1);
    CHECK(group_rd_bound_label("C12").bound == 1);
    CHECK(group_rd_bound_label("S4").bound == 1);  // solvable
}

TEST_CASE("group_rd_bound on permutation groups") {
    auto s6 = [] {
        std::vector<Perm> gens{Perm::from_cycles(6, {{0, 1}}), Perm::from_cycles(6, {{0, 1, 2, 3, 4, 5}})};
        return PermGroup(6, gens);
    }();
    CHECK(group_rd_bound(s6).bound == 2);
    CHECK(group_rd_bound(we6_combinatorial()).bound == 3);
    // any solvable group bounds at 1
    PermGroup c10(10, {Perm::from_cycles(10, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}})});
    auto rep = group_rd_bound(c10);
    CHECK(rep.bound == 1);
    CHECK(rep.provenance.size() >= 2);
}

TEST_CASE("group_rd_bound: unknown factors produce a named error") {
    // W(E7)+ is identified but carries no catalogue bound
    CHECK_THROWS_WITH_AS(group_rd_bound_label("W(E7)+"), doctest::Contains("W(E7)+"), invalid_input);
}

TEST_CASE("bound monotone along catalogued subgroup pairs") {
    std::pair<const char*, const char*> pairs[] = {
        {"A5", "S5"}, {"S5", "S6"}, {"A6", "S6"}, {"W(E6)+", "W(E6)"}, {"S6", "S7"}, {"W(D5)", "W(E6)"}};
    for (auto [h, g] : pairs)
        CHECK(group_rd_bound_label(h).bound <= group_rd_bound_label(g).bound);
}

TEST_CASE("corrupted catalogue file fails with a named entry") {
    std::string bad = "/tmp/rdlab_bad_catalogue.json";
    {
        std::ofstream out(bad);
        out << "{\"entries\": {\"cyclic\": {\"bound\": \"oops\"}}}";
    }
    set_catalogue_path(bad);
    CHECK_THROWS_WITH_AS(group_rd_bound_label("C2"), doctest::Contains("cyclic"), invalid_input);
    set_catalogue_path(std::string(TEST_DATA_DIR) + "/rd_catalogue.json");
    CHECK(group_rd_bound_label("C2").bound == 1);
}
