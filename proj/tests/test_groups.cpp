#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rdlab/groups.hpp"

using namespace rdlab;

namespace {

PermGroup sym(int n) {
    std::vector<std::vector<int>> cyc;
    for (int i = 0; i + 1 < n; ++i) cyc.push_back({i, i + 1});
    std::vector<Perm> gens;
    for (auto& c : cyc) gens.push_back(Perm::from_cycles(n, {c}));
    return PermGroup(n, gens);
}

PermGroup alt(int n) {
    std::vector<Perm> gens;
    for (int i = 0; i + 2 < n; ++i) gens.push_back(Perm::from_cycles(n, {{i, i + 1, i + 2}}));
    return PermGroup(n, gens);
}

PermGroup cyclic(int n) {
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = i;
    return PermGroup(n, {Perm::from_cycles(n, {c})});
}

// brute-force closure oracle: multiply elements until closed (small groups)
std::set<Perm> enumerate_group(const std::vector<Perm>& gens, int degree, std::size_t cap) {
    std::set<Perm> all{Perm::identity(degree)};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Perm> cur(all.begin(), all.end());
        for (const auto& a : cur)
            for (const auto& g : gens) {
                Perm c = a * g;
                if (all.insert(c).second) {
                    grew = true;
                    if (all.size() > cap) throw std::runtime_error("cap");
                }
            }
    }
    return all;
}

std::map<std::string, int> census(const std::vector<std::string>& v) {
    std::map<std::string, int> m;
    for (const auto& s : v) m[s]++;
    return m;
}

}  // namespace

TEST_CASE("order: S5 from a transposition and a 5-cycle") {
    PermGroup g(5, {Perm::from_cycles(5, {{0, 1}}), Perm::from_cycles(5, {{0, 1, 2, 3, 4}})});
    CHECK(g.order() == 120);
}

TEST_CASE("order: trivial group") {
    PermGroup g(4, {});
    CHECK(g.order() == 1);
    CHECK(g.contains(Perm::identity(4)));
}

TEST_CASE("order: combinatorial W(E6) has order 51840") {
    PermGroup w = we6_combinatorial();
    CHECK(w.order() == 51840);
}

TEST_CASE("contains: parity in A5") {
    PermGroup a5 = alt(5);
    CHECK(a5.order() == 60);
    CHECK(a5.contains(Perm::from_cycles(5, {{0, 1, 2}})));
    CHECK_FALSE(a5.contains(Perm::from_cycles(5, {{0, 1}})));
    CHECK(a5.contains(Perm::identity(5)));
    CHECK_THROWS_AS(a5.contains(Perm::identity(6)), invalid_input);
}

TEST_CASE("contains agrees with explicit enumeration for small groups") {
    for (int n : {4, 5, 6}) {
        PermGroup g = (n == 6) ? alt(6) : sym(n);
        auto all = enumerate_group(g.generators(), g.degree(), 6000);
        CHECK(g.order() == all.size());
        // every enumerated element is a member; a few non-members are not
        int step = std::max<int>(1, static_cast<int>(all.size() / 100));
        int i = 0;
        for (const auto& e : all) {
            if (i++ % step == 0) CHECK(g.contains(e));
        }
        if (n == 6) {
            CHECK_FALSE(g.contains(Perm::from_cycles(6, {{0, 1}})));
        }
    }
}

TEST_CASE("derived series: textbook ladders") {
    auto s4 = derived_series(sym(4));
    REQUIRE(s4.orders.size() == 4);
    CHECK(s4.orders[0] == 24);
    CHECK(s4.orders[1] == 12);
    CHECK(s4.orders[2] == 4);
    CHECK(s4.orders[3] == 1);
    CHECK(s4.solvable);

    auto a5 = derived_series(alt(5));
    REQUIRE(a5.orders.size() == 2);
    CHECK(a5.orders[0] == 60);
    CHECK(a5.orders[1] == 60);
    CHECK_FALSE(a5.solvable);

    auto c6 = derived_series(cyclic(6));
    CHECK(c6.orders.front() == 6);
    CHECK(c6.orders.back() == 1);
    CHECK(c6.solvable);
}

TEST_CASE("derived series: strictly decreasing with normal terms") {
    for (auto g : {sym(4), sym(5), we6_combinatorial()}) {
        auto ds = derived_series(g);
        for (std::size_t i = 0; i + 2 < ds.orders.size(); ++i) CHECK(ds.orders[i] > ds.orders[i + 1]);
        // spot-check normality of G' in G by conjugating generators
        PermGroup d = derived_subgroup(g);
        for (const auto& s : g.generators())
            for (const auto& x : d.generators()) CHECK(d.contains(s * x * s.inverse()));
    }
}

TEST_CASE("normal_closure: transposition in S_n gives S_n") {
    for (int n : {3, 5, 7}) {
        PermGroup g = sym(n);
        PermGroup cl = normal_closure(g, {Perm::from_cycles(n, {{0, 1}})});
        CHECK(cl.order() == g.order());
    }
}

TEST_CASE("normal_closure: 3-cycle in S5 gives A5 (checked against brute force)") {
    PermGroup s5 = sym(5);
    PermGroup cl = normal_closure(s5, {Perm::from_cycles(5, {{0, 1, 2}})});
    CHECK(cl.order() == 60);
    // brute-force oracle: conjugate-and-multiply closure over all 120 elements
    auto all = enumerate_group(s5.generators(), 5, 200);
    std::set<Perm> closure{Perm::from_cycles(5, {{0, 1, 2}})};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Perm> cur(closure.begin(), closure.end());
        for (const auto& g : all)
            for (const auto& x : cur)
                if (closure.insert(g * x * g.inverse()).second) grew = true;
        for (const auto& a : cur)
            for (const auto& b : cur)
                if (closure.insert(a * b).second) grew = true;
    }
    CHECK(closure.size() == 60);
    for (const auto& e : closure) CHECK(cl.contains(e));
}

TEST_CASE("normal_closure: identity closure is trivial; foreign elements rejected") {
    PermGroup s4 = sym(4);
    CHECK(normal_closure(s4, {Perm::identity(4)}).order() == 1);
    PermGroup a4 = alt(4);
    CHECK_THROWS_AS(normal_closure(a4, {Perm::from_cycles(4, {{0, 1}})}), invalid_input);
}

TEST_CASE("composition_factors: S6 = {C2, A6}") {
    auto f = census(composition_factors(sym(6)));
    CHECK(f["C2"] == 1);
    CHECK(f["A6"] == 1);
    CHECK(f.size() == 2);
}

TEST_CASE("composition_factors: W(E6) = {C2, W(E6)+} with simple derived part") {
    PermGroup w = we6_combinatorial();
    auto f = census(composition_factors(w));
    CHECK(f["C2"] == 1);
    CHECK(f["W(E6)+"] == 1);
    CHECK(f.size() == 2);

    PermGroup plus = derived_subgroup(w);
    CHECK(plus.order() == 25920);
    CHECK(sampled_simple(plus, 0));
}

TEST_CASE("composition_factors: abelian C12 = {C2, C2, C3}") {
    auto f = census(composition_factors(cyclic(12)));
    CHECK(f["C2"] == 2);
    CHECK(f["C3"] == 1);
}

TEST_CASE("composition_factors: factor orders multiply to the group order") {
    auto label_order = [](const std::string& s) -> long {
        if (s[0] == 'C') return std::stol(s.substr(1));
        if (s == "A5") return 60;
        if (s == "A6") return 360;
        if (s == "A7") return 2520;
        if (s == "A8") return 20160;
        if (s == "W(E6)+") return 25920;
        if (s == "PSL(2,7)") return 168;
        return -1;
    };
    for (auto g : {sym(4), sym(5), sym(6), alt(5), cyclic(12), we6_combinatorial()}) {
        auto f = composition_factors(g);
        mpz_class prod = 1;
        for (const auto& s : f) {
            long o = label_order(s);
            REQUIRE(o > 0);
            prod *= o;
        }
        CHECK(prod == g.order());
    }
}

TEST_CASE("order divides degree factorial") {
    for (auto g : {sym(5), alt(6), we6_combinatorial(), cyclic(12)}) {
        mpz_class f = 1;
        for (int i = 2; i <= g.degree(); ++i) f *= i;
        CHECK(mpz_divisible_p(f.get_mpz_t(), g.order().get_mpz_t()));
    }
}

TEST_CASE("schlafli labels: round trip and incidence sanity") {
    CHECK(schlafli_label_count() == 27);
    for (int i = 0; i < 27; ++i) CHECK(schlafli_label_index(schlafli_label_name(i)) == i);
    // each line meets exactly 10 others under the blow-up rules
    for (int i = 0; i < 27; ++i) {
        int deg = 0;
        for (int j = 0; j < 27; ++j)
            if (schlafli_adjacent(i, j)) ++deg;
        CHECK(deg == 10);
    }
    // the two rows of the standard double-six: a_i, b_i
    CHECK_FALSE(schlafli_adjacent(schlafli_label_index("a1"), schlafli_label_index("a2")));
    CHECK_FALSE(schlafli_adjacent(schlafli_label_index("a1"), schlafli_label_index("b1")));
    CHECK(schlafli_adjacent(schlafli_label_index("a1"), schlafli_label_index("b2")));
}

TEST_CASE("W(E6) generators preserve the incidence pattern") {
    PermGroup w = we6_combinatorial();
    for (const auto& g : w.generators())
        for (int i = 0; i < 27; ++i)
            for (int j = 0; j < 27; ++j)
                CHECK(schlafli_adjacent(i, j) == schlafli_adjacent(g(i), g(j)));
}

TEST_CASE("random elements are members and reproducible") {
    PermGroup w = we6_combinatorial();
    Rng r1(9), r2(9);
    for (int i = 0; i < 10; ++i) {
        Perm a = w.random_element(r1);
        Perm b = w.random_element(r2);
        CHECK(a == b);
        CHECK(w.contains(a));
    }
}
