#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "rdlab/monodromy.hpp"

using namespace rdlab;

namespace {

// independent straight-line reimplementation used as the count oracle:
// top-down memoized recursion with factorial binomials
mpz_class binom_fact(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    mpz_class num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= n - i;
        den *= i + 1;
    }
    return num / den;
}

mpz_class nd_oracle(int d, std::map<int, mpz_class>& memo) {
    if (d == 1) return 1;
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    mpz_class acc = 0;
    for (int a = 1; a < d; ++a) {
        int b = d - a;
        mpz_class term = nd_oracle(a, memo) * nd_oracle(b, memo);
        term *= mpz_class(a) * a * b * b * binom_fact(3 * d - 4, 3 * a - 2) -
                mpz_class(a) * a * a * b * binom_fact(3 * d - 4, 3 * a - 1);
        acc += term;
    }
    memo[d] = acc;
    return acc;
}

}  // namespace

TEST_CASE("kontsevich: classical values and the degree-8 oracle check") {
    CHECK(kontsevich_nd(1) == 1);
    CHECK(kontsevich_nd(2) == 1);
    CHECK(kontsevich_nd(3) == 12);
    CHECK(kontsevich_nd(4) == 620);
    CHECK(kontsevich_nd(5) == 87304);
    std::map<int, mpz_class> memo;
    for (int d = 1; d <= 8; ++d) CHECK(kontsevich_nd(d) == nd_oracle(d, memo));
    for (int d = 1; d <= 12; ++d) CHECK(kontsevich_nd(d) > 0);
    CHECK_THROWS_AS(kontsevich_nd(0), invalid_input);
}

TEST_CASE("track: unchanged on a constant path; square-root loop swaps sheets") {
    ParametricSystem sys;
    sys.unknowns = 1;
    sys.parameters = 1;
    sys.fiber_degree = 2;
    MPolyC x = MPolyC::var(2, 0), s = MPolyC::var(2, 1);
    sys.equations = {x * x - s};
    std::vector<std::vector<CD>> fiber{{CD(1, 0)}, {CD(-1, 0)}};

    auto constant = track_segment(sys, fiber, {CD(1, 0)}, {CD(1, 0)});
    CHECK(std::abs(constant[0].x[0] - CD(1, 0)) < 1e-12);
    CHECK(std::abs(constant[1].x[0] + CD(1, 0)) < 1e-12);

    auto moved = track_segment(sys, fiber, {CD(1, 0)}, {CD(4, 0)});
    CHECK(std::abs(moved[0].x[0] - CD(2, 0)) < 1e-10);
    CHECK(std::abs(moved[1].x[0] + CD(2, 0)) < 1e-10);

    // a loop around s = 0 swaps the two square roots
    std::vector<std::vector<CD>> wps{{CD(0, 1)}, {CD(-1, 0)}, {CD(0, -1)}, {CD(1, 0)}};
    auto perm = track_loop(sys, {CD(1, 0)}, fiber, wps, {});
    REQUIRE(perm.has_value());
    CHECK((*perm)(0) == 1);
    CHECK((*perm)(1) == 0);
}

TEST_CASE("fiber degrees of the families") {
    CHECK(flex_system(3).fiber_degree == 9);
    CHECK(flex_system(4).fiber_degree == 24);
    CHECK_THROWS_AS(flex_system(2), invalid_input);
    CHECK(bezout_system(2, 2).fiber_degree == 4);
    CHECK(bezout_system(2, 3).fiber_degree == 6);
    CHECK(bezout_system(1, 1).fiber_degree == 1);
    CHECK(lines27_system().fiber_degree == 27);
}

TEST_CASE("bezout (1,1): a single sheet with trivial monodromy") {
    auto fam = bezout_family(1, 1, 0);
    MonodromyOptions opt;
    opt.max_loops = 5;
    opt.stall_limit = 3;
    auto cert = monodromy_group(fam, opt);
    CHECK(cert.order == 1);
    CHECK(cert.solvable);
}

TEST_CASE("bezout (2,3): full symmetric group of order 720 within 100 loops") {
    auto fam = bezout_family(2, 3, 0);
    MonodromyOptions opt;
    opt.max_loops = 100;
    opt.target_order = 720;
    auto cert = monodromy_group(fam, opt);
    CHECK(cert.order == 720);
    CHECK_FALSE(cert.solvable);
    CHECK(static_cast<int>(cert.loops.size()) <= 100);
}

TEST_CASE("loop permutations compose and invert consistently") {
    auto fam = bezout_family(2, 2, 1);
    MonodromyOptions opt;
    opt.max_loops = 12;
    opt.stall_limit = 6;
    auto cert = monodromy_group(fam, opt);
    REQUIRE(cert.loops.size() >= 2);

    // compose: gamma1 then gamma2 tracks to the product permutation
    const auto& l1 = cert.loops[0];
    const auto& l2 = cert.loops[1];
    std::vector<std::vector<CD>> joined = l1.waypoints;
    joined.insert(joined.end(), l2.waypoints.begin(), l2.waypoints.end());
    auto combined = track_loop(fam.system, fam.basepoint, fam.fiber, joined, opt.track);
    REQUIRE(combined.has_value());
    CHECK(*combined == l2.permutation * l1.permutation);

    // inverse loop gives the inverse permutation
    std::vector<std::vector<CD>> rev(l1.waypoints.rbegin(), l1.waypoints.rend());
    rev.erase(rev.begin());  // drop the duplicated basepoint, then close
    rev.push_back(fam.basepoint);
    auto inverse = track_loop(fam.system, fam.basepoint, fam.fiber, rev, opt.track);
    REQUIRE(inverse.has_value());
    CHECK(*inverse == l1.permutation.inverse());
}

TEST_CASE("flex d=3: nine sheets, solvable monodromy") {
    auto fam = flex_family(3, 0);
    REQUIRE(fam.fiber.size() == 9);
    MonodromyOptions opt;
    opt.max_loops = 80;
    opt.stall_limit = 20;
    auto cert = monodromy_group(fam, opt);
    CHECK(cert.solvable);
    CHECK(cert.order > 1);  // certificate reports the order it found
}

TEST_CASE("certificates replay byte-for-byte deterministically") {
    auto f1 = bezout_family(2, 2, 7);
    auto f2 = bezout_family(2, 2, 7);
    MonodromyOptions opt;
    opt.seed = 3;
    opt.max_loops = 10;
    opt.stall_limit = 5;
    auto c1 = monodromy_group(f1, opt);
    auto c2 = monodromy_group(f2, opt);
    REQUIRE(c1.loops.size() == c2.loops.size());
    CHECK(c1.order == c2.order);
    for (std::size_t i = 0; i < c1.loops.size(); ++i) {
        CHECK(c1.loops[i].permutation == c2.loops[i].permutation);
        for (std::size_t w = 0; w < c1.loops[i].waypoints.size(); ++w)
            for (std::size_t k = 0; k < c1.loops[i].waypoints[w].size(); ++k)
                CHECK(c1.loops[i].waypoints[w][k] == c2.loops[i].waypoints[w][k]);
    }
}
