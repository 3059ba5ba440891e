#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rdlab/cubic_lines.hpp"

using namespace rdlab;

namespace {

bool same_line_set(const std::vector<ProjLine>& a, const std::vector<ProjLine>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        bool hit = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            if (projective_distance6(x.plucker, b[j].plucker) < tol) {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

std::array<RatPoint, 6> generic_points(Rng& rng) {
    std::array<RatPoint, 6> pts;
    for (auto& p : pts) {
        p[0] = Rat(1);
        p[1] = Rat(rng.next_int(-12, 12), rng.next_int(1, 5));
        p[2] = Rat(rng.next_int(-12, 12), rng.next_int(1, 5));
    }
    return pts;
}

}  // namespace

TEST_CASE("fermat cubic: the 27 closed-form lines are exactly the solver output") {
    CubicSurface s = fermat_cubic();
    auto cfg = lines_on_cubic(s, 0);
    REQUIRE(cfg.lines.size() == 27);

    // closed form: three families x_a = -w x_b, x_c = -w' x_d with w,w' cube
    // roots of unity and the fixed coordinate pairings
    std::vector<ProjLine> expect;
    const CD one(1, 0);
    std::array<CD, 3> omega;
    for (int k = 0; k < 3; ++k)
        omega[static_cast<std::size_t>(k)] = std::polar(1.0, 2 * 3.14159265358979323846 * k / 3);
    int pairing[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (auto& pr : pairing)
        for (const auto& w1 : omega)
            for (const auto& w2 : omega) {
                Vec4 a{}, b{};
                a[static_cast<std::size_t>(pr[0])] = -w1;
                a[static_cast<std::size_t>(pr[1])] = one;
                b[static_cast<std::size_t>(pr[2])] = -w2;
                b[static_cast<std::size_t>(pr[3])] = one;
                expect.push_back(line_through(a, b));
            }
    REQUIRE(expect.size() == 27);
    for (const auto& l : expect) CHECK(line_on_surface_residual(s, l) < 1e-12);
    CHECK(same_line_set(cfg.lines, expect, 1e-7));
}

TEST_CASE("clebsch cubic: 27 lines with valid incidence") {
    CubicSurface s = clebsch_cubic();
    auto cfg = lines_on_cubic(s, 0);
    CHECK(cfg.lines.size() == 27);
    for (const auto& l : cfg.lines) CHECK(line_on_surface_residual(s, l) < 1e-9);
}

TEST_CASE("random smooth cubic: 27 lines, 10-regular, srg complement") {
    Rng rng(11);
    CubicSurface s = random_smooth_cubic(rng);
    auto cfg = lines_on_cubic(s, 11);
    REQUIRE(cfg.lines.size() == 27);
    for (const auto& l : cfg.lines) {
        CHECK(line_on_surface_residual(s, l) < 1e-9);
        CHECK(plucker_relation_residual(l.plucker) < 1e-10);
    }
    // validate_configuration ran inside; exercise the counting here too
    for (std::size_t i = 0; i < 27; ++i) {
        int deg = 0;
        for (std::size_t j = 0; j < 27; ++j)
            if (cfg.adjacency[i][j]) ++deg;
        CHECK(deg == 10);
    }
}

TEST_CASE("pencil construction: degree-5 discriminant, 11 lines after one pass") {
    CubicSurface s = fermat_cubic();
    auto cfg = lines_on_cubic(s, 0);
    auto pr = pencil_lines(s, cfg.lines[0]);
    CHECK(pr.quintic.size() == 6);  // homogeneous binary form of degree exactly 5
    double qmax = 0;
    for (const auto& c : pr.quintic) qmax = std::max(qmax, std::abs(c));
    CHECK(qmax == doctest::Approx(1.0));
    CHECK(pr.lines.size() == 10);
    std::vector<ProjLine> first_pass = pr.lines;
    first_pass.push_back(cfg.lines[0]);
    std::set<int> matched;
    for (const auto& l : first_pass) {
        for (int j = 0; j < 27; ++j)
            if (projective_distance6(l.plucker, cfg.lines[static_cast<std::size_t>(j)].plucker) < 1e-7)
                matched.insert(j);
    }
    CHECK(matched.size() == 11);  // the pass yields 11 distinct lines of S
}

TEST_CASE("lines_from_one reproduces the direct solve on fermat and a random cubic") {
    CubicSurface fer = fermat_cubic();
    auto direct = lines_on_cubic(fer, 0);
    auto from_one = lines_from_one(fer, direct.lines[5]);
    CHECK(same_line_set(direct.lines, from_one.lines, 1e-7));

    Rng rng(23);
    CubicSurface s = random_smooth_cubic(rng);
    auto d2 = lines_on_cubic(s, 23);
    auto f2 = lines_from_one(s, d2.lines[0]);
    CHECK(same_line_set(d2.lines, f2.lines, 1e-7));
}

TEST_CASE("pencil rejects a line off the surface") {
    CubicSurface s = fermat_cubic();
    Vec4 a{CD(1, 0), CD(0, 0), CD(0, 0), CD(0.3, 0)};
    Vec4 b{CD(0, 0), CD(1, 0), CD(0.2, 0), CD(0, 0)};
    CHECK_THROWS_AS(pencil_lines(s, line_through(a, b)), invalid_input);
}

TEST_CASE("blowup: conic-through-six rejected") {
    // six points on the conic y z = x^2
    std::array<RatPoint, 6> pts;
    for (int i = 0; i < 6; ++i) {
        Rat t(i + 1);
        pts[static_cast<std::size_t>(i)] = {t, Rat(t * t), Rat(1)};
    }
    CHECK_THROWS_AS(blowup_cubic(pts), degenerate_input);
}

TEST_CASE("blowup: collinear triple rejected with names") {
    Rng rng(3);
    auto pts = generic_points(rng);
    pts[2] = {Rat(1), Rat(2), Rat(3)};
    pts[3] = {Rat(2), Rat(4), Rat(6)};  // projectively equal => collinear with anything
    CHECK_THROWS_AS(blowup_cubic(pts), degenerate_input);
}

TEST_CASE("blowup: labeled configuration matches the combinatorial rules") {
    Rng rng(3);
    auto pts = generic_points(rng);
    auto [surf, cfg] = blowup_cubic(pts);
    REQUIRE(cfg.lines.size() == 27);
    REQUIRE(cfg.labels.size() == 27);
    int mismatches = 0;
    for (int i = 0; i < 27; ++i)
        for (int j = 0; j < 27; ++j)
            if (cfg.adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] !=
                schlafli_adjacent(cfg.labels[static_cast<std::size_t>(i)], cfg.labels[static_cast<std::size_t>(j)]))
                ++mismatches;
    CHECK(mismatches == 0);
    // every line lies on the fitted implicit cubic
    for (const auto& l : cfg.lines) CHECK(line_on_surface_residual(surf, l) < 1e-7);
    // the labeled a/b rows form a double-six
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            bool meets = cfg.adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(6 + j)];
            CHECK(meets == (i != j));
        }
}

TEST_CASE("double sixes: 72 sixers and 36 pairs on several surfaces") {
    CubicSurface s = fermat_cubic();
    auto cfg = lines_on_cubic(s, 0);
    auto ds = double_sixes(cfg);
    CHECK(ds.sixers.size() == 72);
    CHECK(ds.pairs.size() == 36);
    for (const auto& six : ds.sixers)
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                CHECK_FALSE(cfg.adjacency[static_cast<std::size_t>(six[static_cast<std::size_t>(i)])]
                                         [static_cast<std::size_t>(six[static_cast<std::size_t>(j)])]);
}

TEST_CASE("pentahedral: clebsch at the unit point; degenerate coefficient tolerated") {
    auto c = pentahedral_surface({CD(1, 0), CD(1, 0), CD(1, 0), CD(1, 0), CD(1, 0)});
    CHECK(surface_is_smooth(c));
    auto degen = pentahedral_surface({CD(1, 0), CD(1, 0), CD(1, 0), CD(1, 0), CD(0, 0)});
    CHECK(degen.coeffs.size() == 20);  // fermat-type: still a valid surface
    Rng rng(5);
    std::array<CD, 5> a;
    for (auto& v : a) v = rng.next_complex(1.0) + CD(1.5, 0);
    CD sigma5(1, 0);
    for (const auto& v : a) sigma5 *= v;
    REQUIRE(std::abs(sigma5) > 1e-6);  // the open-set gate
    CHECK(surface_is_smooth(pentahedral_surface(a)));
}

TEST_CASE("singular surface detected and rejected by the line solver") {
    // x0^3: triply degenerate plane
    std::vector<CD> c(20, CD(0, 0));
    c[0] = CD(1, 0);
    // add a mild generic part that keeps (0,0,*,*) singular: x0^3 + x1^3
    auto mons = monomial_exponents(3, 4);
    for (std::size_t i = 0; i < mons.size(); ++i)
        if (mons[i][1] == 3) c[i] = CD(1, 0);
    CubicSurface s = make_surface(std::move(c));
    CHECK_FALSE(surface_is_smooth(s));
    CHECK_THROWS_AS(lines_on_cubic(s, 0), invalid_input);
}
