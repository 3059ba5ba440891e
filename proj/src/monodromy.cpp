#include "rdlab/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdlab/cubic_lines.hpp"

namespace rdlab {

ParametricSystem flex_system(int d) {
    if (d < 3) throw invalid_input("flex_system: degree >= 3 required");
    auto mons = monomial_exponents(d, 3);
    const int npar = static_cast<int>(mons.size());
    const int nv = 2 + npar;

    // the homogeneous curve as a polynomial in (x, y, z, params), then all
    // second partials for the Hessian determinant
    const int hv = 3 + npar;
    MultiPoly<CD> curve(hv);
    for (int j = 0; j < npar; ++j) {
        std::vector<int> e(static_cast<std::size_t>(hv), 0);
        for (int c = 0; c < 3; ++c) e[static_cast<std::size_t>(c)] = mons[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        e[static_cast<std::size_t>(3 + j)] = 1;
        curve.add_term(e, CD(1, 0));
    }
    std::array<std::array<MPolyC, 3>, 3> h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = curve.ddx(i).ddx(j);
    MPolyC hess = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
                  h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
                  h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);

    // move to the z = 1 chart with variables (x, y, params...)
    auto chart = [&](const MPolyC& f) {
        MPolyC out(nv);
        for (const auto& [e, c] : f.terms()) {
            std::vector<int> e2(static_cast<std::size_t>(nv), 0);
            e2[0] = e[0];
            e2[1] = e[1];
            for (int j = 0; j < npar; ++j) e2[static_cast<std::size_t>(2 + j)] = e[static_cast<std::size_t>(3 + j)];
            out.add_term(e2, c);
        }
        return out;
    };
    ParametricSystem sys;
    sys.unknowns = 2;
    sys.parameters = npar;
    sys.fiber_degree = 3L * d * (d - 2);
    sys.equations = {chart(curve), chart(hess)};
    return sys;
}

ParametricSystem bezout_system(int r, int s) {
    if (r < 1 || s < 1) throw invalid_input("bezout_system: degrees >= 1 required");
    auto mr = monomial_exponents(r, 3);
    auto ms = monomial_exponents(s, 3);
    const int npar = static_cast<int>(mr.size() + ms.size());
    const int nv = 2 + npar;
    auto build = [&](const std::vector<std::vector<int>>& mons, int offset) {
        MPolyC f(nv);
        for (std::size_t j = 0; j < mons.size(); ++j) {
            std::vector<int> e(static_cast<std::size_t>(nv), 0);
            e[0] = mons[j][0];
            e[1] = mons[j][1];  // z-power dropped in the z = 1 chart
            e[static_cast<std::size_t>(2 + offset + static_cast<int>(j))] = 1;
            f.add_term(e, CD(1, 0));
        }
        return f;
    };
    ParametricSystem sys;
    sys.unknowns = 2;
    sys.parameters = npar;
    sys.fiber_degree = static_cast<long>(r) * s;
    sys.equations = {build(mr, 0), build(ms, static_cast<int>(mr.size()))};
    return sys;
}

ParametricSystem lines27_system() {
    extern ParametricSystem lines27_chart_system();  // defined in cubic_lines.cpp
    return lines27_chart_system();
}

FamilySetup lines27_family(std::uint64_t seed) {
    FamilySetup fam;
    fam.name = "lines27";
    fam.system = lines27_system();
    Rng rng(seed, 0xfa117);
    for (int attempt = 0; attempt < 12; ++attempt) {
        Rng r = rng.split(static_cast<std::uint64_t>(attempt));
        CubicSurface s = random_smooth_cubic(r);
        std::vector<CD> params = s.coeffs;
        Rng solver = r.split(1);
        auto fiber = solve_total_degree(fam.system, params, solver);
        if (static_cast<long>(fiber.size()) == fam.system.fiber_degree) {
            fam.basepoint = params;
            fam.fiber = fiber;
            return fam;
        }
    }
    throw numerical_failure("lines27_family: no basepoint with a complete chart fiber");
}

FamilySetup bezout_family(int r, int s, std::uint64_t seed) {
    FamilySetup fam;
    fam.name = "bezout:" + std::to_string(r) + "," + std::to_string(s);
    fam.system = bezout_system(r, s);
    Rng rng(seed, 0xbe207);
    for (int attempt = 0; attempt < 12; ++attempt) {
        Rng rr = rng.split(static_cast<std::uint64_t>(attempt));
        std::vector<CD> params(static_cast<std::size_t>(fam.system.parameters));
        for (auto& v : params) v = rr.next_complex(1.0);
        Rng solver = rr.split(1);
        auto fiber = solve_total_degree(fam.system, params, solver);
        if (static_cast<long>(fiber.size()) == fam.system.fiber_degree) {
            fam.basepoint = params;
            fam.fiber = fiber;
            return fam;
        }
    }
    throw numerical_failure("bezout_family: no basepoint with a complete fiber");
}

FamilySetup flex_family(int d, std::uint64_t seed) {
    FamilySetup fam;
    fam.name = "flex:" + std::to_string(d);
    fam.system = flex_system(d);
    Rng rng(seed, 0xf1e8);
    for (int attempt = 0; attempt < 12; ++attempt) {
        Rng rr = rng.split(static_cast<std::uint64_t>(attempt));
        std::vector<CD> params(static_cast<std::size_t>(fam.system.parameters));
        for (auto& v : params) v = rr.next_complex(1.0);
        Rng solver = rr.split(1);
        auto fiber = solve_total_degree(fam.system, params, solver);
        if (static_cast<long>(fiber.size()) == fam.system.fiber_degree) {
            fam.basepoint = params;
            fam.fiber = fiber;
            return fam;
        }
    }
    throw numerical_failure("flex_family: no basepoint with a complete fiber");
}

std::optional<Perm> track_loop(const ParametricSystem& sys, const std::vector<CD>& basepoint,
                               const std::vector<std::vector<CD>>& fiber,
                               const std::vector<std::vector<CD>>& waypoints, const TrackOptions& topt,
                               bool* matched) {
    if (matched) *matched = true;
    std::vector<std::vector<CD>> cur = fiber;
    std::vector<CD> from = basepoint;
    for (const auto& wp : waypoints) {
        auto res = track_segment(sys, cur, from, wp, topt);
        cur.clear();
        for (const auto& p : res) {
            if (!p.success) return std::nullopt;
            cur.push_back(p.x);
        }
        from = wp;
    }
    // nearest-neighbor matching with a second-nearest rejection ratio
    const std::size_t n = fiber.size();
    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        double best = 1e300, second = 1e300;
        int bj = -1;
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0;
            for (std::size_t k = 0; k < cur[i].size(); ++k) d = std::max(d, std::abs(cur[i][k] - fiber[j][k]));
            if (d < best) {
                second = best;
                best = d;
                bj = static_cast<int>(j);
            } else if (d < second) {
                second = d;
            }
        }
        if (bj < 0 || used[static_cast<std::size_t>(bj)] || second < 10 * best) {
            if (matched) *matched = false;
            return std::nullopt;
        }
        used[static_cast<std::size_t>(bj)] = true;
        img[i] = bj;
    }
    return Perm(img);
}

MonodromyCertificate monodromy_group(const FamilySetup& family, const MonodromyOptions& opt) {
    const auto& sys = family.system;
    sys.validate();
    if (static_cast<long>(family.fiber.size()) != sys.fiber_degree)
        throw invalid_input("monodromy_group: basepoint fiber is incomplete");
    for (const auto& x : family.fiber)
        if (system_residual(sys, x, family.basepoint) > 1e-8)
            throw invalid_input("monodromy_group: a fiber point misses the system");

    MonodromyCertificate cert;
    cert.family = family.name;
    cert.basepoint = family.basepoint;
    cert.fiber = family.fiber;

    Rng rng(opt.seed, 0x10095);
    std::vector<Perm> gens;
    mpz_class cur_order = 1;
    int stall = 0;
    int attempts = 0;
    const int deg = static_cast<int>(family.fiber.size());

    while (static_cast<int>(cert.loops.size()) < opt.max_loops && attempts < opt.resample_cap) {
        Rng lr = rng.split(static_cast<std::uint64_t>(attempts));
        ++attempts;
        std::vector<std::vector<CD>> wps;
        for (int w = 0; w < opt.waypoints; ++w) {
            std::vector<CD> p = family.basepoint;
            for (auto& v : p) v += opt.radius * std::max(1.0, std::abs(v)) * lr.next_complex(1.0);
            wps.push_back(std::move(p));
        }
        wps.push_back(family.basepoint);  // close the loop

        bool matched = true;
        auto perm = track_loop(sys, family.basepoint, family.fiber, wps, opt.track, &matched);
        if (!perm) {
            ++cert.discarded_loops;
            if (!matched) cert.complete = false;
            continue;
        }
        LoopRecord rec;
        rec.waypoints = wps;
        rec.permutation = *perm;
        cert.loops.push_back(rec);

        if (!perm->is_identity()) gens.push_back(*perm);
        mpz_class order = gens.empty() ? mpz_class(1) : PermGroup(deg, gens).order();
        if (order > cur_order) {
            cur_order = order;
            stall = 0;
        } else {
            ++stall;
        }
        if (opt.target_order != 0 && cur_order >= opt.target_order) break;
        if (stall >= opt.stall_limit) break;
    }

    PermGroup g(deg, gens);
    cert.order = g.order();
    auto ds = derived_series(g);
    cert.solvable = ds.solvable;
    cert.derived_orders = ds.orders;
    return cert;
}

mpz_class kontsevich_nd(int d) {
    if (d < 1) throw invalid_input("kontsevich_nd: d >= 1 required");
    // binomials up to 3d-4 via the Pascal recurrence
    int top = std::max(0, 3 * d - 4);
    std::vector<std::vector<mpz_class>> ch(static_cast<std::size_t>(top) + 1);
    for (int n = 0; n <= top; ++n) {
        ch[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 0);
        ch[static_cast<std::size_t>(n)][0] = 1;
        for (int k = 1; k <= n; ++k)
            ch[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
                ch[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                (k <= n - 1 ? ch[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] : 0);
    }
    auto binom = [&](int n, int k) -> mpz_class {
        if (n < 0 || k < 0 || k > n) return 0;
        return ch[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    };
    std::vector<mpz_class> n(static_cast<std::size_t>(d) + 1, 0);
    n[1] = 1;
    for (int m = 2; m <= d; ++m) {
        mpz_class acc = 0;
        for (int d1 = 1; d1 < m; ++d1) {
            int d2 = m - d1;
            mpz_class a = mpz_class(d1) * d1 * d2 * d2 * binom(3 * m - 4, 3 * d1 - 2);
            mpz_class b = mpz_class(d1) * d1 * d1 * d2 * binom(3 * m - 4, 3 * d1 - 1);
            acc += n[static_cast<std::size_t>(d1)] * n[static_cast<std::size_t>(d2)] * (a - b);
        }
        n[static_cast<std::size_t>(m)] = acc;
    }
    return n[static_cast<std::size_t>(d)];
}

}  // namespace rdlab
