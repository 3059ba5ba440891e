#include "rdlab/quartic_bitangents.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "rdlab/poly.hpp"
#include "rdlab/roots.hpp"

namespace rdlab {
namespace {

double max_mod(const std::vector<CD>& v) {
    double m = 0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

Vec3 unit3(const Vec3& v) {
    double n = 0;
    for (const auto& c : v) n += std::norm(c);
    n = std::sqrt(n);
    if (n == 0) throw invalid_input("zero projective vector");
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] / n;
    return out;
}

Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

CD dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// substitute old coordinate i = rows[i] . (new variables)
MPolyC substitute_linear3(const MPolyC& f, const std::array<Vec3, 3>& rows) {
    MPolyC out(3);
    std::array<MPolyC, 3> lin;
    for (int i = 0; i < 3; ++i) {
        MPolyC l(3);
        for (int j = 0; j < 3; ++j) {
            std::vector<int> e(3, 0);
            e[static_cast<std::size_t>(j)] = 1;
            l.add_term(e, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        lin[static_cast<std::size_t>(i)] = l;
    }
    for (const auto& [e, c] : f.terms()) {
        MPolyC t = MPolyC::constant(3, c);
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) t = t * lin[static_cast<std::size_t>(v)];
        out = out + t;
    }
    return out;
}

std::array<Vec3, 3> invert3(const std::array<Vec3, 3>& m) {
    Eigen::Matrix3cd em;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) em(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::Matrix3cd inv = em.inverse();
    std::array<Vec3, 3> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = inv(i, j);
    return out;
}

// square-root of minus the restriction of c to a coordinate line of the moved
// frame, as a binary quadratic
std::vector<CD> half_restriction(const MPolyC& cm, const Vec3& a, const Vec3& b) {
    std::vector<CD> pa(a.begin(), a.end()), pb(b.begin(), b.end());
    auto f = restrict_form(cm, pa, pb);
    for (auto& v : f) v = -v;
    auto sq = binary_quartic_sqrt(f);
    if (sq.residual > 1e-7)
        throw invalid_input("split form: coordinate line is not a bitangent of the moved quartic");
    return sq.q;
}

}  // namespace

PlaneQuartic make_quartic(std::vector<CD> coeffs15) {
    if (coeffs15.size() != 15) throw invalid_input("plane quartic needs 15 coefficients");
    double m = max_mod(coeffs15);
    if (m == 0) throw invalid_input("plane quartic is identically zero");
    for (auto& c : coeffs15) c /= m;
    PlaneQuartic q;
    q.coeffs = std::move(coeffs15);
    return q;
}

bool quartic_is_smooth(const PlaneQuartic& c, double tol) {
    MPolyC f = c.form();
    std::array<MPolyC, 3> grad;
    for (int i = 0; i < 3; ++i) grad[static_cast<std::size_t>(i)] = f.ddx(i);
    Rng rng(0x59a1ul);

    // positive-dimensional singular loci escape the isolated-point solver;
    // a fixed generic line meets any singular curve
    {
        Rng lr = rng.split(77);
        std::vector<CD> a(3), b(3);
        for (auto& v : a) v = lr.next_complex(1.0);
        for (auto& v : b) v = lr.next_complex(1.0);
        auto g0 = restrict_form(grad[0], a, b);
        PolyC asc0(std::vector<CD>(g0.rbegin(), g0.rend()));
        if (asc0.is_zero()) return false;  // a partial vanishing on a generic line vanishes identically
        if (asc0.degree() >= 1) {
            auto rts = roots(asc0, 1e-9);
            for (const auto& t : rts.roots) {
                std::vector<CD> pt(3);
                for (int i = 0; i < 3; ++i) pt[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] * t + b[static_cast<std::size_t>(i)];
                double pn = 0;
                for (const auto& v : pt) pn = std::max(pn, std::abs(v));
                for (auto& v : pt) v /= pn;
                if (std::abs(grad[1].eval(pt)) < tol && std::abs(grad[2].eval(pt)) < tol) return false;
            }
        }
    }

    struct ChartSpec {
        int fixed;
        std::array<int, 2> eqs;
        int check;
    };
    const ChartSpec specs[2] = {{2, {0, 1}, 2}, {0, {1, 2}, 0}};
    for (const auto& spec : specs) {
        std::array<int, 2> vars{};
        int n = 0;
        for (int v = 0; v < 3; ++v)
            if (v != spec.fixed) vars[static_cast<std::size_t>(n++)] = v;
        auto substitute = [&](const MPolyC& g) {
            MPolyC out(2);
            for (const auto& [e, cf] : g.terms()) {
                std::vector<int> e2(2, 0);
                for (int k = 0; k < 2; ++k)
                    e2[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(vars[static_cast<std::size_t>(k)])];
                out.add_term(e2, cf);
            }
            return out;
        };
        ParametricSystem sys;
        sys.unknowns = 2;
        sys.parameters = 0;
        bool chart_empty = false;
        for (int k = 0; k < 2; ++k) {
            MPolyC eq = substitute(grad[static_cast<std::size_t>(spec.eqs[static_cast<std::size_t>(k)])]);
            if (eq.is_zero()) return false;
            if (eq.total_degree() == 0) chart_empty = true;
            sys.equations.push_back(eq);
        }
        if (chart_empty) continue;
        MPolyC other = substitute(grad[static_cast<std::size_t>(spec.check)]);
        Rng r = rng.split(static_cast<std::uint64_t>(spec.fixed));
        auto sols = solve_total_degree(sys, {}, r);
        for (const auto& x : sols) {
            double xn = 1;
            for (const auto& v : x) xn = std::max(xn, std::abs(v));
            if (std::abs(other.eval(x)) < tol * xn * xn * xn) return false;
        }
    }
    std::vector<CD> pt{CD(0, 0), CD(1, 0), CD(0, 0)};
    for (const auto& g : grad)
        if (std::abs(g.eval(pt)) > tol) return true;
    return false;
}

PlaneQuartic random_smooth_quartic(Rng& rng) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<CD> c(15);
        for (auto& v : c) v = rng.next_complex(1.0);
        PlaneQuartic q = make_quartic(std::move(c));
        if (quartic_is_smooth(q)) {
            q.smoothness_checked = true;
            return q;
        }
    }
    throw numerical_failure("random_smooth_quartic: no smooth curve after 16 draws");
}

Bitangent make_bitangent(const PlaneQuartic& c, const Vec3& line) {
    Bitangent b;
    b.line = unit3(line);
    auto [p1, p2] = points_on_line(b.line);
    p1 = unit3(p1);
    p2 = unit3(p2);
    std::vector<CD> a(p1.begin(), p1.end()), bb(p2.begin(), p2.end());
    auto f = restrict_form(c.form(), a, bb);
    auto sq = binary_quartic_sqrt(f);
    b.witness = sq.q;
    b.witness_residual = sq.residual;

    // contacts: roots of the witness quadratic on the line parametrization
    const auto& q = sq.q;
    double qs = max_mod(q);
    auto point_at = [&](CD u, CD v) {
        Vec3 x;
        for (int i = 0; i < 3; ++i)
            x[static_cast<std::size_t>(i)] = u * p1[static_cast<std::size_t>(i)] + v * p2[static_cast<std::size_t>(i)];
        return unit3(x);
    };
    if (qs == 0) {
        b.contacts = {point_at(CD(1, 0), CD(0, 0)), point_at(CD(0, 1), CD(0, 0))};
        b.hyperflex = true;
        return b;
    }
    CD disc = q[1] * q[1] - 4.0 * q[0] * q[2];
    b.hyperflex = std::abs(disc) <= 1e-8 * qs * qs;
    CD sd = std::sqrt(disc);
    if (std::abs(q[0]) >= std::abs(q[2])) {
        b.contacts = {point_at((-q[1] + sd) / (2.0 * q[0]), CD(1, 0)),
                      point_at((-q[1] - sd) / (2.0 * q[0]), CD(1, 0))};
    } else {
        b.contacts = {point_at(CD(1, 0), (-q[1] + sd) / (2.0 * q[2])),
                      point_at(CD(1, 0), (-q[1] - sd) / (2.0 * q[2]))};
    }
    return b;
}

namespace {

bool line_lex_less(const Vec3& x, const Vec3& y) {
    for (int k = 0; k < 3; ++k) {
        const CD &a = x[static_cast<std::size_t>(k)], &b = y[static_cast<std::size_t>(k)];
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        if (std::abs(a.imag() - b.imag()) > 1e-9) return a.imag() < b.imag();
    }
    return false;
}

void sort_bitangents(std::vector<Bitangent>& bs) {
    std::sort(bs.begin(), bs.end(), [](const Bitangent& a, const Bitangent& b) {
        return line_lex_less(a.line, b.line);
    });
}

void add_unique_bitangent(std::vector<Bitangent>& bs, const Bitangent& b, double tol = 1e-6) {
    for (const auto& e : bs)
        if (projective_distance3(e.line, b.line) < tol) return;
    bs.push_back(b);
}

// the two perfect-square conditions in the chart's (m, c) unknowns
ParametricSystem bitangent_chart_system(int chart, const std::vector<CD>& coeffs) {
    auto mons = monomial_exponents(4, 3);
    // per coordinate, the binary linear form on the chart line with MPolyC
    // coefficients in (m, c); chart 0: y = m x + c z, chart 1: x = m y + c z,
    // chart 2: z = m x + c y
    auto c0 = MPolyC::constant(2, CD(0, 0));
    auto c1 = MPolyC::constant(2, CD(1, 0));
    MPolyC mv = MPolyC::var(2, 0), cv = MPolyC::var(2, 1);
    std::array<std::array<MPolyC, 2>, 3> lin;
    switch (chart) {
        case 0:
            lin[0] = {c1, c0};
            lin[1] = {mv, cv};
            lin[2] = {c0, c1};
            break;
        case 1:
            lin[0] = {mv, cv};
            lin[1] = {c1, c0};
            lin[2] = {c0, c1};
            break;
        default:
            lin[0] = {c1, c0};
            lin[1] = {c0, c1};
            lin[2] = {mv, cv};
            break;
    }
    std::array<MPolyC, 5> e;
    for (auto& v : e) v = MPolyC(2);
    for (std::size_t mi = 0; mi < mons.size(); ++mi) {
        std::vector<MPolyC> bin{MPolyC::constant(2, coeffs[mi])};
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < mons[mi][static_cast<std::size_t>(v)]; ++k) {
                std::vector<MPolyC> next(bin.size() + 1, MPolyC(2));
                for (std::size_t d = 0; d < bin.size(); ++d) {
                    next[d] = next[d] + bin[d] * lin[static_cast<std::size_t>(v)][0];
                    next[d + 1] = next[d + 1] + bin[d] * lin[static_cast<std::size_t>(v)][1];
                }
                bin = std::move(next);
            }
        for (int d = 0; d < 5; ++d) e[static_cast<std::size_t>(d)] = e[static_cast<std::size_t>(d)] + bin[static_cast<std::size_t>(d)];
    }
    // A: 8 e0^2 e3 - 4 e0 e1 e2 + e1^3 ; B: 64 e0^3 e4 - (4 e0 e2 - e1^2)^2
    MPolyC A = e[0] * e[0] * e[3] * CD(8, 0) - e[0] * e[1] * e[2] * CD(4, 0) + e[1] * e[1] * e[1];
    MPolyC inner = e[0] * e[2] * CD(4, 0) - e[1] * e[1];
    MPolyC B = e[0] * e[0] * e[0] * e[4] * CD(64, 0) - inner * inner;
    ParametricSystem sys;
    sys.unknowns = 2;
    sys.parameters = 0;
    sys.equations = {A, B};
    return sys;
}

Vec3 chart_line_covector(int chart, CD m, CD c) {
    switch (chart) {
        case 0: return {-m, CD(1, 0), -c};
        case 1: return {CD(1, 0), -m, -c};
        default: return {-m, -c, CD(1, 0)};
    }
}

}  // namespace

std::vector<Bitangent> bitangents(const PlaneQuartic& c, std::uint64_t seed) {
    if (!c.smoothness_checked && !quartic_is_smooth(c))
        throw invalid_input("bitangents: the quartic is singular");
    Rng rng(seed, 0xb17a);
    std::vector<Bitangent> found;
    for (int chart = 0; chart < 3 && found.size() < 28; ++chart) {
        ParametricSystem sys = bitangent_chart_system(chart, c.coeffs);
        Rng r = rng.split(static_cast<std::uint64_t>(chart));
        auto sols = solve_total_degree(sys, {}, r);
        for (const auto& u : sols) {
            Bitangent b = make_bitangent(c, chart_line_covector(chart, u[0], u[1]));
            if (b.witness_residual < 1e-8) add_unique_bitangent(found, b);
        }
    }
    if (found.size() != 28) {
        std::ostringstream os;
        os << "bitangents: found " << found.size() << " lines after all charts (expected 28)";
        throw numerical_failure(os.str());
    }
    sort_bitangents(found);
    return found;
}

QuarticSplitForm fit_split_form(const PlaneQuartic& c, const Bitangent& t1, const Bitangent& t2) {
    Vec3 meet = cross3(t1.line, t2.line);
    meet = unit3(meet);
    std::vector<CD> mv(meet.begin(), meet.end());
    if (std::abs(c.form().eval(mv)) < 1e-10)
        throw invalid_input("split form: the bitangents meet on the curve");

    // moved coordinates x' = l1 . x, y' = l2 . x, z' = l3 . x
    QuarticSplitForm out;
    std::array<Vec3, 3> rows{t1.line, t2.line, Vec3{}};
    double best = -1;
    for (int i = 0; i < 3; ++i) {
        Vec3 e{};
        e[static_cast<std::size_t>(i)] = CD(1, 0);
        rows[2] = e;
        Eigen::Matrix3cd em;
        for (int r = 0; r < 3; ++r)
            for (int j = 0; j < 3; ++j) em(r, j) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        double d = std::abs(em.determinant());
        if (d > best) {
            best = d;
            out.to_moved = rows;
        }
    }
    out.from_moved = invert3(out.to_moved);

    // C'(x') = C(M^{-1} x'): old coordinate i is row i of M^{-1} applied to x'
    MPolyC cm = substitute_linear3(c.form(), out.from_moved);

    auto r1 = half_restriction(cm, Vec3{CD(0, 0), CD(1, 0), CD(0, 0)}, Vec3{CD(0, 0), CD(0, 0), CD(1, 0)});
    auto r2 = half_restriction(cm, Vec3{CD(1, 0), CD(0, 0), CD(0, 0)}, Vec3{CD(0, 0), CD(0, 0), CD(1, 0)});
    if (std::abs(r1[2]) < 1e-10 || std::abs(r2[2]) < 1e-10)
        throw invalid_input("split form: corner contact at the intersection point");
    CD sign = r1[2] / r2[2];
    for (auto& v : r2) v *= sign;

    // V with V|x'=0 = r1, V|y'=0 = r2, mixed coefficient gauged to zero
    MPolyC V(3);
    auto add = [&](int i, int j, CD v) {
        std::vector<int> e(3, 0);
        e[static_cast<std::size_t>(i)] += 1;
        e[static_cast<std::size_t>(j)] += 1;
        V.add_term(e, v);
    };
    add(1, 1, r1[0]);
    add(1, 2, r1[1]);
    add(2, 2, r1[2]);
    add(0, 0, r2[0]);
    add(0, 2, r2[1]);

    // U = (C' + V^2) / (x'y')
    MPolyC D = cm + V * V;
    MPolyC U(3);
    double drop = 0, scale = 0;
    for (const auto& [e, cf] : D.terms()) {
        scale = std::max(scale, std::abs(cf));
        if (e[0] >= 1 && e[1] >= 1) {
            std::vector<int> e2 = e;
            e2[0] -= 1;
            e2[1] -= 1;
            U.add_term(e2, cf);
        } else {
            drop = std::max(drop, std::abs(cf));
        }
    }
    out.residual = scale > 0 ? drop / scale : 0.0;
    if (out.residual > 1e-8)
        throw numerical_failure("split form: xy does not divide C + V^2 at tolerance");
    out.U = U;
    out.V = V;
    out.mu = conic_matrix(U);
    out.mv = conic_matrix(V);
    out.mxy = Mat3{};
    out.mxy[0][1] = out.mxy[1][0] = CD(0.5, 0);
    return out;
}

FromTwoResult bitangents_from_two(const PlaneQuartic& c, const Bitangent& t1, const Bitangent& t2) {
    // one pass: the degree-5 condition in t and the five split pairs
    auto pass = [&](const Bitangent& a, const Bitangent& b, FromTwoResult* record) {
        QuarticSplitForm sf = fit_split_form(c, a, b);
        // det(MU + 2t MV + t^2 Mxy) as a polynomial in t
        std::array<std::array<PolyC, 3>, 3> m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = PolyC(std::vector<CD>{
                    sf.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    2.0 * sf.mv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    sf.mxy[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
        PolyC det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        double dm = 0;
        for (const auto& v : det.coeffs()) dm = std::max(dm, std::abs(v));
        if (det.degree() > 5 && std::abs(det[6]) > 1e-9 * dm)
            throw numerical_failure("from_two: parameter condition has degree above five");
        std::vector<CD> asc(det.coeffs().begin(), det.coeffs().end());
        asc.resize(6, CD(0, 0));
        if (std::abs(asc[5]) < 1e-9 * dm)
            throw degenerate_input("from_two", "parameter condition drops below degree five");
        PolyC quintic(std::vector<CD>(asc.begin(), asc.begin() + 6));
        auto rts = roots(quintic, 1e-10);
        for (std::size_t i = 0; i < rts.roots.size(); ++i)
            for (std::size_t j = i + 1; j < rts.roots.size(); ++j)
                if (std::abs(rts.roots[i] - rts.roots[j]) < 1e-7 * (1 + std::abs(rts.roots[i]))) {
                    std::ostringstream os;
                    os << "repeated parameter root near " << rts.roots[i].real() << "+"
                       << rts.roots[i].imag() << "i";
                    throw degenerate_input("from_two", os.str());
                }
        if (record) {
            // monic normalized, ascending
            std::vector<CD> monic(asc.begin(), asc.begin() + 6);
            CD lead = monic[5];
            for (auto& v : monic) v /= lead;
            record->quintic = monic;
        }
        std::vector<Bitangent> produced;
        for (const auto& t : rts.roots) {
            Mat3 q{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        sf.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                        2.0 * t * sf.mv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                        t * t * sf.mxy[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            ConicSplit split = split_conic(q);
            if (split.residual > 1e-6)
                throw numerical_failure("from_two: conic does not split at a parameter root");
            for (const Vec3& w : {split.p, split.q}) {
                // back to original coordinates: l = M^T w
                Vec3 l{};
                for (int i = 0; i < 3; ++i)
                    for (int r = 0; r < 3; ++r)
                        l[static_cast<std::size_t>(i)] +=
                            sf.to_moved[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] *
                            w[static_cast<std::size_t>(r)];
                Bitangent nb = make_bitangent(c, l);
                if (nb.witness_residual > 1e-7)
                    throw numerical_failure("from_two: produced line is not a bitangent");
                produced.push_back(nb);
            }
        }
        return produced;
    };

    FromTwoResult out;
    std::vector<Bitangent> all;
    add_unique_bitangent(all, make_bitangent(c, t1.line));
    add_unique_bitangent(all, make_bitangent(c, t2.line));
    auto first = pass(all[0], all[1], &out);
    out.first_pass = {all[0], all[1]};
    for (const auto& b : first) {
        add_unique_bitangent(all, b);
        add_unique_bitangent(out.first_pass, b);
    }

    // close under further passes over fresh pairs
    std::set<std::pair<std::size_t, std::size_t>> tried{{0, 1}};
    bool progress = true;
    while (all.size() < 28 && progress) {
        progress = false;
        for (std::size_t i = 0; i < all.size() && all.size() < 28; ++i)
            for (std::size_t j = i + 1; j < all.size() && all.size() < 28; ++j) {
                if (tried.count({i, j})) continue;
                tried.insert({i, j});
                std::vector<Bitangent> more;
                try {
                    more = pass(all[i], all[j], nullptr);
                } catch (const invalid_input&) {
                    continue;  // intersection on the curve: skip the pair
                } catch (const degenerate_input&) {
                    continue;
                }
                std::size_t before = all.size();
                for (const auto& b : more) add_unique_bitangent(all, b);
                if (all.size() > before) progress = true;
            }
    }
    if (all.size() != 28) {
        std::ostringstream os;
        os << "bitangents_from_two: closed at " << all.size() << " bitangents (expected 28)";
        throw numerical_failure(os.str());
    }
    sort_bitangents(all);
    out.all = std::move(all);
    return out;
}

ProjectionResult quartic_from_cubic_point(const CubicSurface& s, const Vec4& p,
                                          const LineConfiguration* lines) {
    MPolyC f = s.form();
    std::vector<CD> pv(p.begin(), p.end());
    double pn = 0;
    for (const auto& v : pv) pn = std::max(pn, std::abs(v));
    for (auto& v : pv) v /= pn;
    if (std::abs(f.eval(pv)) > 1e-10)
        throw invalid_input("projection: the point is not on the surface");

    LineConfiguration local;
    if (!lines) {
        local = lines_on_cubic(s, 0);
        lines = &local;
    }
    // p off every line: spanning-point rank test
    for (const auto& l : lines->lines) {
        Eigen::MatrixXcd m(3, 4);
        for (int j = 0; j < 4; ++j) {
            m(0, j) = l.point_a[static_cast<std::size_t>(j)];
            m(1, j) = l.point_b[static_cast<std::size_t>(j)];
            m(2, j) = pv[static_cast<std::size_t>(j)];
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        if (svd.singularValues()(2) < 1e-8 * svd.singularValues()(0))
            throw invalid_input("projection: the point lies on a line of the surface");
    }

    // direction frame: unitary complement of p
    Eigen::MatrixXcd base(4, 1);
    for (int i = 0; i < 4; ++i) base(i, 0) = pv[static_cast<std::size_t>(i)];
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(base);
    Eigen::MatrixXcd Q = qr.householderQ();
    std::array<Vec4, 3> frame;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 4; ++i) frame[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = Q(i, k + 1);

    // f(p + t v) = A(v) t + B(v) t^2 + C(v) t^3 in direction coordinates
    std::array<MPolyC, 4> coord;
    for (int i = 0; i < 4; ++i) {
        MPolyC ci(3);
        for (int k = 0; k < 3; ++k) {
            std::vector<int> e(3, 0);
            e[static_cast<std::size_t>(k)] = 1;
            ci.add_term(e, frame[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
        }
        coord[static_cast<std::size_t>(i)] = ci;
    }
    // A: gradient, B: half Hessian, C: f on the direction
    MPolyC A(3), B(3), Cc(3);
    for (int i = 0; i < 4; ++i) {
        CD gi = f.ddx(i).eval(pv);
        A = A + coord[static_cast<std::size_t>(i)] * gi;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CD h = f.ddx(i).ddx(j).eval(pv);
            B = B + coord[static_cast<std::size_t>(i)] * coord[static_cast<std::size_t>(j)] * (h / 2.0);
        }
    {
        MPolyC sub(3);
        for (const auto& [e, cf] : f.terms()) {
            MPolyC t = MPolyC::constant(3, cf);
            for (int v = 0; v < 4; ++v)
                for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) t = t * coord[static_cast<std::size_t>(v)];
            sub = sub + t;
        }
        Cc = sub;
    }
    MPolyC branch = B * B - A * Cc * CD(4, 0);
    ProjectionResult out;
    out.quartic = make_quartic(form_to_dense(4, 3, branch));
    out.quartic.smoothness_checked = quartic_is_smooth(out.quartic);
    if (!out.quartic.smoothness_checked)
        throw degenerate_input("projection", "branch quartic is singular for this point");

    // images of the 27 lines
    Eigen::MatrixXcd fr(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 3; ++k) fr(i, k) = frame[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        fr(i, 3) = pv[static_cast<std::size_t>(i)];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(fr);
    auto dirs = [&](const Vec4& x) {
        Eigen::Vector4cd rhs;
        for (int i = 0; i < 4; ++i) rhs(i) = x[static_cast<std::size_t>(i)];
        Eigen::Vector4cd sol = lu.solve(rhs);
        return Vec3{sol(0), sol(1), sol(2)};
    };
    for (const auto& l : lines->lines) {
        Vec3 q1 = dirs(l.point_a), q2 = dirs(l.point_b);
        Bitangent b = make_bitangent(out.quartic, cross3(q1, q2));
        if (b.witness_residual > 1e-7)
            throw numerical_failure("projection: a line image fails the bitangent witness");
        out.bitangents.push_back(b);
    }
    // the exceptional direction line A(v) = 0
    Vec3 exc{};
    for (const auto& [e, cf] : A.terms())
        for (int k = 0; k < 3; ++k)
            if (e[static_cast<std::size_t>(k)] == 1) exc[static_cast<std::size_t>(k)] = cf;
    Bitangent eb = make_bitangent(out.quartic, exc);
    if (eb.witness_residual > 1e-7)
        throw numerical_failure("projection: the exceptional line fails the bitangent witness");
    out.bitangents.push_back(eb);
    return out;
}

SyzygyVerdict syzygy_test(const PlaneQuartic& c, const std::vector<Bitangent>& bs) {
    (void)c;
    if (bs.size() < 3) throw invalid_input("syzygy_test: at least three bitangents required");
    SyzygyVerdict v;
    std::vector<Vec3> pts;
    for (const auto& b : bs) {
        if (b.hyperflex) v.degenerate = true;
        pts.push_back(b.contacts[0]);
        pts.push_back(b.contacts[1]);
    }
    Eigen::MatrixXcd m(static_cast<int>(pts.size()), 6);
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const Vec3 p = unit3(pts[r]);
        const CD &x = p[0], &y = p[1], &z = p[2];
        CD mono[6] = {x * x, x * y, y * y, x * z, y * z, z * z};
        for (int j = 0; j < 6; ++j) m(static_cast<int>(r), j) = mono[j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double s0 = svd.singularValues()(0);
    double s5 = svd.singularValues()(5);
    double s4 = svd.singularValues()(4);
    v.gap = s5 > 0 ? s4 / s5 : 1e300;
    double rel = s5 / s0;
    v.syzygetic = rel < 1e-6;
    if (v.syzygetic)
        v.ambiguous = (v.gap < 1e3);
    else
        v.ambiguous = (rel < 1e-4);
    return v;
}

ConfigCounts classify_configurations(const PlaneQuartic& c, const std::vector<Bitangent>& all28,
                                     long triple_budget) {
    if (all28.size() != 28) throw invalid_input("classify_configurations: exactly 28 bitangents required");

    // contact matrix rows reused across all rank tests
    Eigen::MatrixXcd rows(56, 6);
    for (int b = 0; b < 28; ++b)
        for (int k = 0; k < 2; ++k) {
            Vec3 p = unit3(all28[static_cast<std::size_t>(b)].contacts[static_cast<std::size_t>(k)]);
            const CD &x = p[0], &y = p[1], &z = p[2];
            CD mono[6] = {x * x, x * y, y * y, x * z, y * z, z * z};
            for (int j = 0; j < 6; ++j) rows(2 * b + k, j) = mono[j];
        }
    auto rank_verdict = [&](const std::vector<int>& bits, bool& ambiguous) {
        Eigen::MatrixXcd m(static_cast<int>(bits.size()) * 2, 6);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            m.row(2 * static_cast<int>(i)) = rows.row(2 * bits[i]);
            m.row(2 * static_cast<int>(i) + 1) = rows.row(2 * bits[i] + 1);
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        double rel = svd.singularValues()(5) / svd.singularValues()(0);
        bool syz = rel < 1e-6;
        if ((syz && rel > 1e-8) || (!syz && rel < 1e-4)) ambiguous = true;
        return syz;
    };

    ConfigCounts out;

    // syzygetic triples feed the Aronhold search; ambiguous decisions are
    // tracked so counts can be bracketed honestly
    std::vector<std::vector<std::vector<int>>> tripsyz(
        28, std::vector<std::vector<int>>(28, std::vector<int>(28, 0)));  // 0 asyz, 1 syz, 2 ambiguous
    long budget = triple_budget;
    for (int a = 0; a < 28; ++a)
        for (int b = a + 1; b < 28; ++b)
            for (int d = b + 1; d < 28; ++d) {
                bool amb = false;
                bool syz = rank_verdict({a, b, d}, amb);
                int v = amb ? 2 : (syz ? 1 : 0);
                if (amb) {
                    out.exact = false;
                    std::ostringstream os;
                    os << "triple " << a << "," << b << "," << d;
                    out.flagged.push_back(os.str());
                }
                tripsyz[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][static_cast<std::size_t>(d)] = v;
            }
    auto trip = [&](int a, int b, int d) {
        int x = std::min({a, b, d}), z = std::max({a, b, d});
        int y = a + b + d - x - z;
        return tripsyz[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)][static_cast<std::size_t>(z)];
    };

    // Aronhold sets: 7-subsets all of whose triples are asyzygetic.  With
    // ambiguity, treating ambiguous triples as asyzygetic gives the upper
    // count and as syzygetic the lower.
    auto aronhold_count = [&](bool ambiguous_blocks) {
        std::vector<int> cur;
        long count = 0;
        std::function<void(int)> dfs = [&](int start) {
            if (budget <= 0) throw resource_limit("classify_configurations: triple budget exhausted");
            if (cur.size() == 7) {
                ++count;
                return;
            }
            for (int v = start; v < 28; ++v) {
                bool ok = true;
                for (std::size_t i = 0; i < cur.size() && ok; ++i)
                    for (std::size_t j = i + 1; j < cur.size() && ok; ++j) {
                        --budget;
                        int t = trip(cur[i], cur[j], v);
                        if (t == 1 || (t == 2 && ambiguous_blocks)) ok = false;
                    }
                if (!ok) continue;
                cur.push_back(v);
                dfs(v + 1);
                cur.pop_back();
            }
        };
        dfs(0);
        return static_cast<int>(count);
    };

    // Steiner complexes: union-find over the 378 pairs, joined when the union
    // of two disjoint pairs has its 8 contacts on a conic.  Extra (ambiguous)
    // joins can only lower the component count.
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < 28; ++a)
        for (int b = a + 1; b < 28; ++b) pairs.emplace_back(a, b);
    auto steiner_count = [&](bool join_ambiguous) {
        std::vector<int> parent(pairs.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            return parent[static_cast<std::size_t>(x)] == x ? x
                                                            : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
        };
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
                auto [a, b] = pairs[i];
                auto [d, e] = pairs[j];
                if (a == d || a == e || b == d || b == e) continue;
                if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
                bool amb = false;
                bool syz = rank_verdict({a, b, d, e}, amb);
                if (amb && !join_ambiguous) {
                    out.exact = false;
                    std::ostringstream os;
                    os << "pair tetrad " << a << "," << b << "|" << d << "," << e;
                    out.flagged.push_back(os.str());
                }
                if ((syz && !amb) || (amb && join_ambiguous)) {
                    parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));
                }
            }
        std::set<int> comps;
        for (std::size_t i = 0; i < pairs.size(); ++i) comps.insert(find(static_cast<int>(i)));
        return static_cast<int>(comps.size());
    };

    out.steiner = steiner_count(false);
    out.aronhold = aronhold_count(false);
    out.steiner_lo = out.steiner;
    out.steiner_hi = out.steiner;
    out.aronhold_lo = out.aronhold;
    out.aronhold_hi = out.aronhold;
    if (!out.exact) {
        out.steiner_lo = steiner_count(true);
        out.aronhold_lo = aronhold_count(true);
    }
    (void)c;
    return out;
}

}  // namespace rdlab
