#include "rdlab/cubic_lines.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "rdlab/roots.hpp"

namespace rdlab {
namespace {

double max_mod(const std::vector<CD>& v) {
    double m = 0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

Vec4 unit4(const Vec4& v) {
    double n = 0;
    for (const auto& c : v) n += std::norm(c);
    n = std::sqrt(n);
    Vec4 out;
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] / n;
    return out;
}

// line charts: pairs of parameter coordinates and solved coordinates
struct Chart {
    int par0, par1, unk0, unk1;
};
const Chart kCharts[4] = {{0, 1, 2, 3}, {2, 3, 0, 1}, {0, 2, 1, 3}, {1, 3, 0, 2}};

// The four coefficient equations of S restricted to the chart line
//   x_{unk0} = A x_{par0} + B x_{par1},  x_{unk1} = C x_{par0} + D x_{par1}
// as polynomials in (A,B,C,D) and, when `parametric`, the 20 surface
// coefficients appended as parameters.
ParametricSystem chart_line_system(const Chart& ch, const std::vector<CD>* fixed_coeffs) {
    const bool parametric = (fixed_coeffs == nullptr);
    const int nv = parametric ? 24 : 4;
    auto mons = monomial_exponents(3, 4);

    // binary linear form per projective coordinate: coord = l0 * s + l1 * t
    std::array<std::array<MPolyC, 2>, 4> lin;
    auto c0 = MPolyC::constant(nv, CD(0, 0));
    auto c1 = MPolyC::constant(nv, CD(1, 0));
    for (int i = 0; i < 4; ++i) lin[static_cast<std::size_t>(i)] = {c0, c0};
    lin[static_cast<std::size_t>(ch.par0)] = {c1, c0};
    lin[static_cast<std::size_t>(ch.par1)] = {c0, c1};
    lin[static_cast<std::size_t>(ch.unk0)] = {MPolyC::var(nv, 0), MPolyC::var(nv, 1)};
    lin[static_cast<std::size_t>(ch.unk1)] = {MPolyC::var(nv, 2), MPolyC::var(nv, 3)};

    std::array<MPolyC, 4> acc = {MPolyC(nv), MPolyC(nv), MPolyC(nv), MPolyC(nv)};
    for (std::size_t mi = 0; mi < mons.size(); ++mi) {
        // expand the binary cubic of this monomial restricted to the line
        std::vector<MPolyC> bin{parametric ? MPolyC::var(nv, 4 + static_cast<int>(mi))
                                           : MPolyC::constant(nv, (*fixed_coeffs)[mi])};
        for (int v = 0; v < 4; ++v)
            for (int k = 0; k < mons[mi][static_cast<std::size_t>(v)]; ++k) {
                std::vector<MPolyC> next(bin.size() + 1, MPolyC(nv));
                for (std::size_t d = 0; d < bin.size(); ++d) {
                    next[d] = next[d] + bin[d] * lin[static_cast<std::size_t>(v)][0];
                    next[d + 1] = next[d + 1] + bin[d] * lin[static_cast<std::size_t>(v)][1];
                }
                bin = std::move(next);
            }
        for (int d = 0; d < 4; ++d) acc[static_cast<std::size_t>(d)] = acc[static_cast<std::size_t>(d)] + bin[static_cast<std::size_t>(d)];
    }

    ParametricSystem sys;
    sys.unknowns = 4;
    sys.parameters = parametric ? 20 : 0;
    sys.fiber_degree = 27;
    sys.equations.assign(acc.begin(), acc.end());
    return sys;
}

ProjLine chart_solution_line(const Chart& ch, const std::vector<CD>& u) {
    Vec4 a{}, b{};
    a[static_cast<std::size_t>(ch.par0)] = CD(1, 0);
    a[static_cast<std::size_t>(ch.unk0)] = u[0];
    a[static_cast<std::size_t>(ch.unk1)] = u[2];
    b[static_cast<std::size_t>(ch.par1)] = CD(1, 0);
    b[static_cast<std::size_t>(ch.unk0)] = u[1];
    b[static_cast<std::size_t>(ch.unk1)] = u[3];
    return line_through(unit4(a), unit4(b));
}

bool plucker_lex_less(const Vec6& x, const Vec6& y) {
    for (int k = 0; k < 6; ++k) {
        const CD &a = x[static_cast<std::size_t>(k)], &b = y[static_cast<std::size_t>(k)];
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        if (std::abs(a.imag() - b.imag()) > 1e-9) return a.imag() < b.imag();
    }
    return false;
}

void sort_lines(std::vector<ProjLine>& lines) {
    std::sort(lines.begin(), lines.end(),
              [](const ProjLine& a, const ProjLine& b) { return plucker_lex_less(a.plucker, b.plucker); });
}

void add_unique_line(std::vector<ProjLine>& lines, const ProjLine& l, double tol = 1e-6) {
    for (const auto& e : lines)
        if (projective_distance6(e.plucker, l.plucker) < tol) return;
    lines.push_back(l);
}

std::vector<std::vector<bool>> build_adjacency(const std::vector<ProjLine>& lines) {
    const std::size_t n = lines.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool m = lines_meet(lines[i], lines[j]);
            adj[i][j] = adj[j][i] = m;
        }
    return adj;
}

}  // namespace

// the chart-0 line system with the 20 surface coefficients as parameters,
// shared with the monodromy pipeline
ParametricSystem lines27_chart_system() {
    ParametricSystem sys = chart_line_system(kCharts[0], nullptr);
    return sys;
}

CubicSurface make_surface(std::vector<CD> coeffs20) {
    if (coeffs20.size() != 20) throw invalid_input("cubic surface needs 20 coefficients");
    double m = max_mod(coeffs20);
    if (m == 0) throw invalid_input("cubic surface is identically zero");
    for (auto& c : coeffs20) c /= m;
    CubicSurface s;
    s.coeffs = std::move(coeffs20);
    return s;
}

CubicSurface pentahedral_surface(const std::array<CD, 5>& a) {
    // X4 = -(X0+X1+X2+X3)
    MPolyC f(4);
    for (int i = 0; i < 4; ++i) {
        std::vector<int> e(4, 0);
        e[static_cast<std::size_t>(i)] = 3;
        f.add_term(e, a[static_cast<std::size_t>(i)]);
    }
    MPolyC plane(4);
    for (int i = 0; i < 4; ++i) plane = plane + MPolyC::var(4, i);
    f = f - plane * plane * plane * a[4];
    return make_surface(form_to_dense(3, 4, f));
}

CubicSurface fermat_cubic() {
    std::vector<CD> c(20, CD(0, 0));
    auto mons = monomial_exponents(3, 4);
    for (std::size_t i = 0; i < mons.size(); ++i)
        for (int v = 0; v < 4; ++v)
            if (mons[i][static_cast<std::size_t>(v)] == 3) c[i] = CD(1, 0);
    return make_surface(std::move(c));
}

CubicSurface clebsch_cubic() { return pentahedral_surface({CD(1, 0), CD(1, 0), CD(1, 0), CD(1, 0), CD(1, 0)}); }

CubicSurface random_smooth_cubic(Rng& rng) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<CD> c(20);
        for (auto& v : c) v = rng.next_complex(1.0);
        CubicSurface s = make_surface(std::move(c));
        if (surface_is_smooth(s)) {
            s.smoothness_checked = true;
            return s;
        }
    }
    throw numerical_failure("random_smooth_cubic: no smooth surface after 16 draws");
}

bool surface_is_smooth(const CubicSurface& s, double tol) {
    MPolyC f = s.form();
    std::array<MPolyC, 4> grad;
    for (int i = 0; i < 4; ++i) grad[static_cast<std::size_t>(i)] = f.ddx(i);
    Rng rng(0x5e0ful);

    // a positive-dimensional singular locus meets a fixed generic plane; the
    // isolated-point charts below would never see it
    {
        Rng pr = rng.split(91);
        std::array<std::vector<CD>, 3> span;
        for (auto& v : span) {
            v.resize(4);
            for (auto& c : v) c = pr.next_complex(1.0);
        }
        auto on_plane = [&](const MPolyC& g) {
            MPolyC out(3);
            std::array<MPolyC, 4> coord;
            for (int i = 0; i < 4; ++i) {
                MPolyC ci(3);
                for (int k = 0; k < 3; ++k) {
                    std::vector<int> e(3, 0);
                    e[static_cast<std::size_t>(k)] = 1;
                    ci.add_term(e, span[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
                }
                coord[static_cast<std::size_t>(i)] = ci;
            }
            for (const auto& [e, c] : g.terms()) {
                MPolyC t = MPolyC::constant(3, c);
                for (int v = 0; v < 4; ++v)
                    for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) t = t * coord[static_cast<std::size_t>(v)];
                out = out + t;
            }
            return out;
        };
        std::array<MPolyC, 4> pg;
        for (int i = 0; i < 4; ++i) {
            pg[static_cast<std::size_t>(i)] = on_plane(grad[static_cast<std::size_t>(i)]);
            if (pg[static_cast<std::size_t>(i)].is_zero()) return false;
        }
        for (int fixed : {2, 0}) {
            auto dehom = [&](const MPolyC& g) {
                MPolyC out(2);
                std::array<int, 2> vars{};
                int n = 0;
                for (int v = 0; v < 3; ++v)
                    if (v != fixed) vars[static_cast<std::size_t>(n++)] = v;
                for (const auto& [e, c] : g.terms()) {
                    std::vector<int> e2(2, 0);
                    for (int k = 0; k < 2; ++k) e2[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(vars[static_cast<std::size_t>(k)])];
                    out.add_term(e2, c);
                }
                return out;
            };
            ParametricSystem sys;
            sys.unknowns = 2;
            sys.parameters = 0;
            bool empty = false;
            for (int k = 0; k < 2; ++k) {
                MPolyC eq = dehom(pg[static_cast<std::size_t>(k)]);
                if (eq.is_zero()) return false;
                if (eq.total_degree() == 0) empty = true;
                sys.equations.push_back(eq);
            }
            if (empty) continue;
            Rng r = pr.split(static_cast<std::uint64_t>(fixed));
            auto sols = solve_total_degree(sys, {}, r);
            for (const auto& x : sols) {
                std::vector<CD> y(3, CD(1, 0));
                int n = 0;
                for (int v = 0; v < 3; ++v)
                    if (v != fixed) y[static_cast<std::size_t>(v)] = x[static_cast<std::size_t>(n++)];
                double yn = 0;
                for (const auto& v : y) yn = std::max(yn, std::abs(v));
                for (auto& v : y) v /= yn;
                bool all_zero = true;
                for (int g2 = 0; g2 < 4 && all_zero; ++g2)
                    if (std::abs(pg[static_cast<std::size_t>(g2)].eval(y)) > tol) all_zero = false;
                if (all_zero) return false;
            }
        }
    }

    // three affine charts cover all candidate singular points except one
    // coordinate point, checked directly
    struct ChartSpec {
        int fixed;          // coordinate set to 1
        std::array<int, 3> eqs;
        int check;          // remaining partial verified at solutions
    };
    const ChartSpec specs[3] = {{3, {0, 1, 2}, 3}, {0, {1, 2, 3}, 0}, {1, {0, 2, 3}, 1}};

    for (const auto& spec : specs) {
        // variables: the three coordinates other than `fixed`
        std::array<int, 3> vars{};
        int n = 0;
        for (int v = 0; v < 4; ++v)
            if (v != spec.fixed) vars[static_cast<std::size_t>(n++)] = v;
        auto substitute = [&](const MPolyC& g) {
            MPolyC out(3);
            for (const auto& [e, c] : g.terms()) {
                std::vector<int> e2(3, 0);
                for (int k = 0; k < 3; ++k) e2[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(vars[static_cast<std::size_t>(k)])];
                out.add_term(e2, c);  // fixed coordinate = 1 drops its exponent
            }
            return out;
        };
        ParametricSystem sys;
        sys.unknowns = 3;
        sys.parameters = 0;
        bool chart_empty = false;
        for (int k = 0; k < 3; ++k) {
            MPolyC eq = substitute(grad[static_cast<std::size_t>(spec.eqs[static_cast<std::size_t>(k)])]);
            if (eq.is_zero()) return false;  // a vanishing partial: cone, singular
            if (eq.total_degree() == 0) chart_empty = true;  // never vanishes in this chart
            sys.equations.push_back(eq);
        }
        if (chart_empty) continue;
        MPolyC other = substitute(grad[static_cast<std::size_t>(spec.check)]);

        Rng r = rng.split(static_cast<std::uint64_t>(spec.fixed));
        auto sols = solve_total_degree(sys, {}, r);
        for (const auto& x : sols) {
            double xn = 1;
            for (const auto& v : x) xn = std::max(xn, std::abs(v));
            if (std::abs(other.eval(x)) < tol * xn * xn) return false;  // genuine singular point
        }
    }
    // the point missed by all three charts
    std::vector<CD> pt{CD(0, 0), CD(0, 0), CD(1, 0), CD(0, 0)};
    bool sing = true;
    for (const auto& g : grad)
        if (std::abs(g.eval(pt)) > tol) sing = false;
    return !sing;
}

double line_on_surface_residual(const CubicSurface& s, const ProjLine& l) {
    std::vector<CD> a(l.point_a.begin(), l.point_a.end());
    std::vector<CD> b(l.point_b.begin(), l.point_b.end());
    // normalize the spanning points so the residual scale is canonical
    double na = 0, nb = 0;
    for (const auto& c : a) na += std::norm(c);
    for (const auto& c : b) nb += std::norm(c);
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    for (auto& c : a) c /= na;
    for (auto& c : b) c /= nb;
    auto rest = restrict_form(s.form(), a, b);
    double m = 0;
    for (const auto& c : rest) m = std::max(m, std::abs(c));
    return m;
}

bool lines_meet(const ProjLine& a, const ProjLine& b, double tol) {
    double na = 0, nb = 0;
    for (const auto& c : a.plucker) na += std::norm(c);
    for (const auto& c : b.plucker) nb += std::norm(c);
    CD pair = plucker_pairing(a.plucker, b.plucker);
    return std::abs(pair) / std::sqrt(na * nb) < tol;
}

void validate_configuration(const LineConfiguration& cfg) {
    if (cfg.lines.size() != 27) throw invalid_input("configuration must contain 27 lines");
    const auto& adj = cfg.adjacency;
    if (adj.size() != 27) throw invalid_input("adjacency must be 27x27");
    for (std::size_t i = 0; i < 27; ++i) {
        if (adj[i][i]) throw invalid_input("adjacency has a nonzero diagonal");
        int deg = 0;
        for (std::size_t j = 0; j < 27; ++j) {
            if (adj[i][j] != adj[j][i]) throw invalid_input("adjacency is not symmetric");
            if (adj[i][j]) ++deg;
        }
        if (deg != 10) throw invalid_input("adjacency is not 10-regular");
    }
    // complement strongly regular (27, 16, 10, 8)
    for (std::size_t i = 0; i < 27; ++i)
        for (std::size_t j = i + 1; j < 27; ++j) {
            int common = 0;
            for (std::size_t k = 0; k < 27; ++k) {
                if (k == i || k == j) continue;
                bool ci = !adj[i][k], cj = !adj[j][k];
                if (ci && cj) ++common;
            }
            int want = adj[i][j] ? 8 : 10;  // complement edge iff !adj
            if (common != want) throw invalid_input("complement graph is not srg(27,16,10,8)");
        }
}

LineConfiguration lines_on_cubic(const CubicSurface& s, std::uint64_t seed) {
    if (!s.smoothness_checked && !surface_is_smooth(s))
        throw invalid_input("lines_on_cubic: surface is singular");
    Rng rng(seed, 0x11e5);

    std::vector<ProjLine> found;
    for (int ci = 0; ci < 4 && found.size() < 27; ++ci) {
        ParametricSystem sys = chart_line_system(kCharts[ci], &s.coeffs);
        Rng r = rng.split(static_cast<std::uint64_t>(ci));
        SolveStats stats;
        auto sols = solve_total_degree(sys, {}, r, {}, &stats);
        for (const auto& u : sols) {
            ProjLine l = chart_solution_line(kCharts[ci], u);
            if (line_on_surface_residual(s, l) < 1e-9) add_unique_line(found, l);
        }
    }
    if (found.size() != 27) {
        std::ostringstream os;
        os << "lines_on_cubic: found " << found.size() << " lines after all charts (expected 27)";
        throw numerical_failure(os.str());
    }
    sort_lines(found);
    LineConfiguration cfg;
    cfg.lines = std::move(found);
    cfg.adjacency = build_adjacency(cfg.lines);
    validate_configuration(cfg);
    return cfg;
}

// ---- lines from one: the conic-pencil construction -----------------------------

PencilResult pencil_lines(const CubicSurface& s, const ProjLine& l) {
    if (line_on_surface_residual(s, l) > 1e-9)
        throw invalid_input("pencil_lines: the line does not lie on the surface");

    // linear forms cutting the line: nullspace of the two spanning points
    Eigen::MatrixXcd pts(2, 4);
    for (int j = 0; j < 4; ++j) {
        pts(0, j) = l.point_a[static_cast<std::size_t>(j)];
        pts(1, j) = l.point_b[static_cast<std::size_t>(j)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pts, Eigen::ComputeFullV);
    Vec4 a1{}, a2{};
    for (int j = 0; j < 4; ++j) {
        a1[static_cast<std::size_t>(j)] = std::conj(svd.matrixV()(j, 2));
        a2[static_cast<std::size_t>(j)] = std::conj(svd.matrixV()(j, 3));
    }
    auto apply_form = [](const Vec4& f, const Vec4& x) {
        CD acc(0, 0);
        for (int i = 0; i < 4; ++i) acc += f[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        return acc;
    };

    // u with A2(u)=0, A1(u)=1 and v with A1(v)=0, A2(v)=1, both off the line
    auto pick_point = [&](const Vec4& zero_form, const Vec4& unit_form) {
        Eigen::MatrixXcd m(1, 4);
        for (int j = 0; j < 4; ++j) m(0, j) = zero_form[static_cast<std::size_t>(j)];
        Eigen::JacobiSVD<Eigen::MatrixXcd> ks(m, Eigen::ComputeFullV);
        Vec4 best{};
        double best_unit = -1;
        for (int c = 1; c < 4; ++c) {  // kernel columns
            Vec4 cand;
            for (int j = 0; j < 4; ++j) cand[static_cast<std::size_t>(j)] = ks.matrixV()(j, c);
            CD uval = apply_form(unit_form, cand);
            if (std::abs(uval) > best_unit) {
                best_unit = std::abs(uval);
                for (int j = 0; j < 4; ++j) best[static_cast<std::size_t>(j)] = cand[static_cast<std::size_t>(j)] / uval;
            }
        }
        if (best_unit <= 1e-12) throw degenerate_input("pencil", "no transverse point on the cutting plane");
        return best;
    };
    Vec4 u = pick_point(a2, a1);
    Vec4 v = pick_point(a1, a2);

    // S restricted to the plane of the pencil, in variables (m0,m1,m2,l1,l2)
    // with the plane point m0 P + m1 Q + m2 (l2 u + l1 v)
    MPolyC f = s.form();
    const int nv = 5;
    std::array<MPolyC, 4> coord;
    for (int i = 0; i < 4; ++i) {
        MPolyC c(nv);
        std::vector<int> e(nv, 0);
        e[0] = 1;
        c.add_term(e, l.point_a[static_cast<std::size_t>(i)]);
        e[0] = 0;
        e[1] = 1;
        c.add_term(e, l.point_b[static_cast<std::size_t>(i)]);
        e[1] = 0;
        e[2] = 1;
        e[4] = 1;
        c.add_term(e, u[static_cast<std::size_t>(i)]);
        e[4] = 0;
        e[3] = 1;
        c.add_term(e, v[static_cast<std::size_t>(i)]);
        coord[static_cast<std::size_t>(i)] = c;
    }
    MPolyC rest(nv);
    for (const auto& [e, c] : f.terms()) {
        MPolyC t = MPolyC::constant(nv, c);
        for (int vr = 0; vr < 4; ++vr)
            for (int k = 0; k < e[static_cast<std::size_t>(vr)]; ++k) t = t * coord[static_cast<std::size_t>(vr)];
        rest = rest + t;
    }

    // divide by m2 (the factor cutting the line itself) and read off the
    // residual conic's 3x3 matrix; entries are forms in (l1,l2)
    std::array<std::array<MPolyC, 3>, 3> mat;
    for (auto& row : mat)
        for (auto& entry : row) entry = MPolyC(2);
    double drop = 0, scale = 0;
    for (const auto& [e, c] : rest.terms()) {
        scale = std::max(scale, std::abs(c));
        if (e[2] == 0) {
            drop = std::max(drop, std::abs(c));  // must vanish: S contains the line
            continue;
        }
        std::vector<int> mu{e[0], e[1], e[2] - 1};
        int i = -1, j = -1;
        for (int k = 0; k < 3; ++k)
            for (int rep = 0; rep < mu[static_cast<std::size_t>(k)]; ++rep) (i < 0 ? i : j) = k;
        std::vector<int> le{e[3], e[4]};
        if (i == j) {
            mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].add_term(le, c);
        } else {
            mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].add_term(le, c / 2.0);
            mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].add_term(le, c / 2.0);
        }
    }
    if (scale > 0 && drop > 1e-7 * scale)
        throw numerical_failure("pencil_lines: restriction to the pencil plane does not contain the line");

    // P(l1,l2) = det of the conic matrix: homogeneous of degree exactly 5
    auto det = mat[0][0] * (mat[1][1] * mat[2][2] - mat[1][2] * mat[2][1]) -
               mat[0][1] * (mat[1][0] * mat[2][2] - mat[1][2] * mat[2][0]) +
               mat[0][2] * (mat[1][0] * mat[2][1] - mat[1][1] * mat[2][0]);
    std::vector<CD> quintic(6, CD(0, 0));
    for (const auto& [e, c] : det.terms()) {
        if (e[0] + e[1] != 5) throw numerical_failure("pencil_lines: discriminant is not homogeneous quintic");
        quintic[static_cast<std::size_t>(e[1])] += c;
    }
    double qm = max_mod(quintic);
    if (qm == 0) throw degenerate_input("pencil", "identically vanishing pencil discriminant");
    for (auto& c : quintic) c /= qm;

    // rotate the pencil parameter by a fixed generic SL2 element so no root
    // sits at chart infinity (the Fermat surface puts roots there)
    const CD ra(1, 0), rb(0.3719, 0.2107), rc(-0.2893, 0.1117), rd(1, 0);
    std::vector<CD> rot(6, CD(0, 0));
    for (int k = 0; k <= 5; ++k) {
        // q[k] (a u + b v)^{5-k} (c u + d v)^k
        std::vector<CD> term{quintic[static_cast<std::size_t>(k)]};
        for (int i = 0; i < 5 - k; ++i) term = binary_mul(term, {ra, rb});
        for (int i = 0; i < k; ++i) term = binary_mul(term, {rc, rd});
        for (int i = 0; i <= 5; ++i) rot[static_cast<std::size_t>(i)] += term[static_cast<std::size_t>(i)];
    }
    if (std::abs(rot[0]) < 1e-9 * max_mod(rot))
        throw degenerate_input("pencil", "discriminant degenerates after the generic rotation");

    // five roots in the rotated chart v = 1, mapped back through the rotation
    std::vector<CD> asc(6);
    for (int k = 0; k <= 5; ++k) asc[static_cast<std::size_t>(5 - k)] = rot[static_cast<std::size_t>(k)];
    auto rts = roots(PolyC(asc), 1e-10);
    std::vector<std::array<CD, 2>> lroots;  // projective (l1, l2)
    for (const auto& u : rts.roots) lroots.push_back({ra * u + rb, rc * u + rd});
    for (std::size_t i = 0; i < lroots.size(); ++i)
        for (std::size_t j = i + 1; j < lroots.size(); ++j) {
            Vec3 x{lroots[i][0], lroots[i][1], CD(0, 0)}, y{lroots[j][0], lroots[j][1], CD(0, 0)};
            if (projective_distance3(x, y) < 1e-7) {
                std::ostringstream os;
                os << "repeated discriminant root near (" << lroots[i][0] << ":" << lroots[i][1] << ")";
                throw degenerate_input("pencil", os.str());
            }
        }

    PencilResult out;
    out.quintic = quintic;
    for (const auto& lam2 : lroots) {
        std::vector<CD> at{lam2[0], lam2[1]};
        Mat3 m{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(at);
        ConicSplit split = split_conic(m);
        if (split.residual > 1e-6)
            throw numerical_failure("pencil_lines: conic does not split into two lines at a discriminant root");
        // B2(l1,l2) = l2 * u + l1 * v at the discriminant root
        Vec4 b2{};
        for (int i = 0; i < 4; ++i)
            b2[static_cast<std::size_t>(i)] =
                lam2[1] * u[static_cast<std::size_t>(i)] + lam2[0] * v[static_cast<std::size_t>(i)];
        auto to_space = [&](const Vec3& mu) {
            Vec4 x{};
            for (int i = 0; i < 4; ++i)
                x[static_cast<std::size_t>(i)] = mu[0] * l.point_a[static_cast<std::size_t>(i)] +
                                                 mu[1] * l.point_b[static_cast<std::size_t>(i)] +
                                                 mu[2] * b2[static_cast<std::size_t>(i)];
            return unit4(x);
        };
        for (const Vec3& w : {split.p, split.q}) {
            auto [m1, m2] = points_on_line(w);
            ProjLine nl = line_through(to_space(m1), to_space(m2));
            if (line_on_surface_residual(s, nl) > 1e-8)
                throw numerical_failure("pencil_lines: split line is not on the surface");
            out.lines.push_back(nl);
        }
    }
    return out;
}

// ---- blow-up of six points ------------------------------------------------------

namespace {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// exact kernel basis via Gauss-Jordan
std::vector<RatVec> rat_kernel(RatMat m, std::size_t cols) {
    std::size_t rows = m.size();
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        Rat inv = 1 / m[r][c];
        for (std::size_t j = 0; j < cols; ++j) m[r][j] = Rat(m[r][j] * inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = Rat(m[i][j] - f * m[r][j]);
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<RatVec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        RatVec v(cols, Rat(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            v[static_cast<std::size_t>(pivot_col[i])] = Rat(-m[i][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

Rat det3_rat(const std::array<RatPoint, 3>& p) {
    return p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
           p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
           p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
}

RatVec conic_monomials(const RatPoint& z) {
    const Rat &x = z[0], &y = z[1], &w = z[2];
    return {Rat(x * x), Rat(x * y), Rat(y * y), Rat(x * w), Rat(y * w), Rat(w * w)};
}

// binary form over Q: coefficient of u^{d-k} v^k at index k
RatVec binary_mul_q(const RatVec& a, const RatVec& b) {
    RatVec out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = Rat(out[i + j] + a[i] * b[j]);
    return out;
}

// exact division by (a u + b v); the remainder must vanish
RatVec binary_div_linear_q(const RatVec& c, const Rat& a, const Rat& b) {
    std::size_t d = c.size() - 1;
    RatVec q(d, Rat(0));
    if (sgn(a) != 0) {
        q[0] = Rat(c[0] / a);
        for (std::size_t k = 1; k < d; ++k) q[k] = Rat((c[k] - q[k - 1] * b) / a);
        Rat rem = Rat(c[d] - q[d - 1] * b);
        if (sgn(rem) != 0) throw numerical_failure("blowup: inexact deflation of a conic image");
    } else {
        if (sgn(c[0]) != 0) throw numerical_failure("blowup: inexact deflation of a conic image");
        for (std::size_t k = 0; k < d; ++k) q[k] = Rat(c[k + 1] / b);
    }
    return q;
}

CD rat_cd(const Rat& q) { return to_cd(q); }

}  // namespace

std::pair<CubicSurface, LineConfiguration> blowup_cubic(const std::array<RatPoint, 6>& points) {
    // genericity gates, exact
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            for (int k = j + 1; k < 6; ++k)
                if (sgn(det3_rat({points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)],
                                  points[static_cast<std::size_t>(k)]})) == 0) {
                    std::ostringstream os;
                    os << "points " << i + 1 << "," << j + 1 << "," << k + 1 << " are collinear";
                    throw degenerate_input("blowup", os.str());
                }
    {
        RatMat m;
        for (const auto& z : points) m.push_back(conic_monomials(z));
        auto ker = rat_kernel(m, 6);
        if (!ker.empty()) throw degenerate_input("blowup", "all six points lie on a conic");
    }

    // the 4-dimensional space of cubics through the six points
    auto cubmons = monomial_exponents(3, 3);
    RatMat km;
    for (const auto& z : points) {
        RatVec row;
        for (const auto& e : cubmons) {
            Rat v(1);
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k < e[static_cast<std::size_t>(c)]; ++k) v = Rat(v * z[static_cast<std::size_t>(c)]);
            row.push_back(v);
        }
        km.push_back(std::move(row));
    }
    auto basis = rat_kernel(km, 10);
    if (basis.size() != 4) throw degenerate_input("blowup", "cubics through the points do not form a web");

    std::array<MPolyQ, 4> fq;
    for (int k = 0; k < 4; ++k) {
        MPolyQ f(3);
        for (std::size_t t = 0; t < cubmons.size(); ++t) f.add_term(cubmons[t], basis[static_cast<std::size_t>(k)][t]);
        fq[static_cast<std::size_t>(k)] = f;
    }
    auto phi = [&](const std::vector<CD>& z) {
        Vec4 w;
        MPolyC fc[4] = {to_complex(fq[0]), to_complex(fq[1]), to_complex(fq[2]), to_complex(fq[3])};
        for (int k = 0; k < 4; ++k) w[static_cast<std::size_t>(k)] = fc[k].eval(z);
        return w;
    };

    // implicit cubic by least squares over sampled image points
    Rng rng(0xB10Ful);
    const int nsamp = 32;
    Eigen::MatrixXcd fit(nsamp, 20);
    auto mons4 = monomial_exponents(3, 4);
    for (int srow = 0; srow < nsamp; ++srow) {
        std::vector<CD> z{CD(1, 0), rng.next_complex(2.0), rng.next_complex(2.0)};
        Vec4 w = phi(z);
        double wn = 0;
        for (const auto& c : w) wn = std::max(wn, std::abs(c));
        for (int col = 0; col < 20; ++col) {
            CD v(1, 0);
            for (int c = 0; c < 4; ++c)
                for (int k = 0; k < mons4[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)]; ++k)
                    v *= w[static_cast<std::size_t>(c)] / wn;
            fit(srow, col) = v;
        }
    }
    // column scaling keeps the singular-value cutoff meaningful
    Eigen::VectorXd colscale(20);
    for (int col = 0; col < 20; ++col) {
        double m = fit.col(col).cwiseAbs().maxCoeff();
        colscale(col) = m > 0 ? m : 1.0;
        fit.col(col) /= colscale(col);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fit, Eigen::ComputeFullV);
    if (svd.singularValues()(19) > 1e-8 * svd.singularValues()(0) ||
        svd.singularValues()(18) < 1e-8 * svd.singularValues()(0))
        throw degenerate_input("blowup", "implicit cubic fit is not exact-rank 19 at the cutoff");
    std::vector<CD> scoef(20);
    for (int col = 0; col < 20; ++col)
        scoef[static_cast<std::size_t>(col)] = std::conj(svd.matrixV()(col, 19)) / colscale(col);
    CubicSurface surf = make_surface(std::move(scoef));

    // the 27 labeled lines, in schlafli label order
    std::vector<ProjLine> lines;
    std::array<MPolyQ, 4> grad[3];
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 4; ++k) grad[c][static_cast<std::size_t>(k)] = fq[static_cast<std::size_t>(k)].ddx(c);

    auto complement_dirs = [](const RatPoint& z) -> std::pair<RatPoint, RatPoint> {
        // two directions independent of z
        int nz = 0;
        while (sgn(z[static_cast<std::size_t>(nz)]) == 0) ++nz;
        RatPoint d1{}, d2{};
        int a = (nz + 1) % 3, b = (nz + 2) % 3;
        d1[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(nz)];
        d1[static_cast<std::size_t>(nz)] = Rat(-z[static_cast<std::size_t>(a)]);
        d2[static_cast<std::size_t>(b)] = z[static_cast<std::size_t>(nz)];
        d2[static_cast<std::size_t>(nz)] = Rat(-z[static_cast<std::size_t>(b)]);
        return {d1, d2};
    };

    // a_i: exceptional lines via the gradient map
    for (int i = 0; i < 6; ++i) {
        auto [d1, d2] = complement_dirs(points[static_cast<std::size_t>(i)]);
        Vec4 pa{}, pb{};
        std::vector<Rat> zi(points[static_cast<std::size_t>(i)].begin(), points[static_cast<std::size_t>(i)].end());
        for (int k = 0; k < 4; ++k) {
            Rat va(0), vb(0);
            for (int c = 0; c < 3; ++c) {
                Rat g = grad[c][static_cast<std::size_t>(k)].eval(zi);
                va = Rat(va + g * d1[static_cast<std::size_t>(c)]);
                vb = Rat(vb + g * d2[static_cast<std::size_t>(c)]);
            }
            pa[static_cast<std::size_t>(k)] = rat_cd(va);
            pb[static_cast<std::size_t>(k)] = rat_cd(vb);
        }
        lines.push_back(line_through(unit4(pa), unit4(pb)));
    }

    // b_i: images of the conics through the complementary five points
    for (int i = 0; i < 6; ++i) {
        RatMat cm;
        std::vector<int> others;
        for (int m = 0; m < 6; ++m)
            if (m != i) {
                cm.push_back(conic_monomials(points[static_cast<std::size_t>(m)]));
                others.push_back(m);
            }
        auto ker = rat_kernel(cm, 6);
        if (ker.size() != 1) throw degenerate_input("blowup", "five-point conic is not unique");
        const RatVec& q = ker[0];  // x^2, xy, y^2, xz, yz, z^2
        auto qmat = [&](int r, int c) -> Rat {
            static const int idx[3][3] = {{0, 1, 3}, {1, 2, 4}, {3, 4, 5}};
            Rat v = q[static_cast<std::size_t>(idx[r][c])];
            return (r == c) ? v : Rat(v / 2);
        };
        int j = others.front();
        const RatPoint& zj = points[static_cast<std::size_t>(j)];
        auto [d1, d2] = complement_dirs(zj);
        // c(u,v) = q(d) z_j - 2 (z_j^T Q d) d with d = u d1 + v d2: coordinates
        // are exact binary quadratics in (u,v)
        auto qform = [&](const RatPoint& x, const RatPoint& y) {
            Rat acc(0);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) acc = Rat(acc + x[static_cast<std::size_t>(r)] * qmat(r, c) * y[static_cast<std::size_t>(c)]);
            return acc;
        };
        Rat q11 = qform(d1, d1), q12 = qform(d1, d2), q22 = qform(d2, d2);
        Rat l1 = qform(zj, d1), l2 = qform(zj, d2);
        std::array<RatVec, 3> coord;  // binary quadratic per projective coordinate
        for (int c = 0; c < 3; ++c) {
            // q(d) = q11 u^2 + 2 q12 uv + q22 v^2 ; L(d) = l1 u + l2 v
            RatVec qd{q11, Rat(2 * q12), q22};
            RatVec t(3, Rat(0));
            for (int k = 0; k < 3; ++k) t[static_cast<std::size_t>(k)] = Rat(qd[static_cast<std::size_t>(k)] * zj[static_cast<std::size_t>(c)]);
            // minus 2 L(d) d
            t[0] = Rat(t[0] - 2 * l1 * d1[static_cast<std::size_t>(c)]);
            t[1] = Rat(t[1] - 2 * (l1 * d2[static_cast<std::size_t>(c)] + l2 * d1[static_cast<std::size_t>(c)]));
            t[2] = Rat(t[2] - 2 * l2 * d2[static_cast<std::size_t>(c)]);
            coord[static_cast<std::size_t>(c)] = t;
        }
        // images under the cubics: exact binary sextics
        std::array<RatVec, 4> img;
        for (int k = 0; k < 4; ++k) {
            RatVec acc(7, Rat(0));
            for (const auto& [e, cf] : fq[static_cast<std::size_t>(k)].terms()) {
                RatVec t{cf};
                for (int c = 0; c < 3; ++c)
                    for (int rep = 0; rep < e[static_cast<std::size_t>(c)]; ++rep) t = binary_mul_q(t, coord[static_cast<std::size_t>(c)]);
                for (std::size_t s2 = 0; s2 < t.size(); ++s2) acc[s2] = Rat(acc[s2] + t[s2]);
            }
            img[static_cast<std::size_t>(k)] = acc;
        }
        // deflate the five known parameter values: z_j at L(d)=0 and the others
        std::vector<std::pair<Rat, Rat>> params;  // (a, b) meaning divisor a u + b v
        params.emplace_back(l1, l2);
        for (int m : others) {
            if (m == j) continue;
            // solve u d1 + v d2 + w z_j = z_m exactly (Cramer)
            const RatPoint& zm = points[static_cast<std::size_t>(m)];
            Rat det = det3_rat({d1, d2, zj});
            Rat du = Rat(det3_rat({zm, d2, zj}) / det);
            Rat dv = Rat(det3_rat({d1, zm, zj}) / det);
            // parameter (du : dv) corresponds to divisor dv u - du v
            params.emplace_back(dv, Rat(-du));
        }
        for (int k = 0; k < 4; ++k) {
            RatVec cur = img[static_cast<std::size_t>(k)];
            for (const auto& [a, b] : params) cur = binary_div_linear_q(cur, a, b);
            img[static_cast<std::size_t>(k)] = cur;  // linear now
        }
        Vec4 pa{}, pb{};
        for (int k = 0; k < 4; ++k) {
            pa[static_cast<std::size_t>(k)] = rat_cd(img[static_cast<std::size_t>(k)][0]);
            pb[static_cast<std::size_t>(k)] = rat_cd(img[static_cast<std::size_t>(k)][1]);
        }
        lines.push_back(line_through(unit4(pa), unit4(pb)));
    }

    // c_ij: images of the lines through pairs of points
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            Vec4 pa{}, pb{};
            for (int k = 0; k < 4; ++k) {
                // f_k(s z_i + t z_j): binary cubic with s^3 and t^3 exactly zero
                RatVec acc(4, Rat(0));
                for (const auto& [e, cf] : fq[static_cast<std::size_t>(k)].terms()) {
                    RatVec t{cf};
                    for (int c = 0; c < 3; ++c)
                        for (int rep = 0; rep < e[static_cast<std::size_t>(c)]; ++rep)
                            t = binary_mul_q(t, {points[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)],
                                                 points[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]});
                    for (std::size_t s2 = 0; s2 < t.size(); ++s2) acc[s2] = Rat(acc[s2] + t[s2]);
                }
                if (sgn(acc[0]) != 0 || sgn(acc[3]) != 0)
                    throw numerical_failure("blowup: pair-line image is not cut by st");
                pa[static_cast<std::size_t>(k)] = rat_cd(acc[1]);
                pb[static_cast<std::size_t>(k)] = rat_cd(acc[2]);
            }
            lines.push_back(line_through(unit4(pa), unit4(pb)));
        }

    LineConfiguration cfg;
    cfg.lines = std::move(lines);
    cfg.labels.resize(27);
    for (int i = 0; i < 27; ++i) cfg.labels[static_cast<std::size_t>(i)] = i;
    cfg.adjacency = build_adjacency(cfg.lines);
    validate_configuration(cfg);
    return {surf, cfg};
}

DoubleSixes double_sixes(const LineConfiguration& cfg) {
    validate_configuration(cfg);
    const auto& adj = cfg.adjacency;
    DoubleSixes out;

    // all 6-sets of pairwise skew lines
    std::array<int, 6> cur{};
    std::function<void(int, int)> dfs = [&](int start, int depth) {
        if (depth == 6) {
            std::array<int, 6> s = cur;
            out.sixers.push_back(s);
            return;
        }
        for (int v = start; v < 27; ++v) {
            bool ok = true;
            for (int k = 0; k < depth; ++k)
                if (adj[static_cast<std::size_t>(cur[static_cast<std::size_t>(k)])][static_cast<std::size_t>(v)]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur[static_cast<std::size_t>(depth)] = v;
            dfs(v + 1, depth + 1);
        }
    };
    dfs(0, 0);

    // pair each sixer with its unique partner: the lines meeting exactly 5
    std::set<std::array<int, 12>> seen;
    for (const auto& six : out.sixers) {
        std::vector<int> partner;
        for (int v = 0; v < 27; ++v) {
            if (std::find(six.begin(), six.end(), v) != six.end()) continue;
            int meets = 0;
            for (int s : six)
                if (adj[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)]) ++meets;
            if (meets == 5) partner.push_back(v);
        }
        if (partner.size() != 6) throw numerical_failure("double_sixes: partner sixer not found");
        DoubleSix ds;
        ds.a = six;
        std::copy(partner.begin(), partner.end(), ds.b.begin());
        std::array<int, 12> key;
        std::copy(ds.a.begin(), ds.a.end(), key.begin());
        std::copy(ds.b.begin(), ds.b.end(), key.begin() + 6);
        std::array<int, 12> alt;
        std::copy(ds.b.begin(), ds.b.end(), alt.begin());
        std::copy(ds.a.begin(), ds.a.end(), alt.begin() + 6);
        if (alt < key) key = alt;
        if (seen.insert(key).second) out.pairs.push_back(ds);
    }
    return out;
}

LineConfiguration lines_from_one(const CubicSurface& s, const ProjLine& l) {
    std::vector<ProjLine> found;
    add_unique_line(found, l);
    std::deque<std::size_t> queue{0};
    int passes = 0;
    while (!queue.empty() && found.size() < 27 && passes < 40) {
        std::size_t idx = queue.front();
        queue.pop_front();
        ++passes;
        auto res = pencil_lines(s, found[idx]);
        for (const auto& nl : res.lines) {
            std::size_t before = found.size();
            add_unique_line(found, nl);
            if (found.size() > before) queue.push_back(found.size() - 1);
        }
    }
    if (found.size() != 27) {
        std::ostringstream os;
        os << "lines_from_one: collected " << found.size() << " lines (expected 27)";
        throw numerical_failure(os.str());
    }
    sort_lines(found);
    LineConfiguration cfg;
    cfg.lines = std::move(found);
    cfg.adjacency = build_adjacency(cfg.lines);
    validate_configuration(cfg);
    return cfg;
}

}  // namespace rdlab
