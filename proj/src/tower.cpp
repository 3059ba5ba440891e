#include "rdlab/tower.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace rdlab {
namespace {

// ---- apply via Newton power sums -------------------------------------------

template <typename T>
Poly<T> apply_impl(const Poly<T>& p, const TschirnhausMap<T>& t) {
    const int n = p.degree();
    if (n < 1) throw invalid_input("apply: degree >= 1 required");
    if (!p.is_monic()) throw invalid_input("apply: monic polynomial required");
    if (t.n != n || static_cast<int>(t.b.size()) != n)
        throw invalid_input("apply: transformation degree does not match the polynomial");

    // power sums of p, s[j] = sum x_i^j with s[0] = n
    std::vector<T> s(static_cast<std::size_t>(n), scalar_traits<T>::zero());
    s[0] = T(n);
    if (n >= 2) {
        auto ps = power_sums(p, n - 1);
        for (int j = 1; j < n; ++j) s[static_cast<std::size_t>(j)] = ps[static_cast<std::size_t>(j - 1)];
    }

    Poly<T> u = divmod(t.as_poly(), p).second;  // T(x) reduced mod p
    Poly<T> uk = Poly<T>::constant(scalar_traits<T>::one());
    std::vector<T> tsums(static_cast<std::size_t>(n), scalar_traits<T>::zero());
    for (int k = 1; k <= n; ++k) {
        uk = divmod(uk * u, p).second;
        T acc = scalar_traits<T>::zero();
        for (int j = 0; j < n; ++j) acc = acc + uk[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(j)];
        tsums[static_cast<std::size_t>(k - 1)] = acc;
    }
    return from_power_sums(tsums, n);
}

// ---- inverse recipe via a normalized pseudo-remainder sequence --------------
//
// Elements of C[y][x] are stored as x-coefficient vectors of y-polynomials.
// The recipe x = -v(y)/u(y) comes from the degree-1 element of the PRS of
// p(x) and y - T(x); rescaling every remainder keeps the float chain stable
// (the degree-1 root is scale invariant).

using XPoly = std::vector<PolyC>;

int xdeg(const XPoly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (!a[static_cast<std::size_t>(i)].is_zero()) return i;
    return -1;
}

double xmax(const XPoly& a) {
    double m = 0;
    for (const auto& q : a)
        for (const auto& c : q.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

void xscale(XPoly& a, double f) {
    for (auto& q : a) q = q * CD(f, 0);
}

void xtrim(XPoly& a, double rel) {
    double m = xmax(a);
    if (m > 0)
        for (auto& q : a) {
            std::vector<CD> cs = q.coeffs();
            for (auto& c : cs)
                if (std::abs(c) <= rel * m) c = CD(0, 0);
            q = PolyC(std::move(cs));
        }
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

// r = lc(b)*r - lc(r)*x^(dr-db)*b, repeated until deg r < deg b
XPoly prem(XPoly r, const XPoly& b) {
    int db = xdeg(b);
    const PolyC& lb = b[static_cast<std::size_t>(db)];
    int guard = 0;
    while (xdeg(r) >= db && guard++ < 64) {
        int dr = xdeg(r);
        PolyC lr = r[static_cast<std::size_t>(dr)];
        XPoly rr(static_cast<std::size_t>(dr), PolyC());
        for (int i = 0; i < dr; ++i) {
            PolyC v = r[static_cast<std::size_t>(i)] * lb;
            int j = i - (dr - db);
            if (j >= 0) v = v - b[static_cast<std::size_t>(j)] * lr;
            rr[static_cast<std::size_t>(i)] = v;
        }
        r = std::move(rr);
        xtrim(r, 1e-13);
    }
    return r;
}

ExprPtr substitution_inverse(const PolyC& p, const TschirnC& t) {
    const int n = p.degree();
    XPoly a(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = PolyC::constant(p[static_cast<std::size_t>(i)]);
    PolyC tp = t.as_poly();
    XPoly b(std::max<std::size_t>(tp.coeffs().size(), 1));
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = PolyC::constant(-tp[i]);
    b[0] = b[0] + PolyC::x();  // y - T(x)
    xtrim(a, 0.0);
    xtrim(b, 0.0);
    if (xdeg(b) < 1) return nullptr;

    while (xdeg(b) > 1) {
        XPoly r = prem(a, b);
        double m = xmax(r);
        if (m == 0 || xdeg(r) < 0) return nullptr;
        xscale(r, 1.0 / m);
        xtrim(r, 1e-13);
        a = b;
        b = std::move(r);
    }
    if (xdeg(b) != 1) return nullptr;
    // x = -b0(y)/b1(y)
    return Expr::div(Expr::neg(Expr::horner(b[0])), Expr::horner(b[1]));
}

// ---- helpers -----------------------------------------------------------------

double coeff_scale(const PolyC& p) {
    double m = 0;
    for (const auto& c : p.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

PolyC y_minus_t(const TschirnC& t, CD y) {
    PolyC q = -t.as_poly();
    CD c0 = q[0] + y;
    q.mutable_coeff(0) = c0;
    q.strip();
    return q;
}

double backward_residual(const PolyC& p, CD x) {
    double mag = 0, zp = 1, ax = std::abs(x);
    for (int k = 0; k <= p.degree(); ++k) {
        mag += std::abs(p[static_cast<std::size_t>(k)]) * zp;
        zp *= ax;
    }
    return std::abs(p.eval(x)) / std::max(1.0, mag);
}

int root_multiplicity(const PolyC& p, CD r, double tol) {
    int m = 0;
    PolyC d = p;
    while (d.degree() >= 0 && backward_residual(d, r) < tol) {
        ++m;
        if (d.degree() == 0) break;
        d = d.derivative();
    }
    return std::max(m, 1);
}

// roots of the next stage scale by c
PolyC scale_roots(const PolyC& q, CD c) {
    const int n = q.degree();
    std::vector<CD> asc(static_cast<std::size_t>(n) + 1);
    CD f(1, 0);
    for (int k = n; k >= 0; --k) {
        asc[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(k)] * f;
        f *= c;
    }
    return PolyC(std::move(asc));
}

TowerStep radical_step(const PolyC& adjoined, int degree) {
    auto rs = roots(adjoined, 1e-12);
    TowerStep st;
    st.kind = StepKind::RadicalAdjunction;
    st.radical_degree = degree;
    st.branch = 0;
    st.adjoined = adjoined;
    st.fwd = {rs.roots.front()};
    return st;
}

TowerStep substitution_step(const PolyC& p, const TschirnC& t) {
    TowerStep st;
    st.kind = StepKind::TschirnhausSubstitution;
    st.fwd = t.b;
    st.inverse = substitution_inverse(p, t);
    st.inverse_by_gcd = (st.inverse == nullptr);
    return st;
}

// ---- quadratic Tschirnhaus conditioning (kill_two) ---------------------------

struct KillTwoPlan {
    bool already = false;
    PolyC adjoined;  // parameter quadratic
    CD tval;         // chosen branch
    std::array<CD, 3> b;
};

// generic conditioning over any scalar type; zero tests through `zer`
template <typename T, typename ZeroTest>
KillTwoPlan kill_two_plan(const Poly<T>& p, ZeroTest zer) {
    const int n = p.degree();
    if (n < 3) throw invalid_input("kill_two: degree >= 3 required");
    if (!p.is_monic()) throw invalid_input("kill_two: monic polynomial required");

    KillTwoPlan plan;
    if (zer(p[static_cast<std::size_t>(n - 1)]) && zer(p[static_cast<std::size_t>(n - 2)])) {
        plan.already = true;
        return plan;
    }
    auto s = power_sums(p, 4);
    T s1 = s[0], s2 = s[1], s3 = s[2], s4 = s[3];
    T alpha = -s2 / T(n), beta = -s1 / T(n);
    T A = s4 + alpha * alpha * T(n) + T(2) * alpha * s2;
    T B = s3 + alpha * beta * T(n) + beta * s2 + alpha * s1;  // half the cross term
    T C = s2 + beta * beta * T(n) + T(2) * beta * s1;
    if (zer(A) && zer(B) && zer(C))
        throw degenerate_input("kill_two: conditioning quadratic",
                               "all coefficients of the parameter quadratic vanish");

    auto cd = [](const T& v) { return to_cd(v); };
    CD a = cd(A), b2 = cd(B), c = cd(C), al = cd(alpha), be = cd(beta);
    if (!zer(C)) {
        // b0 = 1, solve C t^2 + 2B t + A for t = b1
        plan.adjoined = PolyC(std::vector<CD>{a, CD(2, 0) * b2, c});
        auto rs = roots(plan.adjoined, 1e-12);
        plan.tval = rs.roots.front();
        plan.b = {CD(1, 0), plan.tval, al + be * plan.tval};
    } else if (!zer(A)) {
        // b1 = 1, solve A u^2 + 2B u + C for u = b0
        plan.adjoined = PolyC(std::vector<CD>{c, CD(2, 0) * b2, a});
        auto rs = roots(plan.adjoined, 1e-12);
        plan.tval = rs.roots.front();
        plan.b = {plan.tval, CD(1, 0), al * plan.tval + be};
    } else {
        // A = C = 0, B != 0: the quadratic is 2B t; branch t = 0 (b0 = 1, b1 = 0)
        plan.adjoined = PolyC(std::vector<CD>{CD(0, 0), CD(2, 0) * b2});
        plan.tval = CD(0, 0);
        plan.b = {CD(1, 0), CD(0, 0), al};
    }
    return plan;
}

SolutionTower kill_two_from_plan(const PolyC& pc, const KillTwoPlan& plan, double tol) {
    SolutionTower tw;
    tw.source = pc;
    if (plan.already) {
        tw.target = pc;
        return tw;
    }
    const int n = pc.degree();
    TschirnC t;
    t.n = n;
    t.b.assign(static_cast<std::size_t>(n), CD(0, 0));
    t.b[static_cast<std::size_t>(n - 3)] = plan.b[0];
    t.b[static_cast<std::size_t>(n - 2)] = plan.b[1];
    t.b[static_cast<std::size_t>(n - 1)] = plan.b[2];

    TowerStep rad = radical_step(plan.adjoined, 2);
    rad.fwd = {plan.tval};
    tw.steps.push_back(rad);
    tw.steps.push_back(substitution_step(pc, t));
    tw.target = apply_tschirnhaus(pc, t);

    double sc = std::max(1.0, coeff_scale(tw.target));
    if (std::abs(tw.target[static_cast<std::size_t>(n - 1)]) > tol * sc ||
        std::abs(tw.target[static_cast<std::size_t>(n - 2)]) > tol * sc) {
        std::ostringstream os;
        os << "kill_two: residual coefficients "
           << std::abs(tw.target[static_cast<std::size_t>(n - 1)]) << ", "
           << std::abs(tw.target[static_cast<std::size_t>(n - 2)]) << " exceed tolerance";
        throw numerical_failure(os.str());
    }
    // snap the killed coefficients
    tw.target.mutable_coeff(static_cast<std::size_t>(n - 1)) = CD(0, 0);
    tw.target.mutable_coeff(static_cast<std::size_t>(n - 2)) = CD(0, 0);
    tw.target.strip();
    return tw;
}

// ---- symmetric congruence diagonalization ------------------------------------

// P^T M P = diag(d); pivot policy per scalar mode (first nonzero for exact,
// largest magnitude for float).
template <typename T, typename ZeroTest>
void diag_congruence(std::vector<std::vector<T>> M, std::vector<std::vector<T>>& P, std::vector<T>& d,
                     ZeroTest zer, bool pick_largest) {
    const std::size_t k = M.size();
    P.assign(k, std::vector<T>(k, scalar_traits<T>::zero()));
    for (std::size_t i = 0; i < k; ++i) P[i][i] = scalar_traits<T>::one();

    auto add_col = [&](std::size_t dst, std::size_t src, const T& f) {
        // col_dst += f * col_src as a congruence (rows too)
        for (std::size_t r = 0; r < k; ++r) M[r][dst] = M[r][dst] + f * M[r][src];
        for (std::size_t c = 0; c < k; ++c) M[dst][c] = M[dst][c] + f * M[src][c];
        for (std::size_t r = 0; r < k; ++r) P[r][dst] = P[r][dst] + f * P[r][src];
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t r = 0; r < k; ++r) std::swap(M[r][a], M[r][b]);
        for (std::size_t c = 0; c < k; ++c) std::swap(M[a][c], M[b][c]);
        for (std::size_t r = 0; r < k; ++r) std::swap(P[r][a], P[r][b]);
    };

    for (std::size_t i = 0; i < k; ++i) {
        // choose a nonzero diagonal pivot
        std::size_t piv = i;
        if (pick_largest) {
            for (std::size_t j = i + 1; j < k; ++j)
                if (scalar_traits<T>::magnitude(M[j][j]) > scalar_traits<T>::magnitude(M[piv][piv])) piv = j;
        } else {
            while (piv < k && zer(M[piv][piv])) ++piv;
        }
        if (piv < k && !zer(M[piv][piv])) {
            if (piv != i) swap_cols(i, piv);
        } else {
            // all remaining diagonal entries vanish; bring in an off-diagonal one
            bool fixed = false;
            for (std::size_t j = i + 1; j < k && !fixed; ++j)
                if (!zer(M[i][j])) {
                    add_col(i, j, scalar_traits<T>::one());
                    fixed = true;
                }
            if (!fixed) {
                d.assign(k, scalar_traits<T>::zero());
                for (std::size_t j = 0; j < k; ++j) d[j] = M[j][j];
                throw degenerate_input("quadric diagonalization", "rank deficiency during elimination");
            }
        }
        for (std::size_t j = i + 1; j < k; ++j) {
            if (zer(M[i][j])) continue;
            T f = -M[i][j] / M[i][i];
            add_col(j, i, f);
        }
    }
    d.assign(k, scalar_traits<T>::zero());
    for (std::size_t j = 0; j < k; ++j) d[j] = M[j][j];
}

// ---- Bring-Hamilton core ------------------------------------------------------

struct BHExactFront {
    std::vector<CD> s;  // power sums s_0..s_12
};

// s2(y) as a quadratic form on the hyperplane s1(y)=0
template <typename T>
std::vector<std::vector<T>> bh_quadric(const std::vector<T>& s, int n,
                                       std::vector<std::vector<T>>& W) {
    W.assign(5, std::vector<T>(4, scalar_traits<T>::zero()));
    for (int j = 0; j < 4; ++j) {
        W[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = scalar_traits<T>::one();
        W[4][static_cast<std::size_t>(j)] = -s[static_cast<std::size_t>(4 - j)] / T(n);
    }
    std::vector<std::vector<T>> S(5, std::vector<T>(5, scalar_traits<T>::zero()));
    for (int j = 0; j < 5; ++j)
        for (int kk = 0; kk < 5; ++kk) S[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk)] = s[static_cast<std::size_t>(8 - j - kk)];
    // M = W^T S W
    std::vector<std::vector<T>> M(4, std::vector<T>(4, scalar_traits<T>::zero()));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            T acc = scalar_traits<T>::zero();
            for (int j = 0; j < 5; ++j)
                for (int kk = 0; kk < 5; ++kk)
                    acc = acc + W[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)] *
                                    S[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk)] *
                                    W[static_cast<std::size_t>(kk)][static_cast<std::size_t>(b)];
            M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
        }
    return M;
}

template <typename T>
std::vector<T> full_power_sums(const Poly<T>& p, int m) {
    std::vector<T> s(static_cast<std::size_t>(m) + 1, scalar_traits<T>::zero());
    s[0] = T(p.degree());
    auto ps = power_sums(p, m);
    for (int j = 1; j <= m; ++j) s[static_cast<std::size_t>(j)] = ps[static_cast<std::size_t>(j - 1)];
    return s;
}

CD eval_s3(const std::array<CD, 5>& b, const std::vector<CD>& s) {
    CD acc(0, 0);
    for (int j = 0; j < 5; ++j)
        for (int kk = 0; kk < 5; ++kk)
            for (int l = 0; l < 5; ++l)
                acc += b[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(kk)] *
                       b[static_cast<std::size_t>(l)] * s[static_cast<std::size_t>(12 - j - kk - l)];
    return acc;
}

// d/dt s3(a + t b) = 3 * sym(a+tb, a+tb, b)
CD eval_s3_dir(const std::array<CD, 5>& u, const std::array<CD, 5>& v, const std::vector<CD>& s) {
    CD acc(0, 0);
    for (int j = 0; j < 5; ++j)
        for (int kk = 0; kk < 5; ++kk)
            for (int l = 0; l < 5; ++l)
                acc += u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(kk)] *
                       v[static_cast<std::size_t>(l)] * s[static_cast<std::size_t>(12 - j - kk - l)];
    return CD(3, 0) * acc;
}

SolutionTower bring_hamilton_core(const PolyC& pc, const BHExactFront& fr,
                                  const std::vector<std::vector<CD>>& Wc,
                                  const std::vector<std::vector<CD>>& Pc,
                                  const std::vector<CD>& dvec, const BringHamiltonOptions& opt) {
    const int n = pc.degree();
    SolutionTower tw;
    tw.source = pc;

    // quadric-diagonalization record: hyperplane basis, congruence, diagonal
    TowerStep diag;
    diag.kind = StepKind::QuadricDiagonalization;
    for (const auto& col : Wc)
        for (const auto& v : col) diag.fwd.push_back(v);
    for (const auto& row : Pc)
        for (const auto& v : row) diag.fwd.push_back(v);
    for (const auto& v : dvec) diag.fwd.push_back(v);
    tw.steps.push_back(diag);

    // 4 square roots of the diagonal
    std::array<CD, 4> r;
    for (int i = 0; i < 4; ++i) {
        PolyC adj(std::vector<CD>{-dvec[static_cast<std::size_t>(i)], CD(0, 0), CD(1, 0)});
        TowerStep st = radical_step(adj, 2);
        r[static_cast<std::size_t>(i)] = st.fwd[0];
        tw.steps.push_back(st);
    }

    // the line L0 + iL1 = 0 = L2 + iL3 on the diagonalized quadric
    const CD I(0, 1);
    std::array<CD, 4> v1 = {-I * r[1], r[0], CD(0, 0), CD(0, 0)};
    std::array<CD, 4> v2 = {CD(0, 0), CD(0, 0), -I * r[3], r[2]};
    auto to_b = [&](const std::array<CD, 4>& u) {
        std::array<CD, 5> b{};
        std::array<CD, 4> c{};
        for (int i = 0; i < 4; ++i) {
            CD acc(0, 0);
            for (int j = 0; j < 4; ++j) acc += Pc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
            c[static_cast<std::size_t>(i)] = acc;
        }
        for (int i = 0; i < 5; ++i) {
            CD acc(0, 0);
            for (int j = 0; j < 4; ++j) acc += Wc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(i)] = acc;
        }
        return b;
    };
    std::array<CD, 5> B1 = to_b(v1), B2 = to_b(v2);

    TowerStep line;
    line.kind = StepKind::LineOnQuadric;
    for (const auto& v : B1) line.fwd.push_back(v);
    for (const auto& v : B2) line.fwd.push_back(v);
    tw.steps.push_back(line);

    // restrict s3(y)=0 to the line: a binary cubic in the line parameter
    auto addb = [](const std::array<CD, 5>& a, const std::array<CD, 5>& b, CD fb) {
        std::array<CD, 5> r{};
        for (int i = 0; i < 5; ++i) r[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + fb * b[static_cast<std::size_t>(i)];
        return r;
    };
    CD e1 = eval_s3(B1, fr.s);                     // c3
    CD e0 = eval_s3(B2, fr.s);                     // c0
    CD ep = eval_s3(addb(B1, B2, CD(1, 0)), fr.s);   // c3+c2+c1+c0
    CD em = eval_s3(addb(B1, B2, CD(-1, 0)), fr.s);  // c3-c2+c1-c0
    CD c3 = e1, c0 = e0;
    CD c1 = (ep + em) / CD(2, 0) - c3;
    CD c2 = (ep - em) / CD(2, 0) - c0;
    double cs = std::max({std::abs(c0), std::abs(c1), std::abs(c2), std::abs(c3)});
    if (cs <= 0)
        throw degenerate_input("bring_hamilton: auxiliary cubic", "vanishes identically on the line");

    bool mu_chart = std::abs(c3) > opt.tol * cs;
    PolyC cubic = mu_chart ? PolyC(std::vector<CD>{c0, c1, c2, c3})
                           : PolyC(std::vector<CD>{c3, c2, c1, c0});
    if (cubic.degree() < 1)
        throw degenerate_input("bring_hamilton: auxiliary cubic", "degenerates to a constant");
    TowerStep aux;
    aux.kind = StepKind::AuxiliaryCubic;
    aux.adjoined = cubic;
    aux.branch = 0;
    auto crs = roots(cubic, 1e-12);
    CD root = crs.roots.front();
    // polish against the true restricted cubic; the interpolated coefficients
    // alone leave ~1e-6 in the target's zero pattern on ill-conditioned input
    {
        const auto& main = mu_chart ? B2 : B1;
        const auto& dir = mu_chart ? B1 : B2;
        for (int it = 0; it < 12; ++it) {
            std::array<CD, 5> at = addb(main, dir, root);
            CD f = eval_s3(at, fr.s);
            CD df = eval_s3_dir(at, dir, fr.s);
            if (std::abs(df) == 0) break;
            CD step = f / df;
            root -= step;
            if (std::abs(step) < 1e-15 * (1 + std::abs(root))) break;
        }
    }
    aux.fwd = {root};
    tw.steps.push_back(aux);

    std::array<CD, 5> braw = mu_chart ? addb(B2, B1, root) : addb(B1, B2, root);
    double bm = 0;
    for (const auto& v : braw) bm = std::max(bm, std::abs(v));
    if (bm <= 0) throw degenerate_input("bring_hamilton: substitution", "zero Tschirnhaus vector");
    TschirnC t;
    t.n = n;
    t.b.assign(static_cast<std::size_t>(n), CD(0, 0));
    for (int i = 0; i < 5; ++i) t.b[static_cast<std::size_t>(n - 5 + i)] = braw[static_cast<std::size_t>(i)] / bm;

    // balance: rescale b so the transformed roots have magnitude ~1, which
    // makes all later relative zero tests meaningful
    {
        PolyC qraw = apply_tschirnhaus(pc, t);
        double rho = 0;
        for (int k = 1; k <= n; ++k) {
            double a = std::abs(qraw[static_cast<std::size_t>(n - k)]);
            if (a > 0) rho = std::max(rho, std::pow(a, 1.0 / k));
        }
        if (rho <= 0)
            throw degenerate_input("bring_hamilton: substitution",
                                   "transformation collapses every root to zero");
        for (auto& v : t.b) v /= rho;
    }

    tw.steps.push_back(substitution_step(pc, t));
    PolyC q = apply_tschirnhaus(pc, t);

    double sc = std::max(1.0, coeff_scale(q));
    for (int k = 1; k <= 3; ++k) {
        if (std::abs(q[static_cast<std::size_t>(n - k)]) > 1e-7 * sc) {
            std::ostringstream os;
            os << "bring_hamilton: coefficient " << k << " did not vanish (|a_" << k
               << "| = " << std::abs(q[static_cast<std::size_t>(n - k)]) / sc << " rel)";
            throw numerical_failure(os.str());
        }
        q.mutable_coeff(static_cast<std::size_t>(n - k)) = CD(0, 0);
    }
    q.strip();

    // scaling x -> (a_{n-1}/a_n) x makes the last two coefficients equal
    CD an1 = q[1], an = q[0];
    if (std::abs(an1) <= opt.tol * sc || std::abs(an) <= opt.tol * sc)
        throw degenerate_input("bring_hamilton: scaling",
                               "a_{n-1} or a_n vanishes on the reduced polynomial");
    CD c = an1 / an;
    TowerStep scale;
    scale.kind = StepKind::CoefficientScaling;
    scale.fwd = {c};
    tw.steps.push_back(scale);
    q = scale_roots(q, c);

    if (opt.unit_constant) {
        // one degree-n radical sets the constant term to 1
        CD target = CD(1, 0) / q[0];
        std::vector<CD> adj(static_cast<std::size_t>(n) + 1, CD(0, 0));
        adj[0] = -target;
        adj[static_cast<std::size_t>(n)] = CD(1, 0);
        TowerStep rad = radical_step(PolyC(std::move(adj)), n);
        CD lambda = rad.fwd[0];
        tw.steps.push_back(rad);

        TowerStep unit;
        unit.kind = StepKind::CoefficientScaling;
        unit.fwd = {lambda};
        tw.steps.push_back(unit);
        q = scale_roots(q, lambda);
        q.mutable_coeff(0) = CD(1, 0);  // snap: lambda^n a_n = 1 by construction
    }
    tw.target = q;
    return tw;
}

}  // namespace

// ---- public surface -----------------------------------------------------------

const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::LinearShift: return "linear-shift";
        case StepKind::RadicalAdjunction: return "radical-adjunction";
        case StepKind::QuadricDiagonalization: return "quadric-diagonalization";
        case StepKind::LineOnQuadric: return "line-on-quadric";
        case StepKind::AuxiliaryCubic: return "auxiliary-cubic";
        case StepKind::TschirnhausSubstitution: return "tschirnhaus-substitution";
        case StepKind::CoefficientScaling: return "coefficient-scaling";
    }
    return "?";
}

StepKind step_kind_from_name(const std::string& s) {
    for (StepKind k : {StepKind::LinearShift, StepKind::RadicalAdjunction, StepKind::QuadricDiagonalization,
                       StepKind::LineOnQuadric, StepKind::AuxiliaryCubic, StepKind::TschirnhausSubstitution,
                       StepKind::CoefficientScaling})
        if (s == step_kind_name(k)) return k;
    throw invalid_input("unknown tower step kind: " + s);
}

PolyQ apply_tschirnhaus(const PolyQ& p, const TschirnQ& t) { return apply_impl(p, t); }

// Float mode evaluates T on the companion matrix and reads the transformed
// polynomial off the eigenvalues; QR is backward stable where the Newton
// recurrence loses digits at higher degree.
PolyC apply_tschirnhaus(const PolyC& p, const TschirnC& t) {
    const int n = p.degree();
    if (n < 1) throw invalid_input("apply: degree >= 1 required");
    if (!p.is_monic()) throw invalid_input("apply: monic polynomial required");
    if (t.n != n || static_cast<int>(t.b.size()) != n)
        throw invalid_input("apply: transformation degree does not match the polynomial");
    if (n == 1) return apply_impl(p, t);

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = CD(1, 0);
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[static_cast<std::size_t>(i)];

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& c : t.b) m = m * comp + c * Eigen::MatrixXcd::Identity(n, n);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
    std::vector<CD> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return PolyC::from_roots(vals);
}

RecoveredRoot recover_root(const PolyC& p, const TschirnC& t, CD y, double tol) {
    PolyC q = apply_tschirnhaus(p, t);
    if (backward_residual(q, y) > tol)
        throw invalid_input("recover_root: y is not a root of the transformed polynomial");
    PolyC fib = y_minus_t(t, y);
    RecoveredRoot out;
    if (fib.degree() < 1) {
        // constant transformation: the whole fiber collapses
        out.value = roots(p, 1e-9).roots.front();
        out.degenerate = true;
        return out;
    }
    PolyC g = approx_gcd(p, fib, 1e-9);
    if (g.degree() == 1) {
        out.value = -g[0];
        out.degenerate = false;
        return out;
    }
    if (g.degree() >= 2) {
        out.value = roots(g, 1e-9).roots.front();
        out.degenerate = true;
        return out;
    }
    PolyC g2 = approx_gcd(p, fib, 1e-6);
    if (g2.degree() >= 1) {
        out.value = roots(g2, 1e-6).roots.front();
        out.degenerate = g2.degree() > 1;
        return out;
    }
    throw numerical_failure("recover_root: empty fiber at the given value");
}

std::pair<PolyQ, TowerStep> depress(const PolyQ& p) {
    const int n = p.degree();
    if (n < 2 || !p.is_monic()) throw invalid_input("depress: monic polynomial of degree >= 2 required");
    Rat s = -p[static_cast<std::size_t>(n - 1)] / Rat(n);
    TowerStep st;
    st.kind = StepKind::LinearShift;
    st.fwd = {to_cd(s)};
    st.inverse = Expr::add(Expr::var(), Expr::constant(to_cd(s)));
    return {p.shift(s), st};
}

std::pair<PolyC, TowerStep> depress(const PolyC& p) {
    const int n = p.degree();
    if (n < 2 || !p.is_monic()) throw invalid_input("depress: monic polynomial of degree >= 2 required");
    CD s = -p[static_cast<std::size_t>(n - 1)] / CD(n, 0);
    TowerStep st;
    st.kind = StepKind::LinearShift;
    st.fwd = {s};
    st.inverse = Expr::add(Expr::var(), Expr::constant(s));
    return {p.shift(s), st};
}

SolutionTower kill_two(const PolyQ& p) {
    auto plan = kill_two_plan(p, [](const Rat& v) { return sgn(v) == 0; });
    return kill_two_from_plan(to_complex(p), plan, 1e-9);
}

SolutionTower kill_two(const PolyC& p, double tol) {
    double sc = std::max(1.0, coeff_scale(p));
    auto plan = kill_two_plan(p, [&](const CD& v) { return std::abs(v) <= tol * sc; });
    return kill_two_from_plan(p, plan, std::max(tol, 1e-9));
}

namespace {

// Exact power-of-two root scaling x -> x/sigma so every root lands in the
// unit disk; keeps the float tail of the reduction well conditioned.
template <typename T>
T prescale_sigma(const Poly<T>& p) {
    double bound = 0;
    for (int k = 0; k < p.degree(); ++k)
        bound = std::max(bound, scalar_traits<T>::magnitude(p[static_cast<std::size_t>(k)]));
    bound += 1.0;  // Cauchy bound for a monic polynomial
    double lg = std::ceil(std::log2(bound));
    T sigma = scalar_traits<T>::one();
    for (int i = 0; i < static_cast<int>(lg); ++i) sigma = sigma * T(2);
    return sigma;
}

template <typename T>
Poly<T> scale_down_roots(const Poly<T>& p, const T& sigma) {
    // q(x) = p(sigma x)/sigma^n, monic with roots x_i/sigma
    const int n = p.degree();
    std::vector<T> asc(static_cast<std::size_t>(n) + 1);
    T f = scalar_traits<T>::one();
    for (int k = n; k >= 0; --k) {
        asc[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] / f;
        f = f * sigma;
    }
    return Poly<T>(std::move(asc));
}

template <typename T>
bool attach_prescale(const Poly<T>& p, Poly<T>& scaled, TowerStep& st) {
    T sigma = prescale_sigma(p);
    if (scalar_traits<T>::magnitude(sigma) <= 1.0) return false;
    scaled = scale_down_roots(p, sigma);
    st.kind = StepKind::CoefficientScaling;
    st.fwd = {CD(1, 0) / to_cd(sigma)};
    return true;
}

}  // namespace

SolutionTower bring_hamilton_reduce(const PolyQ& p, const BringHamiltonOptions& opt) {
    const int n = p.degree();
    if (n < 5 || !p.is_monic()) throw invalid_input("bring_hamilton_reduce: monic degree >= 5 required");
    PolyQ work = p;
    TowerStep pre;
    bool prescaled = attach_prescale(p, work, pre);
    const PolyQ& ps = prescaled ? work : p;
    auto sq = full_power_sums(ps, 12);
    std::vector<std::vector<Rat>> Wq;
    auto Mq = bh_quadric(sq, n, Wq);
    if (sgn(det_rational(Mq)) == 0)
        throw degenerate_input("bring_hamilton: quadric", "the coefficient quadric is singular");
    std::vector<std::vector<Rat>> Pq;
    std::vector<Rat> dq;
    diag_congruence(Mq, Pq, dq, [](const Rat& v) { return sgn(v) == 0; }, /*pick_largest=*/false);

    BHExactFront fr;
    fr.s.resize(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) fr.s[i] = to_cd(sq[i]);
    std::vector<std::vector<CD>> Wc(5, std::vector<CD>(4)), Pc(4, std::vector<CD>(4));
    std::vector<CD> dc(4);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) Wc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_cd(Wq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) Pc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_cd(Pq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    for (int i = 0; i < 4; ++i) dc[static_cast<std::size_t>(i)] = to_cd(dq[static_cast<std::size_t>(i)]);
    SolutionTower tw = bring_hamilton_core(to_complex(ps), fr, Wc, Pc, dc, opt);
    if (prescaled) {
        tw.steps.insert(tw.steps.begin(), pre);
        tw.source = to_complex(p);
    }
    return tw;
}

SolutionTower bring_hamilton_reduce(const PolyC& p, const BringHamiltonOptions& opt) {
    const int n = p.degree();
    if (n < 5 || !p.is_monic()) throw invalid_input("bring_hamilton_reduce: monic degree >= 5 required");
    PolyC work = p;
    TowerStep pre;
    bool prescaled = attach_prescale(p, work, pre);
    const PolyC& psc = prescaled ? work : p;
    auto s = full_power_sums(psc, 12);
    double ss = 1.0;
    for (const auto& v : s) ss = std::max(ss, std::abs(v));
    auto zer = [&](const CD& v) { return std::abs(v) <= opt.tol * ss; };
    std::vector<std::vector<CD>> Wc;
    auto Mc = bh_quadric(s, n, Wc);
    std::vector<std::vector<CD>> Pc;
    std::vector<CD> dc;
    diag_congruence(Mc, Pc, dc, zer, /*pick_largest=*/true);
    for (const auto& v : dc)
        if (zer(v)) throw degenerate_input("bring_hamilton: quadric", "the coefficient quadric is singular");
    BHExactFront fr;
    fr.s = s;
    SolutionTower tw = bring_hamilton_core(psc, fr, Wc, Pc, dc, opt);
    if (prescaled) {
        tw.steps.insert(tw.steps.begin(), pre);
        tw.source = p;
    }
    return tw;
}

TowerRoots solve_via_tower(const SolutionTower& tower, double tol) {
    TowerRoots out;
    if (tower.target.degree() < 1) throw invalid_input("solve_via_tower: trivial target");
    auto rs = roots(tower.target, std::min(tol, 1e-9));
    std::vector<CD> cur = rs.roots;
    std::vector<bool> flags(cur.size(), false);

    // replay the polynomial-moving steps to know each stage's polynomial
    std::vector<PolyC> stages;
    PolyC p = tower.source;
    stages.push_back(p);
    std::vector<TschirnC> subs(tower.steps.size());
    for (std::size_t i = 0; i < tower.steps.size(); ++i) {
        const TowerStep& st = tower.steps[i];
        switch (st.kind) {
            case StepKind::LinearShift:
                p = p.shift(st.fwd[0]);  // fwd stores the variable shift
                break;
            case StepKind::CoefficientScaling:
                p = scale_roots(p, st.fwd[0]);
                break;
            case StepKind::TschirnhausSubstitution: {
                TschirnC t;
                t.n = p.degree();
                t.b = st.fwd;
                subs[i] = t;
                p = apply_tschirnhaus(p, t);
                break;
            }
            default: break;
        }
        stages.push_back(p);
    }

    for (std::size_t si = tower.steps.size(); si-- > 0;) {
        const TowerStep& st = tower.steps[si];
        const PolyC& prev = stages[si];
        switch (st.kind) {
            case StepKind::LinearShift:
                for (auto& y : cur) y = y + st.fwd[0];
                break;
            case StepKind::CoefficientScaling:
                for (auto& y : cur) y = y / st.fwd[0];
                break;
            case StepKind::TschirnhausSubstitution: {
                // Process fibers cluster by cluster so collapsed fibers
                // (several equal transformed values) recover the source
                // multiset with the right multiplicities.
                std::vector<bool> donei(cur.size(), false);
                std::vector<CD> next(cur.size());
                for (std::size_t i = 0; i < cur.size(); ++i) {
                    if (donei[i]) continue;
                    CD y = cur[i];
                    std::vector<std::size_t> cluster;
                    for (std::size_t j = i; j < cur.size(); ++j)
                        if (!donei[j] && std::abs(cur[j] - y) <= 1e-7 * (1.0 + std::abs(y))) cluster.push_back(j);

                    bool generic = false;
                    if (cluster.size() == 1 && st.inverse) {
                        CD x = st.inverse->eval(y);
                        if (std::isfinite(x.real()) && std::isfinite(x.imag()) &&
                            backward_residual(prev, x) < 1e-6) {
                            next[i] = polish_root(prev, x);
                            donei[i] = true;
                            generic = true;
                        }
                    }
                    if (generic) continue;

                    PolyC fib = y_minus_t(subs[si], y);
                    PolyC g = fib.degree() >= 1 ? approx_gcd(prev, fib, 1e-7) : prev;
                    if (g.degree() < 1) g = approx_gcd(prev, fib, 1e-4);
                    if (g.degree() == 1) {
                        CD x = polish_root(prev, -g[0]);
                        for (std::size_t j : cluster) {
                            next[j] = x;
                            donei[j] = true;
                            if (cluster.size() > 1) flags[j] = true;
                        }
                        continue;
                    }
                    if (g.degree() >= 2) {
                        auto frs = roots(g, 1e-7);
                        std::vector<CD> expanded;
                        for (const auto& r : frs.roots) {
                            if (!expanded.empty() && std::abs(expanded.back() - r) < 1e-9 * (1 + std::abs(r)))
                                continue;  // dedupe gcd's own multiplicity
                            int mult = root_multiplicity(prev, r, 1e-6);
                            for (int c = 0; c < mult && expanded.size() < cluster.size(); ++c)
                                expanded.push_back(polish_root(prev, r));
                        }
                        while (expanded.size() < cluster.size()) expanded.push_back(expanded.empty() ? y : expanded.back());
                        for (std::size_t k = 0; k < cluster.size(); ++k) {
                            next[cluster[k]] = expanded[k];
                            donei[cluster[k]] = true;
                            flags[cluster[k]] = true;
                        }
                        continue;
                    }
                    // empty fiber at tolerance: keep the best effort value
                    RecoveredRoot rr = recover_root(prev, subs[si], y, 1e-4);
                    for (std::size_t j : cluster) {
                        next[j] = rr.value;
                        donei[j] = true;
                        flags[j] = true;
                    }
                }
                cur = next;
                break;
            }
            default: break;  // adjunctions and geometric bookkeeping: identity
        }
    }

    for (auto& x : cur) x = polish_root(tower.source, x);
    out.roots = cur;
    out.degenerate = flags;
    out.residuals.resize(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i)
        out.residuals[i] = backward_residual(tower.source, cur[i]);
    return out;
}

int count_steps(const SolutionTower& t, StepKind k, int radical_degree) {
    int c = 0;
    for (const auto& st : t.steps)
        if (st.kind == k && (radical_degree == 0 || st.radical_degree == radical_degree)) ++c;
    return c;
}

}  // namespace rdlab
