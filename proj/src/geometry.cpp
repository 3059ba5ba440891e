#include "rdlab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rdlab {
namespace {

const int kPluckerRows[6] = {0, 0, 0, 1, 1, 2};
const int kPluckerCols[6] = {1, 2, 3, 2, 3, 3};

double norm6(const Vec6& v) {
    double m = 0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

CD dot_conj(const CD* a, const CD* b, int n) {
    CD acc(0, 0);
    for (int i = 0; i < n; ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

double abs2(const CD* a, int n) {
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += std::norm(a[i]);
    return acc;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

ProjLine line_through(const Vec4& a, const Vec4& b) {
    ProjLine l;
    l.point_a = a;
    l.point_b = b;
    for (int k = 0; k < 6; ++k) {
        int i = kPluckerRows[k], j = kPluckerCols[k];
        l.plucker[static_cast<std::size_t>(k)] =
            a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] -
            a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(i)];
    }
    double m = norm6(l.plucker);
    if (m == 0) throw invalid_input("line_through: points are projectively equal");
    l.plucker = normalize_plucker(l.plucker);
    return l;
}

ProjLine line_from_plucker(const Vec6& p) {
    // columns of the skew matrix (a b^T - b a^T) span {a, b}
    CD m[4][4] = {};
    for (int k = 0; k < 6; ++k) {
        int i = kPluckerRows[k], j = kPluckerCols[k];
        m[i][j] = p[static_cast<std::size_t>(k)];
        m[j][i] = -p[static_cast<std::size_t>(k)];
    }
    std::array<Vec4, 4> cols;
    std::array<double, 4> nn{};
    for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 4; ++r) cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = m[r][c];
        nn[static_cast<std::size_t>(c)] = abs2(cols[static_cast<std::size_t>(c)].data(), 4);
    }
    int best = 0;
    for (int c = 1; c < 4; ++c)
        if (nn[static_cast<std::size_t>(c)] > nn[static_cast<std::size_t>(best)]) best = c;
    // second column most independent of the first
    int second = -1;
    double best_ind = -1;
    for (int c = 0; c < 4; ++c) {
        if (c == best) continue;
        CD inner = dot_conj(cols[static_cast<std::size_t>(c)].data(), cols[static_cast<std::size_t>(best)].data(), 4);
        double ind = nn[static_cast<std::size_t>(c)] -
                     std::norm(inner) / std::max(1e-300, nn[static_cast<std::size_t>(best)]);
        if (ind > best_ind) {
            best_ind = ind;
            second = c;
        }
    }
    if (best_ind <= 0) throw invalid_input("line_from_plucker: degenerate coordinates");
    return line_through(cols[static_cast<std::size_t>(best)], cols[static_cast<std::size_t>(second)]);
}

Vec6 normalize_plucker(const Vec6& p) {
    int best = 0;
    for (int k = 1; k < 6; ++k)
        if (std::abs(p[static_cast<std::size_t>(k)]) > std::abs(p[static_cast<std::size_t>(best)])) best = k;
    CD d = p[static_cast<std::size_t>(best)];
    if (std::abs(d) == 0) throw invalid_input("normalize_plucker: zero vector");
    Vec6 out;
    for (int k = 0; k < 6; ++k) out[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] / d;
    return out;
}

double plucker_relation_residual(const Vec6& p) {
    CD r = p[0] * p[5] - p[1] * p[4] + p[2] * p[3];
    double m = norm6(p);
    return std::abs(r) / std::max(1e-300, m * m);
}

CD plucker_pairing(const Vec6& a, const Vec6& b) {
    return a[0] * b[5] - a[1] * b[4] + a[2] * b[3] + a[5] * b[0] - a[4] * b[1] + a[3] * b[2];
}

double projective_distance6(const Vec6& a, const Vec6& b) {
    double na = abs2(a.data(), 6), nb = abs2(b.data(), 6);
    if (na == 0 || nb == 0) return 1;
    double c = std::norm(dot_conj(a.data(), b.data(), 6)) / (na * nb);
    return std::sqrt(std::max(0.0, 1.0 - c));
}

double projective_distance3(const Vec3& a, const Vec3& b) {
    double na = abs2(a.data(), 3), nb = abs2(b.data(), 3);
    if (na == 0 || nb == 0) return 1;
    double c = std::norm(dot_conj(a.data(), b.data(), 3)) / (na * nb);
    return std::sqrt(std::max(0.0, 1.0 - c));
}

std::vector<CD> binary_mul(const std::vector<CD>& a, const std::vector<CD>& b) {
    std::vector<CD> out(a.size() + b.size() - 1, CD(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

CD binary_eval(const std::vector<CD>& f, CD s, CD t) {
    const int d = static_cast<int>(f.size()) - 1;
    CD acc(0, 0);
    for (int k = 0; k <= d; ++k) {
        CD v = f[static_cast<std::size_t>(k)];
        for (int i = 0; i < d - k; ++i) v *= s;
        for (int i = 0; i < k; ++i) v *= t;
        acc += v;
    }
    return acc;
}

std::vector<CD> restrict_form(const MPolyC& form, const std::vector<CD>& a, const std::vector<CD>& b) {
    const int d = form.total_degree();
    std::vector<CD> out(static_cast<std::size_t>(d) + 1, CD(0, 0));
    for (const auto& [e, c] : form.terms()) {
        // product over variables of (a_i s + b_i t)^{e_i}
        std::vector<CD> acc{c};
        for (std::size_t v = 0; v < e.size(); ++v) {
            for (int k = 0; k < e[v]; ++k) acc = binary_mul(acc, {a[v], b[v]});
        }
        for (std::size_t k = 0; k < acc.size(); ++k) out[k] += acc[k];
    }
    return out;
}

BinarySqrt binary_quartic_sqrt(const std::vector<CD>& f) {
    if (f.size() != 5) throw invalid_input("binary_quartic_sqrt: need 5 coefficients");
    double scale = 0;
    for (const auto& c : f) scale = std::max(scale, std::abs(c));
    BinarySqrt out;
    out.q.assign(3, CD(0, 0));
    if (scale == 0) {
        out.residual = 0;
        return out;
    }
    auto attempt = [&](bool from_front) {
        std::vector<CD> q(3);
        if (from_front) {
            q[0] = std::sqrt(f[0]);
            q[1] = f[1] / (2.0 * q[0]);
            q[2] = (f[2] - q[1] * q[1]) / (2.0 * q[0]);
        } else {
            q[2] = std::sqrt(f[4]);
            q[1] = f[3] / (2.0 * q[2]);
            q[0] = (f[2] - q[1] * q[1]) / (2.0 * q[2]);
        }
        return q;
    };
    std::vector<CD> q;
    if (std::abs(f[0]) >= std::abs(f[4]) && std::abs(f[0]) > 1e-14 * scale) {
        q = attempt(true);
    } else if (std::abs(f[4]) > 1e-14 * scale) {
        q = attempt(false);
    } else {
        // both extreme coefficients vanish: f ~ (c st)^2
        q = {CD(0, 0), std::sqrt(f[2]), CD(0, 0)};
    }
    auto sq = binary_mul(q, q);
    double res = 0;
    for (int k = 0; k < 5; ++k) res = std::max(res, std::abs(sq[static_cast<std::size_t>(k)] - f[static_cast<std::size_t>(k)]));
    out.q = q;
    out.residual = res / scale;
    return out;
}

Mat3 conic_matrix(const MPolyC& conic) {
    if (conic.nvars() != 3) throw invalid_input("conic_matrix: three variables required");
    Mat3 m{};
    for (const auto& [e, c] : conic.terms()) {
        int idx[2], n = 0;
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) idx[n++] = v;
        if (n != 2) throw invalid_input("conic_matrix: form is not homogeneous quadratic");
        if (idx[0] == idx[1]) {
            m[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[0])] += c;
        } else {
            m[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] += c / 2.0;
            m[static_cast<std::size_t>(idx[1])][static_cast<std::size_t>(idx[0])] += c / 2.0;
        }
    }
    return m;
}

MPolyC conic_from_matrix(const Mat3& m, int nvars) {
    MPolyC out(nvars);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::vector<int> e(static_cast<std::size_t>(nvars), 0);
            e[static_cast<std::size_t>(i)] += 1;
            e[static_cast<std::size_t>(j)] += 1;
            out.add_term(e, m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    return out;
}

CD det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

ConicSplit split_conic(const Mat3& m) {
    double scale = 0;
    for (const auto& row : m)
        for (const auto& v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0) throw invalid_input("split_conic: zero conic");

    // adjugate; for M = (pq^T + qp^T)/2 it equals -(p x q)(p x q)^T / 4
    Mat3 a{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                m[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j1)] *
                    m[static_cast<std::size_t>(i2)][static_cast<std::size_t>(j2)] -
                m[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j2)] *
                    m[static_cast<std::size_t>(i2)][static_cast<std::size_t>(j1)];
        }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]) >
            std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(best)]))
            best = i;

    Mat3 n = m;
    if (std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(best)]) > 1e-20 * scale * scale) {
        CD beta = std::sqrt(-a[static_cast<std::size_t>(best)][static_cast<std::size_t>(best)]);
        Vec3 c{a[0][static_cast<std::size_t>(best)] / beta, a[1][static_cast<std::size_t>(best)] / beta,
               a[2][static_cast<std::size_t>(best)] / beta};
        // n = m + skew(c) has rank 1 for one choice of the sqrt branch
        n[0][1] += -c[2]; n[0][2] += c[1];
        n[1][0] += c[2];  n[1][2] += -c[0];
        n[2][0] += -c[1]; n[2][1] += c[0];
    }
    // rank-1 read-off: best column x best row
    int bc = 0, br = 0;
    double cbest = -1, rbest = -1;
    for (int j = 0; j < 3; ++j) {
        double cn = 0, rn = 0;
        for (int i = 0; i < 3; ++i) {
            cn += std::norm(n[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            rn += std::norm(n[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        if (cn > cbest) { cbest = cn; bc = j; }
        if (rn > rbest) { rbest = rn; br = j; }
    }
    ConicSplit out;
    for (int i = 0; i < 3; ++i) {
        out.p[static_cast<std::size_t>(i)] = n[static_cast<std::size_t>(i)][static_cast<std::size_t>(bc)];
        out.q[static_cast<std::size_t>(i)] = n[static_cast<std::size_t>(br)][static_cast<std::size_t>(i)];
    }

    // residual: best-scalar match of (pq^T + qp^T)/2 against m
    CD num(0, 0), den(0, 0);
    Mat3 re{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            re[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (out.p[static_cast<std::size_t>(i)] * out.q[static_cast<std::size_t>(j)] +
                 out.q[static_cast<std::size_t>(i)] * out.p[static_cast<std::size_t>(j)]) / 2.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            num += std::conj(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                   m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            den += std::conj(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                   re[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    CD s = (std::abs(den) > 0) ? num / den : CD(0, 0);
    double res = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            res = std::max(res, std::abs(s * re[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                         m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    out.residual = res / scale;
    return out;
}

std::pair<Vec3, Vec3> points_on_line(const Vec3& l) {
    std::array<Vec3, 3> cands;
    for (int i = 0; i < 3; ++i) {
        Vec3 e{CD(0, 0), CD(0, 0), CD(0, 0)};
        e[static_cast<std::size_t>(i)] = CD(1, 0);
        cands[static_cast<std::size_t>(i)] = cross(l, e);
    }
    int b1 = 0;
    for (int i = 1; i < 3; ++i)
        if (abs2(cands[static_cast<std::size_t>(i)].data(), 3) > abs2(cands[static_cast<std::size_t>(b1)].data(), 3))
            b1 = i;
    int b2 = -1;
    double best = -1;
    for (int i = 0; i < 3; ++i) {
        if (i == b1) continue;
        Vec3 c = cross(cands[static_cast<std::size_t>(b1)], cands[static_cast<std::size_t>(i)]);
        double ind = abs2(c.data(), 3);
        if (ind > best) {
            best = ind;
            b2 = i;
        }
    }
    if (best <= 0) throw invalid_input("points_on_line: degenerate line vector");
    return {cands[static_cast<std::size_t>(b1)], cands[static_cast<std::size_t>(b2)]};
}

}  // namespace rdlab
