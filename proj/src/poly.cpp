#include "rdlab/poly.hpp"

#include <cstdlib>

namespace rdlab {
namespace {

// Sylvester matrix of p (degree m) and q (degree n): (m+n) square, rows are
// shifted copies of the descending coefficient lists.
template <typename T>
std::vector<std::vector<T>> sylvester(const Poly<T>& p, const Poly<T>& q) {
    const int m = p.degree(), n = q.degree();
    const int N = m + n;
    std::vector<std::vector<T>> M(static_cast<std::size_t>(N),
                                  std::vector<T>(static_cast<std::size_t>(N), scalar_traits<T>::zero()));
    auto pd = p.descending();
    auto qd = q.descending();
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) M[r][r + j] = pd[static_cast<std::size_t>(j)];
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) M[n + r][r + j] = qd[static_cast<std::size_t>(j)];
    return M;
}

CD det_float(std::vector<std::vector<CD>> M);

}  // namespace

// Fraction-free determinant: clear denominators row by row, then Bareiss over
// the integers.  Exact divisions only, so entries stay single-GCD-small.
Rat det_rational(std::vector<std::vector<Rat>> M) {
    const std::size_t N = M.size();
    std::vector<std::vector<mpz_class>> Z(N, std::vector<mpz_class>(N));
    mpz_class denom = 1;
    for (std::size_t i = 0; i < N; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < N; ++j) l = lcm(l, M[i][j].get_den());
        for (std::size_t j = 0; j < N; ++j) {
            mpq_class v = M[i][j] * Rat(l);
            v.canonicalize();
            Z[i][j] = v.get_num();
        }
        denom *= l;
    }
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < N; ++k) {
        if (Z[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < N && Z[s][k] == 0) ++s;
            if (s == N) return Rat(0);
            std::swap(Z[k], Z[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < N; ++i)
            for (std::size_t j = k + 1; j < N; ++j) {
                mpz_class t = Z[i][j] * Z[k][k] - Z[i][k] * Z[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                Z[i][j] = t;
            }
        prev = Z[k][k];
    }
    Rat r(Z[N - 1][N - 1], denom);
    r.canonicalize();
    return sign > 0 ? r : Rat(-r);
}

namespace {

CD det_float(std::vector<std::vector<CD>> M) {
    const std::size_t N = M.size();
    CD det(1, 0);
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < N; ++i)
            if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
        if (std::abs(M[piv][k]) == 0.0) return CD(0, 0);
        if (piv != k) {
            std::swap(M[piv], M[k]);
            det = -det;
        }
        det *= M[k][k];
        for (std::size_t i = k + 1; i < N; ++i) {
            CD f = M[i][k] / M[k][k];
            for (std::size_t j = k; j < N; ++j) M[i][j] -= f * M[k][j];
        }
    }
    return det;
}

}  // namespace

Rat resultant(const PolyQ& p, const PolyQ& q) {
    if (p.degree() < 1 || q.degree() < 1) throw invalid_input("resultant: both degrees must be >= 1");
    return det_rational(sylvester(p, q));
}

CD resultant(const PolyC& p, const PolyC& q) {
    if (p.degree() < 1 || q.degree() < 1) throw invalid_input("resultant: both degrees must be >= 1");
    return det_float(sylvester(p, q));
}

PolyC approx_gcd(PolyC a, PolyC b, double tol) {
    auto norm = [](const PolyC& f) {
        double m = 0;
        for (const auto& c : f.coeffs()) m = std::max(m, std::abs(c));
        return m;
    };
    double scale = std::max(norm(a), norm(b));
    if (scale == 0) return PolyC();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (norm(b) <= tol * scale) break;  // b is noise: gcd found
        PolyC r = divmod(a, b).second;
        r.trim(1e-14);
        a = std::move(b);
        b = std::move(r);
    }
    // monic normalization
    if (a.is_zero()) return a;
    PolyC g = a * (CD(1, 0) / a.lc());
    return g;
}

}  // namespace rdlab
