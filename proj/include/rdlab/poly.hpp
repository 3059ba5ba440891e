#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rdlab/errors.hpp"
#include "rdlab/scalar.hpp"

namespace rdlab {

// Dense univariate polynomial; coeffs[k] is the coefficient of x^k and the
// representation is trimmed (no zero above the leading coefficient).
// Trimming is by exact zero so float degrees never shift silently; callers
// that want tolerance-based truncation use trim().
template <typename T>
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<T> ascending) : c_(std::move(ascending)) { strip(); }
    static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }
    static Poly x() { return Poly(std::vector<T>{scalar_traits<T>::zero(), scalar_traits<T>::one()}); }

    // Coefficients given from the leading term down to the constant term.
    static Poly from_descending(std::vector<T> d) {
        std::reverse(d.begin(), d.end());
        return Poly(std::move(d));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
    const std::vector<T>& coeffs() const { return c_; }
    std::vector<T> descending() const {
        std::vector<T> d(c_.rbegin(), c_.rend());
        return d;
    }

    const T& operator[](std::size_t k) const {
        static const T zero = scalar_traits<T>::zero();
        return k < c_.size() ? c_[k] : zero;
    }
    T& mutable_coeff(std::size_t k) {
        if (k >= c_.size()) c_.resize(k + 1, scalar_traits<T>::zero());
        return c_[k];
    }
    void strip() {
        while (!c_.empty() && scalar_traits<T>::is_zero(c_.back())) c_.pop_back();
    }
    // Drop float fuzz: zero out coefficients below tol * max|coeff|, then strip.
    void trim(double tol) {
        double m = 0;
        for (const auto& a : c_) m = std::max(m, scalar_traits<T>::magnitude(a));
        for (auto& a : c_)
            if (scalar_traits<T>::magnitude(a) <= tol * m) a = scalar_traits<T>::zero();
        strip();
    }

    const T& lc() const {
        if (c_.empty()) throw invalid_input("leading coefficient of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && scalar_traits<T>::is_zero(c_.back() - scalar_traits<T>::one()); }

    template <typename S>
    S eval(const S& x) const {
        S acc{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + S(*it);
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<T> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<int>(k));
        return Poly(std::move(d));
    }

    Poly operator-() const {
        std::vector<T> d(c_);
        for (auto& a : d) a = -a;
        return Poly(std::move(d));
    }
    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> d(std::max(a.c_.size(), b.c_.size()), scalar_traits<T>::zero());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] + b[k];
        return Poly(std::move(d));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> d(a.c_.size() + b.c_.size() - 1, scalar_traits<T>::zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] = d[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(d));
    }
    friend Poly operator*(const Poly& a, const T& s) {
        std::vector<T> d(a.c_);
        for (auto& x : d) x = x * s;
        return Poly(std::move(d));
    }
    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t k = 0; k < a.c_.size(); ++k)
            if (!scalar_traits<T>::is_zero(a.c_[k] - b.c_[k])) return false;
        return true;
    }

    // Euclidean division (T a field).  Returns {quotient, remainder}.
    // Values are materialized before assignment: lazy expression templates
    // (gmpxx) must not hold references across a vector reallocation.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw invalid_input("polynomial division by zero");
        Poly q, r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int k = r.degree() - b.degree();
            T f(r.lc() / b.lc());
            T qv(q[static_cast<std::size_t>(k)] + f);
            q.mutable_coeff(static_cast<std::size_t>(k)) = qv;
            for (int j = 0; j < b.degree(); ++j) {
                T rv(r[static_cast<std::size_t>(j + k)] - f * b.c_[static_cast<std::size_t>(j)]);
                r.mutable_coeff(static_cast<std::size_t>(j + k)) = rv;
            }
            r.c_.resize(static_cast<std::size_t>(r.degree()));  // forced cancellation of the lead
            r.strip();
        }
        q.strip();
        return {q, r};
    }

    // p(x + s), by Horner on the shifted variable
    Poly shift(const T& s) const {
        Poly lin(std::vector<T>{s, scalar_traits<T>::one()});
        Poly acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly::constant(*it);
        return acc;
    }

    // p(s*x): coefficient of x^k picks up s^k
    Poly scale_arg(const T& s) const {
        std::vector<T> d(c_);
        T f = scalar_traits<T>::one();
        for (std::size_t k = 1; k < d.size(); ++k) {
            f = f * s;
            d[k] = d[k] * f;
        }
        return Poly(std::move(d));
    }

    // monic polynomial with the given roots
    static Poly from_roots(const std::vector<T>& roots) {
        Poly p = constant(scalar_traits<T>::one());
        for (const auto& r : roots) p = p * Poly(std::vector<T>{-r, scalar_traits<T>::one()});
        return p;
    }

  private:
    std::vector<T> c_;
};

using PolyQ = Poly<Rat>;
using PolyC = Poly<CD>;

inline PolyC to_complex(const PolyQ& p) {
    std::vector<CD> d;
    d.reserve(p.coeffs().size());
    for (const auto& a : p.coeffs()) d.push_back(to_cd(a));
    return PolyC(std::move(d));
}

// --- Newton identities -----------------------------------------------------

// s_1..s_m with s_k = sum of k-th powers of the roots; p must be monic.
template <typename T>
std::vector<T> power_sums(const Poly<T>& p, int m) {
    if (p.degree() < 0 || !p.is_monic()) throw invalid_input("power_sums: monic polynomial required");
    if (m < 1) throw invalid_input("power_sums: m must be positive");
    const int n = p.degree();
    auto a = [&](int i) { return p[static_cast<std::size_t>(n - i)]; };  // coefficient of x^{n-i}
    std::vector<T> s(static_cast<std::size_t>(m) + 1, scalar_traits<T>::zero());
    for (int k = 1; k <= m; ++k) {
        T acc = scalar_traits<T>::zero();
        for (int i = 1; i < k && i <= n; ++i) acc = acc + a(i) * s[static_cast<std::size_t>(k - i)];
        if (k <= n) acc = acc + a(k) * T(k);
        s[static_cast<std::size_t>(k)] = -acc;
    }
    return std::vector<T>(s.begin() + 1, s.end());
}

// Unique monic degree-n polynomial with the given power sums (needs >= n of them).
template <typename T>
Poly<T> from_power_sums(const std::vector<T>& s, int n) {
    if (static_cast<int>(s.size()) < n) throw invalid_input("from_power_sums: need at least n sums");
    if (n < 0) throw invalid_input("from_power_sums: negative degree");
    std::vector<T> a(static_cast<std::size_t>(n) + 1, scalar_traits<T>::zero());
    a[0] = scalar_traits<T>::one();
    for (int k = 1; k <= n; ++k) {
        T acc = s[static_cast<std::size_t>(k - 1)];
        for (int i = 1; i < k; ++i) acc = acc + a[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(k - i - 1)];
        a[static_cast<std::size_t>(k)] = -acc / T(k);
    }
    std::vector<T> asc(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) asc[static_cast<std::size_t>(n - i)] = a[static_cast<std::size_t>(i)];
    return Poly<T>(std::move(asc));
}

// --- resultants ------------------------------------------------------------

Rat resultant(const PolyQ& p, const PolyQ& q);
CD resultant(const PolyC& p, const PolyC& q);

// Exact determinant (fraction-free Bareiss after clearing denominators).
Rat det_rational(std::vector<std::vector<Rat>> m);

template <typename T>
T discriminant(const Poly<T>& p) {
    if (p.degree() < 2) throw invalid_input("discriminant: degree >= 2 required");
    const int n = p.degree();
    T r = resultant(p, p.derivative());
    T d = r / p.lc();
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0) d = -d;
    return d;
}

// gcd over C with a relative tolerance; result is monic.
PolyC approx_gcd(PolyC a, PolyC b, double tol);

}  // namespace rdlab
