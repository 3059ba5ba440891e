#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "rdlab/errors.hpp"
#include "rdlab/scalar.hpp"

namespace rdlab {

// Degree-d monomial exponent vectors in v variables, lexicographically
// descending.  This fixed order is the wire order for surface/curve
// coefficient arrays.
std::vector<std::vector<int>> monomial_exponents(int deg, int nvars);

// Sparse multivariate polynomial; no zero-coefficient terms are stored.
template <typename T>
class MultiPoly {
  public:
    using Expo = std::vector<int>;

    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

    static MultiPoly var(int nvars, int i) {
        MultiPoly m(nvars);
        Expo e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(i)] = 1;
        m.terms_[e] = scalar_traits<T>::one();
        return m;
    }
    static MultiPoly constant(int nvars, T v) {
        MultiPoly m(nvars);
        if (!scalar_traits<T>::is_zero(v)) m.terms_[Expo(static_cast<std::size_t>(nvars), 0)] = std::move(v);
        return m;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Expo, T>& terms() const { return terms_; }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    void add_term(const Expo& e, const T& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!scalar_traits<T>::is_zero(c)) terms_[e] = c;
        } else {
            it->second = it->second + c;
            if (scalar_traits<T>::is_zero(it->second)) terms_.erase(it);
        }
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r(a.nvars_);
        for (const auto& [e1, c1] : a.terms_)
            for (const auto& [e2, c2] : b.terms_) {
                Expo e = e1;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const T& s) {
        MultiPoly r(a.nvars_);
        if (scalar_traits<T>::is_zero(s)) return r;
        for (const auto& [e, c] : a.terms_) r.terms_[e] = c * s;
        return r;
    }
    MultiPoly operator-() const { return *this * T(-1); }

    MultiPoly ddx(int i) const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[static_cast<std::size_t>(i)] == 0) continue;
            Expo d = e;
            int k = d[static_cast<std::size_t>(i)]--;
            r.add_term(d, c * T(k));
        }
        return r;
    }

    // Evaluate over any commutative ring S with a T->S embedding.
    template <typename S, typename Embed>
    S eval_with(const std::vector<S>& x, Embed embed, const S& zero) const {
        S acc = zero;
        for (const auto& [e, c] : terms_) {
            S t = embed(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) t = t * x[i];
            acc = acc + t;
        }
        return acc;
    }

    T eval(const std::vector<T>& x) const {
        return eval_with<T>(x, [](const T& c) { return c; }, scalar_traits<T>::zero());
    }

  private:
    int nvars_;
    std::map<Expo, T> terms_;
};

using MPolyC = MultiPoly<CD>;
using MPolyQ = MultiPoly<Rat>;

// Dense coefficient array (monomial_exponents order) <-> sparse form.
template <typename T>
MultiPoly<T> form_from_dense(int deg, int nvars, const std::vector<T>& coeffs) {
    auto mons = monomial_exponents(deg, nvars);
    if (coeffs.size() != mons.size()) throw invalid_input("form_from_dense: wrong coefficient count");
    MultiPoly<T> f(nvars);
    for (std::size_t i = 0; i < mons.size(); ++i) f.add_term(mons[i], coeffs[i]);
    return f;
}

template <typename T>
std::vector<T> form_to_dense(int deg, int nvars, const MultiPoly<T>& f) {
    auto mons = monomial_exponents(deg, nvars);
    std::vector<T> out(mons.size(), scalar_traits<T>::zero());
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < mons.size(); ++i) index[mons[i]] = i;
    for (const auto& [e, c] : f.terms()) {
        auto it = index.find(e);
        if (it == index.end()) throw invalid_input("form_to_dense: term outside the fixed monomial basis");
        out[it->second] = c;
    }
    return out;
}

inline MPolyC to_complex(const MPolyQ& f) {
    MPolyC g(f.nvars());
    for (const auto& [e, c] : f.terms()) g.add_term(e, to_cd(c));
    return g;
}

}  // namespace rdlab
