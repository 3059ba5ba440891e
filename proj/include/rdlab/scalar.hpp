#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

#include "rdlab/errors.hpp"

namespace rdlab {

using Rat = mpq_class;
using CD = std::complex<double>;

inline double to_double(const Rat& q) { return q.get_d(); }
inline CD to_cd(const Rat& q) { return CD(q.get_d(), 0.0); }
inline CD to_cd(const CD& z) { return z; }

// "p/q" or "p"; whitespace not tolerated.
inline Rat parse_rational(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw invalid_input("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline std::string rational_str(const Rat& q) { return q.get_str(); }

// scalar traits used by the generic polynomial code
template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static bool is_zero(const Rat& x, double /*tol*/ = 0) { return sgn(x) == 0; }
    static double magnitude(const Rat& x) { return std::abs(x.get_d()); }
};

template <>
struct scalar_traits<CD> {
    static constexpr bool exact = false;
    static CD zero() { return CD(0, 0); }
    static CD one() { return CD(1, 0); }
    static bool is_zero(const CD& x, double tol = 0) { return std::abs(x) <= tol; }
    static double magnitude(const CD& x) { return std::abs(x); }
};

}  // namespace rdlab
