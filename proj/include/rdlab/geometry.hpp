#pragma once

#include <array>
#include <vector>

#include "rdlab/multipoly.hpp"

namespace rdlab {

using Vec3 = std::array<CD, 3>;
using Vec4 = std::array<CD, 4>;
using Vec6 = std::array<CD, 6>;

// Line in P^3 with Pluecker coordinates (p01,p02,p03,p12,p13,p23) and two
// spanning points kept for restrictions.
struct ProjLine {
    Vec6 plucker{};
    Vec4 point_a{}, point_b{};
};

ProjLine line_through(const Vec4& a, const Vec4& b);
ProjLine line_from_plucker(const Vec6& p);

// largest-modulus coordinate scaled to 1
Vec6 normalize_plucker(const Vec6& p);
double plucker_relation_residual(const Vec6& p);

// polarized Pluecker pairing; zero iff the lines meet
CD plucker_pairing(const Vec6& a, const Vec6& b);

// scale-invariant chordal distance between projective vectors
double projective_distance6(const Vec6& a, const Vec6& b);
double projective_distance3(const Vec3& a, const Vec3& b);

// --- binary forms (coefficients of s^{d-k} t^k, k = 0..d) ----------------------

std::vector<CD> binary_mul(const std::vector<CD>& a, const std::vector<CD>& b);
CD binary_eval(const std::vector<CD>& f, CD s, CD t);

// restriction of a degree-d form in 3 or 4 variables to the span of two points
std::vector<CD> restrict_form(const MPolyC& form, const std::vector<CD>& a, const std::vector<CD>& b);

struct BinarySqrt {
    std::vector<CD> q;  // quadratic with q^2 = f
    double residual;    // max coefficient mismatch relative to |f|
};
// square root of a binary quartic that is (approximately) a perfect square
BinarySqrt binary_quartic_sqrt(const std::vector<CD>& f);

// --- conics in P^2 ---------------------------------------------------------------

using Mat3 = std::array<std::array<CD, 3>, 3>;

Mat3 conic_matrix(const MPolyC& conic);  // 3-variable degree-2 form
MPolyC conic_from_matrix(const Mat3& m, int nvars = 3);
CD det3(const Mat3& m);

struct ConicSplit {
    Vec3 p, q;        // the two lines with v^T M v ~ p(v) q(v)
    double residual;  // relative reconstruction error
};
// factor a rank <= 2 conic into two linear forms
ConicSplit split_conic(const Mat3& m);

// two independent points spanning the line {l . x = 0} in P^2
std::pair<Vec3, Vec3> points_on_line(const Vec3& l);

}  // namespace rdlab
