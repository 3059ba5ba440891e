#pragma once

#include <array>
#include <optional>

#include "rdlab/cubic_lines.hpp"
#include "rdlab/geometry.hpp"
#include "rdlab/rng.hpp"

namespace rdlab {

// Quartic form in P^2: 15 coefficients in the fixed lexicographic monomial
// order of monomial_exponents(4, 3), held max-modulus normalized.
struct PlaneQuartic {
    std::vector<CD> coeffs;
    bool smoothness_checked = false;

    MPolyC form() const { return form_from_dense(4, 3, coeffs); }
};

PlaneQuartic make_quartic(std::vector<CD> coeffs15);
bool quartic_is_smooth(const PlaneQuartic& c, double tol = 1e-8);
PlaneQuartic random_smooth_quartic(Rng& rng);

struct Bitangent {
    Vec3 line{};                       // normalized covector
    std::array<Vec3, 2> contacts{};    // contact points (equal for a hyperflex)
    std::vector<CD> witness;           // binary quadratic q with C|_line = s q^2
    double witness_residual = 0;
    bool hyperflex = false;
};

// witness, contacts and residual for a candidate bitangent line
Bitangent make_bitangent(const PlaneQuartic& c, const Vec3& line);

// all 28 bitangents via the two perfect-square conditions per line chart
std::vector<Bitangent> bitangents(const PlaneQuartic& c, std::uint64_t seed);

// the split form xy U - V^2 with the t-pencil attached
struct QuarticSplitForm {
    MPolyC U, V;         // conics in the moved coordinates
    Mat3 mu, mv, mxy;    // matrices of U, V and the conic xy
    std::array<Vec3, 3> to_moved;    // rows of the coordinate change
    std::array<Vec3, 3> from_moved;  // inverse rows
    double residual = 0;             // reconstruction mismatch
};
QuarticSplitForm fit_split_form(const PlaneQuartic& c, const Bitangent& t1, const Bitangent& t2);

struct FromTwoResult {
    std::vector<Bitangent> first_pass;  // 12: the seed pair plus 5 new pairs
    std::vector<CD> quintic;            // monic-normalized degree-5 polynomial in t (ascending)
    std::vector<Bitangent> all;         // the completed set of 28
};
FromTwoResult bitangents_from_two(const PlaneQuartic& c, const Bitangent& t1, const Bitangent& t2);

// projection of a cubic surface from a point off its lines: the branch
// quartic together with all 28 bitangents (27 line images + the exceptional)
struct ProjectionResult {
    PlaneQuartic quartic;
    std::vector<Bitangent> bitangents;  // 28, exceptional line last
};
ProjectionResult quartic_from_cubic_point(const CubicSurface& s, const Vec4& p,
                                          const LineConfiguration* lines = nullptr);

struct SyzygyVerdict {
    bool syzygetic = false;
    bool ambiguous = false;   // rank decision without a clear singular-value gap
    bool degenerate = false;  // coincident contact points among the inputs
    double gap = 0;           // sigma_5 / sigma_6
};
SyzygyVerdict syzygy_test(const PlaneQuartic& c, const std::vector<Bitangent>& bs);

struct ConfigCounts {
    int steiner = 0;
    int aronhold = 0;
    bool exact = true;                  // no tolerance-ambiguous rank decisions
    int steiner_lo = 0, steiner_hi = 0;  // intervals when not exact
    int aronhold_lo = 0, aronhold_hi = 0;
    std::vector<std::string> flagged;
};
ConfigCounts classify_configurations(const PlaneQuartic& c, const std::vector<Bitangent>& all28,
                                     long triple_budget = 100000000L);

}  // namespace rdlab
