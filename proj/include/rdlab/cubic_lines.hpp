#pragma once

#include <array>
#include <optional>

#include "rdlab/geometry.hpp"
#include "rdlab/groups.hpp"
#include "rdlab/homotopy.hpp"
#include "rdlab/rng.hpp"

namespace rdlab {

// Cubic form in P^3: 20 coefficients in the fixed lexicographic monomial
// order of monomial_exponents(3, 4), held max-modulus normalized.
struct CubicSurface {
    std::vector<CD> coeffs;
    bool smoothness_checked = false;

    MPolyC form() const { return form_from_dense(3, 4, coeffs); }
};

CubicSurface make_surface(std::vector<CD> coeffs20);

// sum a_i X_i^3 on the hyperplane X_0+...+X_4 = 0, X_4 eliminated
CubicSurface pentahedral_surface(const std::array<CD, 5>& a);

CubicSurface fermat_cubic();
CubicSurface clebsch_cubic();
CubicSurface random_smooth_cubic(Rng& rng);

// singular-point search with the path solver over three charts
bool surface_is_smooth(const CubicSurface& s, double tol = 1e-8);

struct LineConfiguration {
    std::vector<ProjLine> lines;               // 27, sorted by normalized Pluecker
    std::vector<std::vector<bool>> adjacency;  // meet relation
    std::vector<int> labels;                   // schlafli label index per line; empty if unlabeled
};

double line_on_surface_residual(const CubicSurface& s, const ProjLine& l);

// all 27 lines via total-degree homotopy in up to four line charts
LineConfiguration lines_on_cubic(const CubicSurface& s, std::uint64_t seed);

// single pass of the plane-pencil construction: the 10 new lines cut out by
// the degree-5 discriminant of the conic pencil through l
struct PencilResult {
    std::vector<CD> quintic;      // binary form coefficients, degree exactly 5
    std::vector<ProjLine> lines;  // 10 new lines
};
PencilResult pencil_lines(const CubicSurface& s, const ProjLine& l);

// closure of pencil passes from one line to the full configuration
LineConfiguration lines_from_one(const CubicSurface& s, const ProjLine& l);

// blow-up of six generic rational points: labeled configuration
using RatPoint = std::array<Rat, 3>;
std::pair<CubicSurface, LineConfiguration> blowup_cubic(const std::array<RatPoint, 6>& points);

struct DoubleSix {
    std::array<int, 6> a, b;  // line indices into the configuration
};
struct DoubleSixes {
    std::vector<std::array<int, 6>> sixers;
    std::vector<DoubleSix> pairs;
};
DoubleSixes double_sixes(const LineConfiguration& cfg);

// 27 lines, 10-regular adjacency, complement srg(27,16,10,8)
void validate_configuration(const LineConfiguration& cfg);

// meet test threshold used to build adjacency
bool lines_meet(const ProjLine& a, const ProjLine& b, double tol = 1e-7);

}  // namespace rdlab
