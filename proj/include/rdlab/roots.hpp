#pragma once

#include <vector>

#include "rdlab/poly.hpp"

namespace rdlab {

struct RootSet {
    std::vector<CD> roots;  // with multiplicity, sorted by (re, im)
    // |p(root)| / max(1, sum_k |a_k||root|^k) on the monic-normalized input:
    // backward error, so the tolerance contract holds at any coefficient scale
    std::vector<double> residuals;
    double tolerance = 0.0;
};

inline constexpr double kDefaultTol = 1e-10;

// All complex roots by Aberth–Ehrlich simultaneous iteration.  Initial guesses
// sit on a circle scaled to the Cauchy root bound with a fixed phase offset,
// so the result is deterministic.  Throws numerical_failure (with the worst
// residual) if the iteration does not reach tol.
RootSet roots(const PolyC& p, double tol = kDefaultTol);
RootSet roots(const PolyQ& p, double tol = kDefaultTol);

// Newton polish of a simple root.
CD polish_root(const PolyC& p, CD x, int iters = 8);

}  // namespace rdlab
