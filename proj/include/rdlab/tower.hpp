#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdlab/expr.hpp"
#include "rdlab/poly.hpp"
#include "rdlab/roots.hpp"

namespace rdlab {

// Degree-(n-1) root substitution x_i -> b_0 x_i^{n-1} + ... + b_{n-1} on a
// degree-n polynomial.  b has length n, top coefficient first.
template <typename T>
struct TschirnhausMap {
    int n = 0;
    std::vector<T> b;

    static TschirnhausMap identity(int n) {
        TschirnhausMap t;
        t.n = n;
        t.b.assign(static_cast<std::size_t>(n), scalar_traits<T>::zero());
        if (n >= 2) t.b[static_cast<std::size_t>(n - 2)] = scalar_traits<T>::one();
        return t;
    }
    // T as a polynomial in x (ascending)
    Poly<T> as_poly() const {
        std::vector<T> asc(b.rbegin(), b.rend());
        return Poly<T>(std::move(asc));
    }
};

using TschirnQ = TschirnhausMap<Rat>;
using TschirnC = TschirnhausMap<CD>;

enum class StepKind {
    LinearShift,
    RadicalAdjunction,
    QuadricDiagonalization,
    LineOnQuadric,
    AuxiliaryCubic,
    TschirnhausSubstitution,
    CoefficientScaling,
};

const char* step_kind_name(StepKind k);
StepKind step_kind_from_name(const std::string& s);

// One invertible reduction step.  Radical adjunctions and the geometric
// bookkeeping steps leave the working polynomial alone (identity on roots);
// shifts, scalings and substitutions move it.
struct TowerStep {
    StepKind kind;
    int radical_degree = 0;   // RadicalAdjunction
    int branch = -1;          // index into the ordered root list of `adjoined`
    std::vector<CD> fwd;      // step-defining scalars, meaning fixed per kind
    PolyC adjoined;           // RadicalAdjunction / AuxiliaryCubic
    ExprPtr inverse;          // root of previous stage from root of next; null = identity
    bool inverse_by_gcd = false;  // recipe degenerate, runtime fiber solve required
};

struct SolutionTower {
    PolyC source;
    std::vector<TowerStep> steps;
    PolyC target;
};

struct RecoveredRoot {
    CD value;
    bool degenerate = false;  // non-generic fiber: one representative returned
};

struct TowerRoots {
    std::vector<CD> roots;
    std::vector<double> residuals;  // backward error of each root against tower.source
    std::vector<bool> degenerate;
};

// --- operations --------------------------------------------------------------

// Monic polynomial whose roots are T(x_i); root-free via Newton power sums,
// exact over exact scalars.
PolyQ apply_tschirnhaus(const PolyQ& p, const TschirnQ& t);
PolyC apply_tschirnhaus(const PolyC& p, const TschirnC& t);

// A root x of p with T(x)=y, from gcd(p(x), y - T(x)).
RecoveredRoot recover_root(const PolyC& p, const TschirnC& t, CD y, double tol = 1e-8);

std::pair<PolyQ, TowerStep> depress(const PolyQ& p);
std::pair<PolyC, TowerStep> depress(const PolyC& p);

// Quadratic Tschirnhaus killing a_1 and a_2; one degree-2 radical adjunction.
SolutionTower kill_two(const PolyQ& p);
SolutionTower kill_two(const PolyC& p, double tol = 1e-9);

struct BringHamiltonOptions {
    bool unit_constant = true;  // append the root-scaling that sets a_n = 1
    double tol = 1e-9;
};

// Quartic Tschirnhaus to x^n + b_4 x^{n-4} + ... + b_{n-1} x + b_{n-1}, then
// optionally rescaled to constant term 1.  Records the full reduction tower:
// quadric diagonalization (4 square roots), the line on the quadric, the
// auxiliary cubic, the substitution and the closing scalings.
SolutionTower bring_hamilton_reduce(const PolyQ& p, const BringHamiltonOptions& opt = {});
SolutionTower bring_hamilton_reduce(const PolyC& p, const BringHamiltonOptions& opt = {});

TowerRoots solve_via_tower(const SolutionTower& tower, double tol = 1e-8);

// Step census used by the reduction invariants.
int count_steps(const SolutionTower& t, StepKind k, int radical_degree = 0);

}  // namespace rdlab
