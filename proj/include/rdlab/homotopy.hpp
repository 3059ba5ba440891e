#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rdlab/multipoly.hpp"
#include "rdlab/rng.hpp"

namespace rdlab {

// Square polynomial system in `unknowns` variables followed by `parameters`
// parameter slots; equations are sparse polynomials over C in all of them.
struct ParametricSystem {
    std::vector<MPolyC> equations;
    int unknowns = 0;
    int parameters = 0;
    long fiber_degree = 0;

    void validate() const;
};

struct TrackOptions {
    double corrector_tol = 1e-11;  // Newton displacement target per step
    double h_init = 0.05;
    double h_min = 1e-13;
    double blowup = 1e7;
    int newton_iters = 3;
    int max_steps = 20000;
};

struct PathPoint {
    std::vector<CD> x;
    bool success = false;
    std::string failure;  // "divergence", "step underflow", ...
};

// Track solutions of F(x; p(t)) = 0 along the straight parameter segment
// p(t) = (1-t) p0 + t p1.  One result per start, never silently dropped.
std::vector<PathPoint> track_segment(const ParametricSystem& sys, const std::vector<std::vector<CD>>& starts,
                                     const std::vector<CD>& p0, const std::vector<CD>& p1,
                                     const TrackOptions& opt = {});

// Newton iteration at fixed parameters.
std::vector<CD> newton_polish(const ParametricSystem& sys, std::vector<CD> x, const std::vector<CD>& params,
                              int iters = 10);
double system_residual(const ParametricSystem& sys, const std::vector<CD>& x, const std::vector<CD>& params);

struct SolveStats {
    int paths_total = 0;
    int paths_finite = 0;
    int paths_diverged = 0;
    int paths_failed = 0;
};

// All isolated solutions of the square system F(x; params fixed) via a
// total-degree start system x_i^{d_i} = g_i with a random gamma twist.
std::vector<std::vector<CD>> solve_total_degree(const ParametricSystem& sys, const std::vector<CD>& params,
                                                Rng& rng, const TrackOptions& opt = {}, SolveStats* stats = nullptr);

// worker pool size from RDLAB_THREADS (default 1); results written by index
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rdlab
