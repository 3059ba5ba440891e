#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "rdlab/groups.hpp"
#include "rdlab/homotopy.hpp"

namespace rdlab {

// {C = 0, Hessian(C) = 0} in the z = 1 chart; curve coefficients are the
// parameters, fiber degree 3d(d-2)
ParametricSystem flex_system(int d);

// two plane curves of degrees r and s with all coefficients as parameters;
// fiber degree rs
ParametricSystem bezout_system(int r, int s);

// the 27-lines chart system with the 20 surface coefficients as parameters
ParametricSystem lines27_system();

struct FamilySetup {
    std::string name;
    ParametricSystem system;
    std::vector<CD> basepoint;
    std::vector<std::vector<CD>> fiber;
};

FamilySetup lines27_family(std::uint64_t seed);
FamilySetup bezout_family(int r, int s, std::uint64_t seed);
FamilySetup flex_family(int d, std::uint64_t seed);

struct MonodromyOptions {
    std::uint64_t seed = 0;
    int max_loops = 200;
    int waypoints = 4;
    double radius = 2.0;
    int stall_limit = 25;          // stop after this many loops without growth
    mpz_class target_order = 0;    // stop early when reached (0 = no target)
    int resample_cap = 400;        // total loop attempts including failures
    TrackOptions track;
};

struct LoopRecord {
    std::vector<std::vector<CD>> waypoints;  // closed: starts and ends at the basepoint
    Perm permutation;
};

struct MonodromyCertificate {
    std::string family;
    std::vector<CD> basepoint;
    std::vector<std::vector<CD>> fiber;
    std::vector<LoopRecord> loops;
    int discarded_loops = 0;
    bool complete = true;  // false when a fiber failed to match bijectively
    mpz_class order = 0;
    bool solvable = false;
    std::vector<mpz_class> derived_orders;
};

MonodromyCertificate monodromy_group(const FamilySetup& family, const MonodromyOptions& opt = {});

// track one closed seeded loop; returns the fiber permutation or nullopt on
// path failure / ambiguous matching
std::optional<Perm> track_loop(const ParametricSystem& sys, const std::vector<CD>& basepoint,
                               const std::vector<std::vector<CD>>& fiber,
                               const std::vector<std::vector<CD>>& waypoints, const TrackOptions& topt,
                               bool* matched = nullptr);

// exact count of rational plane curves of degree d through 3d-1 points
mpz_class kontsevich_nd(int d);

}  // namespace rdlab
