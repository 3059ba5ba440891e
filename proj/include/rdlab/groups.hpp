#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rdlab/perm.hpp"
#include "rdlab/rng.hpp"

namespace rdlab {

// Permutation group with a base-and-strong-generating-set cache.
// The BSGS is built on construction; the group is immutable afterwards.
class PermGroup {
  public:
    PermGroup(int degree, std::vector<Perm> generators);

    int degree() const { return degree_; }
    const std::vector<Perm>& generators() const { return gens_; }

    mpz_class order() const;
    bool contains(const Perm& g) const;
    bool is_trivial() const { return order() == 1; }

    // uniform over the group: one transversal element per base level
    Perm random_element(Rng& rng) const;

    // all elements; throws resource_limit beyond the cap
    std::vector<Perm> elements(std::size_t cap = 1 << 20) const;

  private:
    struct Level {
        int base = -1;
        std::vector<Perm> gens;
        std::map<int, Perm> transversal;  // point -> coset representative
    };

    void rebuild_levels();
    void rebuild_orbit(std::size_t i);
    void schreier_sims();
    // returns the residue and the level where sifting stopped
    std::pair<Perm, std::size_t> sift(Perm g, std::size_t from) const;

    int degree_;
    std::vector<Perm> gens_;
    std::vector<Perm> strong_;
    std::vector<Level> levels_;
};

struct DerivedSeries {
    std::vector<mpz_class> orders;  // G, G', G'', ... until stable
    bool solvable = false;
};

mpz_class order(const PermGroup& g);
bool contains(const PermGroup& g, const Perm& p);

PermGroup derived_subgroup(const PermGroup& g);
DerivedSeries derived_series(const PermGroup& g);

// smallest normal subgroup of g containing the given elements
PermGroup normal_closure(const PermGroup& g, const std::vector<Perm>& elems);

struct FactorOptions {
    std::uint64_t seed = 0;
    int samples = 48;              // conjugacy-class sampling width per simplicity test
    mpz_class order_budget = mpz_class(10000000);
    std::size_t coset_cap = 100000;  // largest quotient action we will build
};

// Jordan-Hoelder factor labels from the catalogue {C_p, A_n, PSL(2,7),
// W(E6)+, W(E7)+}; an unidentified simple factor is reported as
// unknown(order), never guessed.
std::vector<std::string> composition_factors(const PermGroup& g, const FactorOptions& opt = {});

// Monte-Carlo simplicity certificate: normal closures of sampled class
// representatives are all the full group.
bool sampled_simple(const PermGroup& g, std::uint64_t seed, int samples = 48);

// --- the 27-line label scheme (blow-up classes) -----------------------------

// labels 0..26: a_1..a_6, b_1..b_6, c_{ij} for 1<=i<j<=6
int schlafli_label_count();
std::string schlafli_label_name(int idx);
int schlafli_label_index(const std::string& name);
// blow-up incidence: a_i meets b_j iff i!=j, a_i meets c_jk iff i in {j,k},
// b_i meets c_jk iff i in {j,k}, c_ij meets c_kl iff the pairs are disjoint
bool schlafli_adjacent(int u, int v);

// W(E6) acting on the 27 labels: the six-point label permutations together
// with the Cremona involution based at points 1,2,3
PermGroup we6_combinatorial();

}  // namespace rdlab
