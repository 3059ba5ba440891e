#include "rdlab/groups.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace rdlab {

// ---- BSGS (Schreier-Sims) ----------------------------------------------------

PermGroup::PermGroup(int degree, std::vector<Perm> generators) : degree_(degree) {
    for (const auto& g : generators) {
        if (g.degree() != degree) throw invalid_input("PermGroup: generator degree mismatch");
        if (!g.is_identity()) gens_.push_back(g);
    }
    strong_ = gens_;
    rebuild_levels();
    schreier_sims();
}

void PermGroup::rebuild_levels() {
    // base: greedily extend so every strong generator moves some base point
    std::vector<int> base;
    for (const auto& g : strong_) {
        bool moves = false;
        for (int b : base)
            if (g(b) != b) {
                moves = true;
                break;
            }
        if (!moves)
            for (int p = 0; p < degree_; ++p)
                if (g(p) != p) {
                    base.push_back(p);
                    break;
                }
    }
    levels_.assign(base.size(), Level{});
    for (std::size_t i = 0; i < base.size(); ++i) {
        Level& L = levels_[i];
        L.base = base[i];
        for (const auto& g : strong_) {
            bool fixes_prefix = true;
            for (std::size_t j = 0; j < i; ++j)
                if (g(base[j]) != base[j]) {
                    fixes_prefix = false;
                    break;
                }
            if (fixes_prefix) L.gens.push_back(g);
        }
        rebuild_orbit(i);
    }
}

void PermGroup::rebuild_orbit(std::size_t i) {
    Level& L = levels_[i];
    L.transversal.clear();
    L.transversal[L.base] = Perm::identity(degree_);
    std::deque<int> queue{L.base};
    while (!queue.empty()) {
        int pt = queue.front();
        queue.pop_front();
        const Perm rep = L.transversal.at(pt);
        for (const auto& s : L.gens) {
            int to = s(pt);
            if (!L.transversal.count(to)) {
                L.transversal[to] = s * rep;
                queue.push_back(to);
            }
        }
    }
}

std::pair<Perm, std::size_t> PermGroup::sift(Perm g, std::size_t from) const {
    for (std::size_t i = from; i < levels_.size(); ++i) {
        int to = g(levels_[i].base);
        auto it = levels_[i].transversal.find(to);
        if (it == levels_[i].transversal.end()) return {g, i};
        g = it->second.inverse() * g;
    }
    return {g, levels_.size()};
}

void PermGroup::schreier_sims() {
    // test all Schreier generators; on any non-trivial residue add it to the
    // strong set and restart.  Quadratic but transparently correct, and the
    // groups here are desk scale.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < levels_.size() && !changed; ++i) {
            Level& L = levels_[i];
            for (auto it = L.transversal.begin(); it != L.transversal.end() && !changed; ++it) {
                const Perm& rep = it->second;
                for (const auto& s : L.gens) {
                    const Perm& into = L.transversal.at(s(it->first));
                    Perm schreier = into.inverse() * (s * rep);
                    if (schreier.is_identity()) continue;
                    Perm res = sift(schreier, i + 1).first;
                    if (!res.is_identity()) {
                        strong_.push_back(res);
                        rebuild_levels();
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
}

mpz_class PermGroup::order() const {
    mpz_class o = 1;
    for (const auto& L : levels_) o *= static_cast<unsigned long>(L.transversal.size());
    return o;
}

bool PermGroup::contains(const Perm& g) const {
    if (g.degree() != degree_) throw invalid_input("contains: degree mismatch");
    auto [res, lvl] = sift(g, 0);
    return res.is_identity();
}

Perm PermGroup::random_element(Rng& rng) const {
    Perm g = Perm::identity(degree_);
    for (const auto& L : levels_) {
        std::size_t k = static_cast<std::size_t>(rng.next_u64() % L.transversal.size());
        auto it = L.transversal.begin();
        std::advance(it, static_cast<long>(k));
        g = g * it->second;
    }
    return g;
}

std::vector<Perm> PermGroup::elements(std::size_t cap) const {
    if (order() > static_cast<unsigned long>(cap)) throw resource_limit("elements: group too large to enumerate");
    std::vector<Perm> out{Perm::identity(degree_)};
    if (levels_.empty()) return out;
    for (std::size_t i = levels_.size(); i-- > 0;) {
        std::vector<Perm> next;
        next.reserve(out.size() * levels_[i].transversal.size());
        for (const auto& [pt, rep] : levels_[i].transversal)
            for (const auto& tail : out) next.push_back(rep * tail);
        out = std::move(next);
    }
    return out;
}

mpz_class order(const PermGroup& g) { return g.order(); }
bool contains(const PermGroup& g, const Perm& p) { return g.contains(p); }

// ---- normal closure and derived series ----------------------------------------

PermGroup normal_closure(const PermGroup& g, const std::vector<Perm>& elems) {
    for (const auto& e : elems) {
        if (e.degree() != g.degree()) throw invalid_input("normal_closure: degree mismatch");
        if (!g.contains(e)) throw invalid_input("normal_closure: element outside the group");
    }
    // generators are pruned on entry: only elements that genuinely grow the
    // subgroup are kept, so the list stays logarithmic in the order
    std::vector<Perm> hgens;
    PermGroup h(g.degree(), {});
    auto absorb = [&](const Perm& e) {
        if (e.is_identity() || h.contains(e)) return false;
        hgens.push_back(e);
        h = PermGroup(g.degree(), hgens);
        return true;
    };
    for (const auto& e : elems) absorb(e);
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& s : g.generators()) {
            for (std::size_t xi = 0; xi < hgens.size(); ++xi) {
                Perm c = s * hgens[xi] * s.inverse();
                if (absorb(c)) grew = true;
            }
            if (grew) break;
        }
    }
    return h;
}

PermGroup derived_subgroup(const PermGroup& g) {
    // prune to a small generating set first; commutator pairs of a fat list
    // (e.g. one permutation per monodromy loop) would blow up quadratically
    std::vector<Perm> small;
    {
        PermGroup sub(g.degree(), {});
        for (const auto& e : g.generators()) {
            if (sub.contains(e)) continue;
            small.push_back(e);
            sub = PermGroup(g.degree(), small);
            if (sub.order() == g.order()) break;
        }
    }
    std::vector<Perm> comms;
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = i + 1; j < small.size(); ++j) {
            Perm c = small[i].inverse() * small[j].inverse() * small[i] * small[j];
            if (!c.is_identity()) comms.push_back(c);
        }
    if (comms.empty()) return PermGroup(g.degree(), {});
    return normal_closure(g, comms);
}

DerivedSeries derived_series(const PermGroup& g) {
    DerivedSeries out;
    PermGroup cur = g;
    out.orders.push_back(cur.order());
    while (true) {
        PermGroup next = derived_subgroup(cur);
        out.orders.push_back(next.order());
        if (next.order() == cur.order()) break;  // perfect (stable)
        if (next.order() == 1) break;
        cur = next;
    }
    out.solvable = (out.orders.back() == 1);
    return out;
}

// ---- composition factors -------------------------------------------------------

bool sampled_simple(const PermGroup& g, std::uint64_t seed, int samples) {
    if (g.order() == 1) return false;
    Rng rng(seed, 0xC1A55);
    std::set<Perm> seen;
    for (int i = 0; i < samples; ++i) {
        Perm x = g.random_element(rng);
        if (x.is_identity() || seen.count(x)) continue;
        seen.insert(x);
        PermGroup n = normal_closure(g, {x});
        if (n.order() != g.order()) return false;
    }
    return true;
}

namespace {

// first sampled element whose normal closure is proper and nontrivial
bool find_proper_normal(const PermGroup& g, std::uint64_t seed, int samples, PermGroup& out) {
    Rng rng(seed, 0xC1A55);
    std::set<Perm> seen;
    for (int i = 0; i < samples; ++i) {
        Perm x = g.random_element(rng);
        if (x.is_identity() || seen.count(x)) continue;
        seen.insert(x);
        PermGroup n = normal_closure(g, {x});
        if (n.order() != g.order() && n.order() > 1) {
            out = n;
            return true;
        }
    }
    return false;
}

std::vector<std::string> prime_factor_labels(mpz_class m) {
    std::vector<std::string> out;
    mpz_class p = 2;
    while (m > 1) {
        if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            out.push_back("C" + p.get_str());
            m /= p;
        } else {
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        }
    }
    return out;
}

// faithful action of g on the right cosets of n
PermGroup coset_action(const PermGroup& g, const PermGroup& n, std::size_t cap) {
    std::vector<Perm> reps{Perm::identity(g.degree())};
    auto find_coset = [&](const Perm& x) -> int {
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (n.contains(x * reps[i].inverse())) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (const auto& s : g.generators()) {
            Perm x = reps[i] * s;
            if (find_coset(x) < 0) {
                reps.push_back(x);
                if (reps.size() > cap) throw resource_limit("coset action exceeds the configured cap");
            }
        }
    }
    int idx = static_cast<int>(reps.size());
    std::vector<Perm> images;
    for (const auto& s : g.generators()) {
        std::vector<int> im(static_cast<std::size_t>(idx));
        for (int i = 0; i < idx; ++i) {
            int j = find_coset(reps[static_cast<std::size_t>(i)] * s);
            im[static_cast<std::size_t>(i)] = j;
        }
        images.emplace_back(im);
    }
    return PermGroup(idx, images);
}

// identification by order within the catalogue; ambiguous orders are broken
// by sampled element orders, or honestly reported unknown
std::string identify_simple(const PermGroup& g, std::uint64_t seed) {
    mpz_class o = g.order();
    if (mpz_probab_prime_p(o.get_mpz_t(), 30)) return "C" + o.get_str();
    struct Entry {
        unsigned long order;
        const char* label;
    };
    static const Entry catalogue[] = {
        {60, "A5"},      {168, "PSL(2,7)"}, {360, "A6"},          {2520, "A7"},
        {181440, "A9"},  {1814400, "A10"},  {25920, "W(E6)+"},    {1451520, "W(E7)+"},
    };
    for (const auto& e : catalogue)
        if (o == e.order) return e.label;
    if (o == 20160) {
        // A8 vs PSL(3,4): only A8 has elements of order 6 or 15
        Rng rng(seed, 0xA8);
        for (int i = 0; i < 96; ++i) {
            int k = g.random_element(rng).order();
            if (k == 6 || k == 15) return "A8";
        }
        return "unknown(20160)";
    }
    return "unknown(" + o.get_str() + ")";
}

void factors_rec(const PermGroup& g, const FactorOptions& opt, std::vector<std::string>& out) {
    mpz_class o = g.order();
    if (o == 1) return;
    if (o > opt.order_budget) throw resource_limit("composition_factors: order exceeds the budget");

    PermGroup d = derived_subgroup(g);
    if (d.order() < o) {
        auto primes = prime_factor_labels(o / d.order());
        out.insert(out.end(), primes.begin(), primes.end());
        factors_rec(d, opt, out);
        return;
    }
    // perfect group: split if a sampled closure is proper, else identify
    PermGroup n(g.degree(), {});
    if (find_proper_normal(g, opt.seed, opt.samples, n)) {
        factors_rec(n, opt, out);
        factors_rec(coset_action(g, n, opt.coset_cap), opt, out);
        return;
    }
    out.push_back(identify_simple(g, opt.seed));
}

}  // namespace

std::vector<std::string> composition_factors(const PermGroup& g, const FactorOptions& opt) {
    std::vector<std::string> out;
    factors_rec(g, opt, out);
    std::sort(out.begin(), out.end());
    return out;
}

// ---- the 27-line labels and W(E6) ----------------------------------------------

namespace {

// index layout: 0..5 = a_1..a_6, 6..11 = b_1..b_6, 12..26 = c_{ij} (i<j, row-major)
struct CPair {
    int i, j;
};

std::vector<CPair> cpairs() {
    std::vector<CPair> v;
    for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j) v.push_back({i, j});
    return v;
}

int cindex(int i, int j) {
    if (i > j) std::swap(i, j);
    static const auto pairs = cpairs();
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].i == i && pairs[k].j == j) return 12 + static_cast<int>(k);
    throw invalid_input("bad c_{ij} pair");
}

}  // namespace

int schlafli_label_count() { return 27; }

std::string schlafli_label_name(int idx) {
    if (idx < 0 || idx >= 27) throw invalid_input("label index out of range");
    if (idx < 6) return "a" + std::to_string(idx + 1);
    if (idx < 12) return "b" + std::to_string(idx - 5);
    static const auto pairs = cpairs();
    const auto& p = pairs[static_cast<std::size_t>(idx - 12)];
    return "c" + std::to_string(p.i) + std::to_string(p.j);
}

int schlafli_label_index(const std::string& name) {
    for (int i = 0; i < 27; ++i)
        if (schlafli_label_name(i) == name) return i;
    throw invalid_input("unknown line label: " + name);
}

bool schlafli_adjacent(int u, int v) {
    if (u == v) return false;
    auto kind = [](int x) { return x < 6 ? 0 : (x < 12 ? 1 : 2); };
    auto point = [](int x) { return (x % 6) + 1; };
    static const auto pairs = cpairs();
    int ku = kind(u), kv = kind(v);
    if (ku > kv) {
        std::swap(u, v);
        std::swap(ku, kv);
    }
    if (ku == 0 && kv == 0) return false;                       // a_i, a_j skew
    if (ku == 1 && kv == 1) return false;                       // b_i, b_j skew
    if (ku == 0 && kv == 1) return point(u) != point(v);        // a_i meets b_j iff i != j
    if (kv == 2) {
        const auto& p = pairs[static_cast<std::size_t>(v - 12)];
        if (ku == 0 || ku == 1) {
            int i = point(u);
            return i == p.i || i == p.j;                        // a_i or b_i meets c_jk iff i in {j,k}
        }
        const auto& q = pairs[static_cast<std::size_t>(u - 12)];
        return q.i != p.i && q.i != p.j && q.j != p.i && q.j != p.j;  // disjoint index pairs meet
    }
    return false;
}

PermGroup we6_combinatorial() {
    // label permutations induced by a permutation of the six points
    auto induced = [&](const std::vector<int>& pt /* images of 1..6 at idx 0..5 */) {
        std::vector<int> im(27);
        for (int i = 0; i < 6; ++i) {
            im[static_cast<std::size_t>(i)] = pt[static_cast<std::size_t>(i)] - 1;
            im[static_cast<std::size_t>(6 + i)] = 6 + pt[static_cast<std::size_t>(i)] - 1;
        }
        static const auto pairs = cpairs();
        for (std::size_t k = 0; k < pairs.size(); ++k)
            im[12 + k] = cindex(pt[static_cast<std::size_t>(pairs[k].i - 1)],
                                pt[static_cast<std::size_t>(pairs[k].j - 1)]);
        return Perm(im);
    };
    Perm swap12 = induced({2, 1, 3, 4, 5, 6});
    Perm cyc = induced({2, 3, 4, 5, 6, 1});

    // Cremona involution based at points 1,2,3: a_i <-> c_jk for {i,j,k}={1,2,3},
    // b_i <-> c_jk for {i,j,k}={4,5,6}, everything else fixed
    std::vector<int> im(27);
    for (int i = 0; i < 27; ++i) im[static_cast<std::size_t>(i)] = i;
    auto swp = [&](int u, int v) {
        im[static_cast<std::size_t>(u)] = v;
        im[static_cast<std::size_t>(v)] = u;
    };
    swp(0, cindex(2, 3));
    swp(1, cindex(1, 3));
    swp(2, cindex(1, 2));
    swp(6 + 3, cindex(5, 6));  // b_4 <-> c_56
    swp(6 + 4, cindex(4, 6));  // b_5 <-> c_46
    swp(6 + 5, cindex(4, 5));  // b_6 <-> c_45
    Perm cremona{im};

    return PermGroup(27, {swap12, cyc, cremona});
}

}  // namespace rdlab
