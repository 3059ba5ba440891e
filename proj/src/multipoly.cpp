#include "rdlab/multipoly.hpp"

namespace rdlab {
namespace {

void enumerate(int deg, int nvars, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == nvars - 1) {
        cur.push_back(deg);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int k = deg; k >= 0; --k) {
        cur.push_back(k);
        enumerate(deg - k, nvars, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(int deg, int nvars) {
    if (deg < 0 || nvars < 1) throw invalid_input("monomial_exponents: bad arguments");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    enumerate(deg, nvars, cur, out);
    return out;
}

}  // namespace rdlab
