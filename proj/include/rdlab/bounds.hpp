#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdlab/groups.hpp"

namespace rdlab {

struct BoundReport {
    std::string subject;
    int bound = 0;
    std::vector<std::string> provenance;  // rule citations, outermost first
};

// classical polynomial schedules ------------------------------------------------

// 1 for n <= 5, n-4 above
int bring_hamilton_bound(int n);

// n - r* with r* = max{r >= 2 : (r-1)! + 1 <= n}
int brauer_bound(int n);

BoundReport best_classical_bound(int n);

// Hamilton's threshold table, r = 4..9
std::int64_t hamilton_H(int r);

// group bound via Jordan-Hoelder factors over the catalogue ----------------------

// Catalogue entries live in a JSON data file; see catalogue_path().
std::string catalogue_path();
void set_catalogue_path(const std::string& path);  // overrides env/default

BoundReport group_rd_bound(const PermGroup& g, const FactorOptions& opt = {});
BoundReport group_rd_bound_label(const std::string& label);

}  // namespace rdlab
