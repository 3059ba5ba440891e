#include "rdlab/bounds.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#ifndef RDLAB_DATA_DIR
#define RDLAB_DATA_DIR "data"
#endif

namespace rdlab {

int bring_hamilton_bound(int n) {
    if (n < 2) throw invalid_input("bring_hamilton_bound: n >= 2 required");
    return n <= 5 ? 1 : n - 4;
}

int brauer_bound(int n) {
    if (n < 4) throw invalid_input("brauer_bound: n >= 4 required");
    int r = 2;
    long long fact = 1;  // (r-1)! for r = 2
    while (true) {
        // test r+1: r! + 1 <= n
        long long next = fact * r;
        if (next > static_cast<long long>(n) - 1) break;
        fact = next;
        ++r;
        if (r > 20) break;  // 20! is astronomically past any int n
    }
    return n - r;
}

BoundReport best_classical_bound(int n) {
    if (n < 2) throw invalid_input("best_classical_bound: n >= 2 required");
    BoundReport rep;
    rep.subject = "P_" + std::to_string(n);
    int bh = bring_hamilton_bound(n);
    int br = n >= 4 ? brauer_bound(n) : bh;
    if (bh <= br) {
        rep.bound = bh;
        rep.provenance.push_back(n <= 5 ? "Bring (1786): one parameter for n <= 5"
                                        : "Bring-Hamilton: n-4 parameters via the quartic transformation");
    } else {
        rep.bound = br;
        rep.provenance.push_back("Brauer (1975): n-r parameters once n >= (r-1)!+1");
    }
    return rep;
}

std::int64_t hamilton_H(int r) {
    switch (r) {
        case 4: return 5;
        case 5: return 11;
        case 6: return 47;
        case 7: return 923;
        case 8: return 409619;
        case 9: return 83763206255LL;
        default: throw unsupported("hamilton_H: tabulated only for r in 4..9");
    }
}

// ---- catalogue ------------------------------------------------------------------

namespace {

std::mutex cat_mutex;
std::string cat_override;

struct Catalogue {
    std::map<std::string, std::pair<int, std::string>> entries;
    std::string alternating_citation;
};

Catalogue load_catalogue(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("bound catalogue not found at " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw invalid_input("bound catalogue unreadable at " + path + ": " + e.what());
    }
    Catalogue cat;
    if (!j.contains("entries") || !j["entries"].is_object())
        throw invalid_input("bound catalogue missing 'entries' object");
    for (auto& [key, val] : j["entries"].items()) {
        if (!val.contains("bound") || !val["bound"].is_number_integer() || !val.contains("citation"))
            throw invalid_input("bound catalogue entry malformed: " + key);
        cat.entries[key] = {val["bound"].get<int>(), val["citation"].get<std::string>()};
    }
    if (j.contains("alternating_family"))
        cat.alternating_citation = j["alternating_family"].value("citation", "");
    return cat;
}

const Catalogue& catalogue() {
    static Catalogue cat = load_catalogue(catalogue_path());
    static std::string loaded_from = catalogue_path();
    if (loaded_from != catalogue_path()) {  // path changed (tests): reload
        cat = load_catalogue(catalogue_path());
        loaded_from = catalogue_path();
    }
    return cat;
}

// factor label -> {bound, provenance}; throws on uncatalogued factors
std::pair<int, std::string> factor_bound(const std::string& label) {
    const Catalogue& cat = catalogue();
    if (label.size() >= 2 && label[0] == 'C' && std::isdigit(static_cast<unsigned char>(label[1]))) {
        auto it = cat.entries.find("cyclic");
        if (it == cat.entries.end()) throw invalid_input("catalogue lacks the cyclic entry");
        return {it->second.first, label + ": " + it->second.second};
    }
    auto it = cat.entries.find(label);
    if (it != cat.entries.end()) return {it->second.first, label + ": " + it->second.second};
    if (label.size() >= 2 && label[0] == 'A' && std::isdigit(static_cast<unsigned char>(label[1]))) {
        int n = std::stoi(label.substr(1));
        BoundReport rep = best_classical_bound(n);
        return {rep.bound, label + " via " + rep.provenance.front()};
    }
    throw invalid_input("no catalogued bound for factor " + label);
}

}  // namespace

std::string catalogue_path() {
    std::lock_guard<std::mutex> lock(cat_mutex);
    if (!cat_override.empty()) return cat_override;
    if (const char* env = std::getenv("RDLAB_CATALOGUE")) return env;
    return std::string(RDLAB_DATA_DIR) + "/rd_catalogue.json";
}

void set_catalogue_path(const std::string& path) {
    std::lock_guard<std::mutex> lock(cat_mutex);
    cat_override = path;
}

BoundReport group_rd_bound(const PermGroup& g, const FactorOptions& opt) {
    BoundReport rep;
    rep.subject = "group of order " + g.order().get_str();
    if (g.order() == 1) {
        rep.bound = 1;
        rep.provenance.push_back("trivial group");
        return rep;
    }
    auto factors = composition_factors(g, opt);
    rep.bound = 0;
    rep.provenance.push_back("max over Jordan-Hoelder factors of the catalogued bounds");
    for (const auto& f : factors) {
        auto [b, cite] = factor_bound(f);
        rep.provenance.push_back(cite);
        rep.bound = std::max(rep.bound, b);
    }
    return rep;
}

BoundReport group_rd_bound_label(const std::string& label) {
    BoundReport rep;
    rep.subject = label;
    // composite classical labels expand to their factor lists
    if (label.size() >= 2 && label[0] == 'S' && std::isdigit(static_cast<unsigned char>(label[1]))) {
        int n = std::stoi(label.substr(1));
        if (n < 2) throw invalid_input("group_rd_bound: S_n needs n >= 2");
        rep.provenance.push_back("S" + std::to_string(n) + " factors as C2 and A" + std::to_string(n));
        auto [bc, cc] = factor_bound("C2");
        rep.bound = bc;
        rep.provenance.push_back(cc);
        if (n >= 5) {
            auto [ba, ca] = factor_bound("A" + std::to_string(n));
            rep.bound = std::max(rep.bound, ba);
            rep.provenance.push_back(ca);
        }  // S3, S4 are solvable
        return rep;
    }
    if (label == "W(E6)") {
        rep.provenance.push_back("W(E6) factors as C2 and W(E6)+");
        auto [b1, c1] = factor_bound("C2");
        auto [b2, c2] = factor_bound("W(E6)+");
        rep.bound = std::max(b1, b2);
        rep.provenance.push_back(c1);
        rep.provenance.push_back(c2);
        return rep;
    }
    auto [b, cite] = factor_bound(label);
    rep.bound = b;
    rep.provenance.push_back(cite);
    return rep;
}

}  // namespace rdlab
