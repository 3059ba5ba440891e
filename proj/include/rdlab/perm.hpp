#pragma once

#include <numeric>
#include <vector>

#include "rdlab/errors.hpp"

namespace rdlab {

// Permutation of {0..d-1}; img[i] is the image of i.
struct Perm {
    std::vector<int> img;

    Perm() = default;
    explicit Perm(std::vector<int> images) : img(std::move(images)) {
        std::vector<bool> seen(img.size(), false);
        for (int v : img) {
            if (v < 0 || v >= static_cast<int>(img.size()) || seen[static_cast<std::size_t>(v)])
                throw invalid_input("Perm: images are not a bijection");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }

    static Perm identity(int d) {
        std::vector<int> v(static_cast<std::size_t>(d));
        std::iota(v.begin(), v.end(), 0);
        Perm p;
        p.img = std::move(v);
        return p;
    }

    // cycles given as point lists, remaining points fixed
    static Perm from_cycles(int d, const std::vector<std::vector<int>>& cycles) {
        Perm p = identity(d);
        for (const auto& c : cycles)
            for (std::size_t i = 0; i < c.size(); ++i)
                p.img[static_cast<std::size_t>(c[i])] = c[(i + 1) % c.size()];
        return Perm(p.img);  // re-validate
    }

    int degree() const { return static_cast<int>(img.size()); }
    int operator()(int x) const { return img[static_cast<std::size_t>(x)]; }

    bool is_identity() const {
        for (int i = 0; i < degree(); ++i)
            if (img[static_cast<std::size_t>(i)] != i) return false;
        return true;
    }

    // (a*b)(x) = a(b(x))
    friend Perm operator*(const Perm& a, const Perm& b) {
        Perm r;
        r.img.resize(b.img.size());
        for (std::size_t i = 0; i < b.img.size(); ++i)
            r.img[i] = a.img[static_cast<std::size_t>(b.img[i])];
        return r;
    }

    Perm inverse() const {
        Perm r;
        r.img.resize(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) r.img[static_cast<std::size_t>(img[i])] = static_cast<int>(i);
        return r;
    }

    friend bool operator==(const Perm& a, const Perm& b) { return a.img == b.img; }
    friend bool operator<(const Perm& a, const Perm& b) { return a.img < b.img; }

    int order() const {
        Perm p = *this, e = identity(degree());
        int k = 1;
        while (!(p == e)) {
            p = p * (*this);
            ++k;
        }
        return k;
    }
};

}  // namespace rdlab
