#include "rdlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdlab {

CD polish_root(const PolyC& p, CD x, int iters) {
    PolyC dp = p.derivative();
    for (int i = 0; i < iters; ++i) {
        CD f = p.eval(x);
        CD d = dp.eval(x);
        if (std::abs(d) == 0.0) break;
        CD step = f / d;
        x -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

RootSet roots(const PolyC& p_in, double tol) {
    if (p_in.degree() < 1) throw invalid_input("roots: degree >= 1 required");
    if (tol <= 0) throw invalid_input("roots: tolerance must be positive");

    // normalize to monic; remember the scale for residuals
    PolyC p = p_in * (CD(1, 0) / p_in.lc());
    const int n = p.degree();

    // Cauchy bound: all roots inside 1 + max|a_k|
    double bound = 0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(p[static_cast<std::size_t>(k)]));
    double radius = 1.0 + bound;

    // fixed asymmetric phase so symmetric polynomials (x^2+1, cyclotomics)
    // do not start on a stalling symmetric orbit
    std::vector<CD> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double th = 6.283185307179586477 * (j + 0.25) / n + 0.43;
        z[static_cast<std::size_t>(j)] = radius * CD(std::cos(th), std::sin(th));
    }

    PolyC dp = p.derivative();
    const int max_iter = 400;
    double worst = 0;
    for (int it = 0; it < max_iter; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            CD zi = z[static_cast<std::size_t>(i)];
            CD f = p.eval(zi);
            CD d = dp.eval(zi);
            CD newton = (std::abs(d) > 0) ? f / d : CD(0.1, 0.1);
            CD sum(0, 0);
            for (int j = 0; j < n; ++j)
                if (j != i) sum += CD(1, 0) / (zi - z[static_cast<std::size_t>(j)]);
            CD denom = CD(1, 0) - newton * sum;
            CD step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
            z[static_cast<std::size_t>(i)] = zi - step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15 * radius) break;
    }
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = polish_root(p, z[static_cast<std::size_t>(i)]);

    std::sort(z.begin(), z.end(), [](const CD& a, const CD& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    RootSet out;
    out.tolerance = tol;
    out.roots = z;
    out.residuals.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        // backward-error residual: |p(z)| relative to the evaluation magnitude,
        // so the default tolerance is meaningful at any coefficient scale
        double mag = 0, zp = 1, az = std::abs(z[i]);
        for (int k = 0; k <= n; ++k) {
            mag += std::abs(p[static_cast<std::size_t>(k)]) * zp;
            zp *= az;
        }
        out.residuals[i] = std::abs(p.eval(z[i])) / std::max(1.0, mag);
        worst = std::max(worst, out.residuals[i]);
    }
    if (worst > tol) {
        std::ostringstream os;
        os << "roots: no convergence, worst residual " << worst << " > tol " << tol;
        throw numerical_failure(os.str());
    }
    return out;
}

RootSet roots(const PolyQ& p, double tol) { return roots(to_complex(p), tol); }

}  // namespace rdlab
