#include "rdlab/homotopy.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace rdlab {

void ParametricSystem::validate() const {
    if (static_cast<int>(equations.size()) != unknowns)
        throw invalid_input("ParametricSystem: system must be square in the unknowns");
    for (const auto& e : equations)
        if (e.nvars() != unknowns + parameters)
            throw invalid_input("ParametricSystem: equation variable count mismatch");
}

namespace {

// Flattened monomial evaluation against a per-point power table; the table
// is rebuilt once per point and shared by the equations and the Jacobian.
struct CompiledSystem {
    struct Term {
        CD coeff;
        std::vector<std::pair<int, int>> factors;  // (variable, exponent), exponent >= 1
    };
    int nu, np, nvars;
    std::vector<int> maxdeg;  // per variable
    std::vector<std::vector<Term>> eqs;
    std::vector<std::vector<std::vector<Term>>> jac;  // [eq][var]

    explicit CompiledSystem(const ParametricSystem& sys)
        : nu(sys.unknowns), np(sys.parameters), nvars(sys.unknowns + sys.parameters) {
        maxdeg.assign(static_cast<std::size_t>(nvars), 0);
        auto compile = [&](const MPolyC& f) {
            std::vector<Term> out;
            for (const auto& [e, c] : f.terms()) {
                Term t;
                t.coeff = c;
                for (int v = 0; v < nvars; ++v)
                    if (e[static_cast<std::size_t>(v)] > 0) {
                        t.factors.emplace_back(v, e[static_cast<std::size_t>(v)]);
                        maxdeg[static_cast<std::size_t>(v)] =
                            std::max(maxdeg[static_cast<std::size_t>(v)], e[static_cast<std::size_t>(v)]);
                    }
                out.push_back(std::move(t));
            }
            return out;
        };
        for (const auto& f : sys.equations) {
            eqs.push_back(compile(f));
            std::vector<std::vector<Term>> row;
            for (int v = 0; v < nu; ++v) row.push_back(compile(f.ddx(v)));
            jac.push_back(std::move(row));
        }
    }

    struct Scratch {
        std::vector<std::vector<CD>> pow;  // pow[v][k] = x_v^k
    };
    Scratch make_scratch() const {
        Scratch s;
        s.pow.resize(static_cast<std::size_t>(nvars));
        for (int v = 0; v < nvars; ++v)
            s.pow[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(maxdeg[static_cast<std::size_t>(v)]) + 1,
                                                      CD(1, 0));
        return s;
    }
    void fill(const std::vector<CD>& all, Scratch& s) const {
        for (int v = 0; v < nvars; ++v) {
            auto& p = s.pow[static_cast<std::size_t>(v)];
            for (std::size_t k = 1; k < p.size(); ++k) p[k] = p[k - 1] * all[static_cast<std::size_t>(v)];
        }
    }
    CD eval_terms(const std::vector<Term>& terms, const Scratch& s) const {
        CD acc(0, 0);
        for (const auto& t : terms) {
            CD v = t.coeff;
            for (const auto& [var, e] : t.factors) v *= s.pow[static_cast<std::size_t>(var)][static_cast<std::size_t>(e)];
            acc += v;
        }
        return acc;
    }
    void eval(const std::vector<CD>& all, Scratch& s, Eigen::VectorXcd& F) const {
        fill(all, s);
        for (int i = 0; i < nu; ++i) F(i) = eval_terms(eqs[static_cast<std::size_t>(i)], s);
    }
    void eval_jac(const std::vector<CD>& all, Scratch& s, Eigen::MatrixXcd& J) const {
        fill(all, s);
        for (int i = 0; i < nu; ++i)
            for (int v = 0; v < nu; ++v)
                J(i, v) = eval_terms(jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)], s);
    }
};

double vec_norm(const std::vector<CD>& x) {
    double m = 0;
    for (const auto& v : x) m = std::max(m, std::abs(v));
    return m;
}

// Newton corrector at fixed t along the segment; returns displacement of the
// final iteration (convergence measure).
bool correct(const CompiledSystem& cs, CompiledSystem::Scratch& scratch, std::vector<CD>& all, double tol,
             int iters) {
    const int nu = cs.nu;
    Eigen::VectorXcd F(nu);
    Eigen::MatrixXcd J(nu, nu);
    for (int it = 0; it < iters; ++it) {
        cs.eval(all, scratch, F);
        cs.eval_jac(all, scratch, J);
        Eigen::VectorXcd d = J.partialPivLu().solve(-F);
        double dn = 0, xn = 1;
        for (int i = 0; i < nu; ++i) {
            all[static_cast<std::size_t>(i)] += d(i);
            dn = std::max(dn, std::abs(d(i)));
            xn = std::max(xn, std::abs(all[static_cast<std::size_t>(i)]));
        }
        if (!std::isfinite(dn)) return false;
        if (dn <= tol * xn) return true;
    }
    return false;
}

}  // namespace

std::vector<CD> newton_polish(const ParametricSystem& sys, std::vector<CD> x, const std::vector<CD>& params,
                              int iters) {
    CompiledSystem cs(sys);
    auto scratch = cs.make_scratch();
    std::vector<CD> all = x;
    all.insert(all.end(), params.begin(), params.end());
    correct(cs, scratch, all, 1e-15, iters);
    return std::vector<CD>(all.begin(), all.begin() + sys.unknowns);
}

double system_residual(const ParametricSystem& sys, const std::vector<CD>& x, const std::vector<CD>& params) {
    CompiledSystem cs(sys);
    auto scratch = cs.make_scratch();
    std::vector<CD> all = x;
    all.insert(all.end(), params.begin(), params.end());
    Eigen::VectorXcd F(sys.unknowns);
    cs.eval(all, scratch, F);
    double r = 0;
    for (int i = 0; i < sys.unknowns; ++i) r = std::max(r, std::abs(F(i)));
    return r;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int threads = 1;
    if (const char* env = std::getenv("RDLAB_THREADS")) threads = std::max(1, std::atoi(env));
    threads = std::min<int>(threads, static_cast<int>(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::vector<PathPoint> track_segment(const ParametricSystem& sys, const std::vector<std::vector<CD>>& starts,
                                     const std::vector<CD>& p0, const std::vector<CD>& p1,
                                     const TrackOptions& opt) {
    sys.validate();
    if (static_cast<int>(p0.size()) != sys.parameters || static_cast<int>(p1.size()) != sys.parameters)
        throw invalid_input("track_segment: parameter vector size mismatch");
    CompiledSystem cs(sys);
    const int nu = sys.unknowns;

    std::vector<PathPoint> out(starts.size());
    parallel_for(starts.size(), [&](std::size_t pi) {
        PathPoint res;
        auto scratch = cs.make_scratch();
        std::vector<CD> all(starts[pi]);
        all.resize(static_cast<std::size_t>(nu + sys.parameters));
        auto set_params = [&](double t) {
            for (int k = 0; k < sys.parameters; ++k)
                all[static_cast<std::size_t>(nu + k)] =
                    (1.0 - t) * p0[static_cast<std::size_t>(k)] + t * p1[static_cast<std::size_t>(k)];
        };

        Eigen::VectorXcd Ft(nu);
        Eigen::MatrixXcd J(nu, nu);
        double t = 0, h = opt.h_init;
        set_params(0);
        int steps = 0;
        bool ok = true;
        int streak = 0;
        while (t < 1.0 && ok) {
            if (++steps > opt.max_steps) {
                res.failure = "step limit";
                ok = false;
                break;
            }
            double tn = std::min(1.0, t + h);
            std::vector<CD> saved(all);

            // Euler predictor: dx/dt = -J^{-1} dF/dt, with dF/dt from the
            // parameter direction (finite difference in t is exact here in
            // the linear segment only through F's parameter dependence;
            // evaluate analytically via a small parameter step)
            set_params(t);
            cs.eval_jac(all, scratch, J);
            // dF/dt: F is polynomial in params which are linear in t; use a
            // centered difference with the exact segment parametrization
            {
                const double dt = 1e-6;
                set_params(std::min(1.0, t + dt));
                cs.eval(all, scratch, Ft);
                Eigen::VectorXcd Fp = Ft;
                set_params(t);
                cs.eval(all, scratch, Ft);
                Fp -= Ft;
                Fp /= dt;
                Eigen::VectorXcd dx = J.partialPivLu().solve(-Fp);
                double scale = tn - t;
                for (int i = 0; i < nu; ++i) all[static_cast<std::size_t>(i)] += scale * dx(i);
            }

            set_params(tn);
            bool good = correct(cs, scratch, all, opt.corrector_tol, opt.newton_iters);
            double xn = vec_norm(std::vector<CD>(all.begin(), all.begin() + nu));
            if (!std::isfinite(xn) || xn > opt.blowup) {
                res.failure = "divergence";
                ok = false;
                break;
            }
            if (good) {
                t = tn;
                if (++streak >= 3) {
                    h = std::min(h * 2.0, 0.1);
                    streak = 0;
                }
            } else {
                all = saved;
                h /= 2;
                streak = 0;
                if (h < opt.h_min) {
                    res.failure = "step underflow";
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            set_params(1.0);
            correct(cs, scratch, all, 1e-15, 12);
            res.success = true;
            res.x.assign(all.begin(), all.begin() + nu);
        }
        out[pi] = std::move(res);
    });
    return out;
}

std::vector<std::vector<CD>> solve_total_degree(const ParametricSystem& sys, const std::vector<CD>& params,
                                                Rng& rng, const TrackOptions& opt, SolveStats* stats) {
    sys.validate();
    const int nu = sys.unknowns;

    // x-degrees of the equations
    std::vector<int> deg(static_cast<std::size_t>(nu), 0);
    for (int i = 0; i < nu; ++i) {
        int d = 0;
        for (const auto& [e, c] : sys.equations[static_cast<std::size_t>(i)].terms()) {
            int s = 0;
            for (int v = 0; v < nu; ++v) s += e[static_cast<std::size_t>(v)];
            d = std::max(d, s);
        }
        if (d < 1) throw invalid_input("solve_total_degree: an equation is constant in the unknowns");
        deg[static_cast<std::size_t>(i)] = d;
    }

    // start system x_i^{d_i} - g_i twisted by gamma, embedded with the target
    // into one extra parameter slot t' (the last parameter):
    //   E_i = (1 - t') gamma_i (x_i^{d_i} - g_i) + t' F_i
    ParametricSystem emb;
    emb.unknowns = nu;
    emb.parameters = sys.parameters + 1;
    const int nv = nu + sys.parameters + 1;
    std::vector<CD> g(static_cast<std::size_t>(nu)), gamma(static_cast<std::size_t>(nu));
    for (int i = 0; i < nu; ++i) {
        g[static_cast<std::size_t>(i)] = rng.next_unit() * 1.2;
        gamma[static_cast<std::size_t>(i)] = rng.next_unit();
    }
    for (int i = 0; i < nu; ++i) {
        MPolyC tvar = MPolyC::var(nv, nv - 1);
        MPolyC one = MPolyC::constant(nv, CD(1, 0));
        MPolyC xi_d = MPolyC::constant(nv, CD(1, 0));
        for (int k = 0; k < deg[static_cast<std::size_t>(i)]; ++k) xi_d = xi_d * MPolyC::var(nv, i);
        MPolyC start = (xi_d - MPolyC::constant(nv, g[static_cast<std::size_t>(i)])) *
                       gamma[static_cast<std::size_t>(i)];
        // widen F_i to the extra variable
        MPolyC target(nv);
        for (const auto& [e, c] : sys.equations[static_cast<std::size_t>(i)].terms()) {
            std::vector<int> e2 = e;
            e2.push_back(0);
            target.add_term(e2, c);
        }
        emb.equations.push_back((one - tvar) * start + tvar * target);
    }

    // all combinations of d_i-th roots of g_i
    long total = 1;
    for (int i = 0; i < nu; ++i) total *= deg[static_cast<std::size_t>(i)];
    std::vector<std::vector<CD>> starts;
    starts.reserve(static_cast<std::size_t>(total));
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        std::vector<CD> x(static_cast<std::size_t>(nu));
        for (int i = 0; i < nu; ++i) {
            int d = deg[static_cast<std::size_t>(i)];
            int k = static_cast<int>(rem % d);
            rem /= d;
            double r = std::pow(std::abs(g[static_cast<std::size_t>(i)]), 1.0 / d);
            double th = (std::arg(g[static_cast<std::size_t>(i)]) + 2 * 3.14159265358979323846 * k) / d;
            x[static_cast<std::size_t>(i)] = r * CD(std::cos(th), std::sin(th));
        }
        starts.push_back(std::move(x));
    }

    std::vector<CD> q0 = params, q1 = params;
    q0.push_back(CD(0, 0));
    q1.push_back(CD(1, 0));
    auto paths = track_segment(emb, starts, q0, q1, opt);

    std::vector<std::vector<CD>> found;
    SolveStats st;
    st.paths_total = static_cast<int>(paths.size());
    for (auto& p : paths) {
        if (p.success) {
            double r = system_residual(sys, p.x, params);
            double xn = 1 + vec_norm(p.x);
            if (r < 1e-7 * std::pow(xn, 4)) {
                found.push_back(newton_polish(sys, p.x, params));
                ++st.paths_finite;
            } else {
                ++st.paths_failed;
            }
        } else if (p.failure == "divergence") {
            ++st.paths_diverged;
        } else {
            ++st.paths_failed;
        }
    }
    if (stats) *stats = st;
    return found;
}

}  // namespace rdlab
