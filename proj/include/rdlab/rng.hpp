#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rdlab {

// Counter-based generator (splitmix64 over a keyed counter).  Every stochastic
// subsystem derives its stream from one user seed, so runs replay exactly and
// substreams are independent of evaluation order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)))), counter_(0) {}

    // Child generator for a named substream; does not disturb this stream.
    Rng split(std::uint64_t stream) const {
        Rng child(0);
        child.key_ = mix(key_ ^ (0xbf58476d1ce4e5b9ull * (stream + 1)));
        child.counter_ = 0;
        return child;
    }

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-m, m]
    double next_real(double m) { return m * (2.0 * next_double() - 1.0); }

    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // uniform on the complex disk of radius m (rejection-free: sqrt radial law)
    std::complex<double> next_complex(double m) {
        double r = m * std::sqrt(next_double());
        double t = 6.283185307179586477 * next_double();
        return {r * std::cos(t), r * std::sin(t)};
    }

    // uniform on the complex unit circle
    std::complex<double> next_unit() {
        double t = 6.283185307179586477 * next_double();
        return {std::cos(t), std::sin(t)};
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace rdlab
