#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rdmodal {

/// SplitMix64 mixing of (master, stream, index) into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; uniforms and normals are produced by
/// explicit transforms here rather than the implementation-defined
/// std::*_distribution classes, so a seed reproduces the same numbers on
/// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal (Box-Muller).
    double normal();

    /// Circular complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rdmodal
