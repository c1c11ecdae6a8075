#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wavemode/panel.hpp"
#include "wavemode/wavelet.hpp"

namespace wavemode {

/// Portable seeded Gaussian stream: mt19937_64 (bit-exact across
/// platforms by the standard) feeding a hand-rolled Box-Muller pair,
/// with uniforms built as (x >> 11) * 2^-53. Same seed, same bytes.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    double uniform01();
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// One planted oscillatory (or steady, period = infinity) component.
/// Contributes amplitude * exp(growth_rate*t) * cos(2*pi*t/period + phase)
/// times `loading` to the panel.
struct CycleSpec {
    double period = 0.0; // days; std::numeric_limits<double>::infinity() = steady
    double growth_rate = 0.0;
    double amplitude = 1.0;
    double phase = 0.0;
    std::vector<double> loading;
};

/// Two quadrature copies of one cycle on independent loadings. A single
/// cosine spans only one spatial direction, which a one-step linear
/// operator cannot oscillate; the quadrature pair spans the plane the
/// operator rotates, making the cycle recoverable by DMD.
std::array<CycleSpec, 2> quadrature_pair(double period, double growth_rate, double amplitude,
                                         double phase, std::vector<double> loading_a,
                                         std::vector<double> loading_b);

/// Exact trajectory panel: columns x_k = A^k x0.
Panel gen_linear_system(const std::vector<std::vector<double>>& a, std::span<const double> x0,
                        std::size_t length);

/// Sum of the given cycle components plus seeded Gaussian noise of the
/// given standard deviation. Deterministic per seed.
Panel gen_planted_cycles(std::span<const CycleSpec> specs, std::size_t length, double noise_std,
                         std::uint64_t seed);

/// Binomial multiplicative cascade in detail-coefficient space. The root
/// is the single coarsest coefficient (value 1); each child takes its
/// parent's value times m0 or m1, with the pair order shuffled per node
/// and a random sign per coefficient. Both randomizations leave every
/// S_j(p) at its closed form (m0^p + m1^p)^(depth - j).
WaveletCoefficients gen_cascade(int depth, double m0, double m1, std::uint64_t seed);

} // namespace wavemode
