#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wavemode/wavelet.hpp"

namespace wavemode {

/// Per-level moment sums S_j(p) = sum_k |d_{j,k}|^p. Zero coefficients
/// are excluded from the sum for p < 0 (they would blow up); the number
/// of exclusions is reported.
struct StructureFunctions {
    std::vector<int> levels;            // j values, ascending
    std::vector<double> p_grid;
    std::vector<std::vector<double>> s; // s[level index][p index]
    std::size_t zeros_skipped = 0;
    std::size_t coefficient_zeros = 0;  // zero detail coefficients seen
};

/// Inclusive level interval used for the log-log regression.
struct LevelRange {
    int lo = 0;
    int hi = 0;
};

StructureFunctions structure_functions(const WaveletCoefficients& coeffs,
                                       std::span<const double> p_grid);

/// b(p) = 1 - slope of the OLS fit of log2 S_j(p) against j over
/// fit_range. Throws NumericError naming (j, p) if some S is
/// non-positive on the range.
std::vector<double> besov_exponent(const StructureFunctions& sf, LevelRange fit_range);

struct SpectrumPoint {
    double alpha = 0.0;
    double d = 0.0;        // d(alpha) = min_p (alpha*p - b(p) + 1)
    double argmin_p = 0.0; // first p attaining the minimum
};

/// Discrete Legendre transform of the Besov exponent over the p grid.
std::vector<SpectrumPoint> singularity_spectrum(std::span<const double> besov,
                                                std::span<const double> p_grid,
                                                std::span<const double> alpha_grid);

struct ConcavityResult {
    bool concave = false;
    double gap = 0.0; // largest positive second difference
};

/// Second-difference concavity check over strictly increasing alpha.
/// On a uniform grid the tested quantity is d[i-1] - 2 d[i] + d[i+1];
/// non-uniform spacing uses the equivalent divided-difference form.
ConcavityResult concavity_test(std::span<const SpectrumPoint> points, double tol);
ConcavityResult concavity_test(std::span<const double> alpha, std::span<const double> d,
                               double tol);

struct SpectrumOptions {
    // Unset moment bounds follow the default rule: p in [-5, 5] when every
    // detail coefficient is nonzero, otherwise [0, 5].
    std::optional<double> p_min;
    std::optional<double> p_max;
    double p_step = 0.25;
    double alpha_min = 0.0;
    double alpha_max = 1.5;
    double alpha_step = 0.01;
    std::optional<LevelRange> fit_range; // default: levels 2 .. J-1
    double concavity_tol = 1e-3;         // estimated spectra
};

struct MultifractalSpectrum {
    StructureFunctions structure;
    std::vector<double> besov; // b(p) aligned with structure.p_grid
    std::vector<SpectrumPoint> spectrum;
    LevelRange fit_range;
    bool concave = false;
    double concavity_gap = 0.0;
};

/// Full estimation chain: structure functions, Besov regression,
/// Legendre spectrum and concavity verdict.
MultifractalSpectrum estimate_spectrum(const WaveletCoefficients& coeffs,
                                       const SpectrumOptions& options = {});

std::vector<double> make_grid(double lo, double hi, double step);

} // namespace wavemode
