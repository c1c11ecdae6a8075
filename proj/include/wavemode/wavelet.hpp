#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavemode {

/// Orthonormal analysis filter pair. The highpass is the quadrature
/// mirror of the lowpass: g[k] = (-1)^k h[L-1-k], so sum(h) = sqrt(2),
/// sum(g) = 0 and both have unit l2 norm.
struct FilterPair {
    std::string name;
    std::vector<double> lowpass;  // h
    std::vector<double> highpass; // g

    static FilterPair haar();
    static FilterPair db2(); // Daubechies 4-tap
    static FilterPair from_name(std::string_view name);

    /// Throws ValidationError if the pair is not an orthonormal QMF bank.
    void validate(double tol = 1e-12) const;
};

/// How to handle input lengths that are not a multiple of 2^J.
/// strict fails; zero_pad extends the series symmetrically with zeros up
/// to the next multiple (the transform is then flagged as padded).
enum class BoundaryPolicy { strict, zero_pad };

/// Dyadic detail/approximation coefficients from the pyramid transform.
/// Level 1 is the finest scale; level `levels` the coarsest. Under the
/// periodic boundary, level j holds length/2^j detail coefficients.
struct WaveletCoefficients {
    int levels = 0;
    std::vector<std::vector<double>> details; // details[j-1] holds level j
    std::vector<double> approx;               // a_J
    std::size_t length = 0;                   // transform length (after padding)
    std::size_t source_length = 0;            // caller's input length
    std::size_t pad_offset = 0;               // leading zeros inserted by padding

    [[nodiscard]] bool padded() const { return length != source_length; }
    [[nodiscard]] std::span<const double> detail(int level) const { return details.at(std::size_t(level) - 1); }

    /// Throws ValidationError on inconsistent shapes.
    void validate() const;
};

/// Time-domain multiresolution split: the input equals
/// approximation + sum of details, within 1e-10 max-abs.
struct MraDecomposition {
    std::vector<double> approximation;        // AX_J
    std::vector<std::vector<double>> details; // DX_1..DX_J

    [[nodiscard]] int levels() const { return int(details.size()); }
};

/// Mallat pyramid analysis with periodic boundary handling: level 1 is
/// computed from the input, level j from the level j-1 approximation.
/// Requires series length >= 2^levels.
WaveletCoefficients dwt_forward(std::span<const double> series, const FilterPair& filter,
                                int levels, BoundaryPolicy boundary = BoundaryPolicy::strict);

/// Synthesis (adjoint) pass; exact inverse of dwt_forward. Returns a
/// sequence of the original source length.
std::vector<double> dwt_inverse(const WaveletCoefficients& coeffs, const FilterPair& filter);

/// Additive decomposition: DX_j keeps only the level-j details, AX_J only
/// the coarsest approximation, each run back through the synthesis pass.
MraDecomposition mra(std::span<const double> series, const FilterPair& filter, int levels,
                     BoundaryPolicy boundary = BoundaryPolicy::strict);

} // namespace wavemode
