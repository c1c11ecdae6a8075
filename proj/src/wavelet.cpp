#include "wavemode/wavelet.hpp"

#include <cmath>
#include <numeric>

#include "wavemode/errors.hpp"

namespace wavemode {

namespace {

// Analysis step: y[k] = sum_m f[m] x[(2k+m) mod n], k = 0..n/2-1.
void analyze(std::span<const double> x, std::span<const double> f, std::vector<double>& out) {
    const std::size_t n = x.size();
    out.assign(n / 2, 0.0);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m < f.size(); ++m) acc += f[m] * x[(2 * k + m) % n];
        out[k] = acc;
    }
}

// Synthesis step (adjoint): x[(2k+m) mod n] += f[m] y[k].
void synthesize_into(std::span<const double> y, std::span<const double> f, std::vector<double>& x) {
    const std::size_t n = x.size();
    for (std::size_t k = 0; k < y.size(); ++k)
        for (std::size_t m = 0; m < f.size(); ++m) x[(2 * k + m) % n] += f[m] * y[k];
}

std::size_t pow2(int j) { return std::size_t(1) << j; }

} // namespace

FilterPair FilterPair::haar() {
    const double r = 1.0 / std::sqrt(2.0);
    return {"haar", {r, r}, {r, -r}};
}

FilterPair FilterPair::db2() {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    std::vector<double> h = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
    std::vector<double> g(h.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - k];
    return {"db2", h, g};
}

FilterPair FilterPair::from_name(std::string_view name) {
    if (name == "haar") return haar();
    if (name == "db2") return db2();
    throw ValidationError("unknown wavelet filter '" + std::string(name) +
                          "' (expected haar or db2)");
}

void FilterPair::validate(double tol) const {
    const auto& h = lowpass;
    const auto& g = highpass;
    if (h.empty() || h.size() != g.size() || h.size() % 2 != 0)
        throw ValidationError("filter '" + name + "': lowpass/highpass must share an even length");
    const double sum_h = std::accumulate(h.begin(), h.end(), 0.0);
    const double sum_g = std::accumulate(g.begin(), g.end(), 0.0);
    if (std::abs(sum_h - std::sqrt(2.0)) > tol)
        throw ValidationError("filter '" + name + "': sum(h) != sqrt(2)");
    if (std::abs(sum_g) > tol) throw ValidationError("filter '" + name + "': sum(g) != 0");
    // orthonormality of even shifts, both filters and cross terms
    const std::size_t L = h.size();
    for (std::size_t shift = 0; shift < L; shift += 2) {
        double hh = 0.0, gg = 0.0, hg = 0.0;
        for (std::size_t k = 0; k + shift < L; ++k) {
            hh += h[k] * h[k + shift];
            gg += g[k] * g[k + shift];
            hg += h[k] * g[k + shift];
        }
        const double want = shift == 0 ? 1.0 : 0.0;
        if (std::abs(hh - want) > tol || std::abs(gg - want) > tol)
            throw ValidationError("filter '" + name + "': even shifts not orthonormal");
        if (shift == 0 && std::abs(hg) > tol)
            throw ValidationError("filter '" + name + "': h and g not orthogonal");
    }
}

void WaveletCoefficients::validate() const {
    if (levels < 1) throw ValidationError("coefficients: level count must be >= 1");
    if (int(details.size()) != levels)
        throw ValidationError("coefficients: expected " + std::to_string(levels) +
                              " detail levels, have " + std::to_string(details.size()));
    if (length == 0 || length % pow2(levels) != 0)
        throw ValidationError("coefficients: length must be a positive multiple of 2^levels");
    for (int j = 1; j <= levels; ++j)
        if (details[std::size_t(j) - 1].size() != length / pow2(j))
            throw ValidationError("coefficients: level " + std::to_string(j) +
                                  " has wrong size");
    if (approx.size() != length / pow2(levels))
        throw ValidationError("coefficients: approximation has wrong size");
    if (source_length == 0 || source_length > length)
        throw ValidationError("coefficients: inconsistent source length");
}

WaveletCoefficients dwt_forward(std::span<const double> series, const FilterPair& filter,
                                int levels, BoundaryPolicy boundary) {
    if (levels < 1) throw ValidationError("dwt_forward: levels must be >= 1");
    const std::size_t block = pow2(levels);
    if (series.size() < block)
        throw ValidationError("dwt_forward: series length " + std::to_string(series.size()) +
                              " < 2^levels = " + std::to_string(block));

    WaveletCoefficients out;
    out.levels = levels;
    out.source_length = series.size();

    std::vector<double> work(series.begin(), series.end());
    if (series.size() % block != 0) {
        if (boundary == BoundaryPolicy::strict)
            throw ValidationError("dwt_forward: series length " + std::to_string(series.size()) +
                                  " is not a multiple of 2^levels = " + std::to_string(block) +
                                  " (use zero padding to proceed)");
        const std::size_t target = (series.size() / block + 1) * block;
        const std::size_t pad = target - series.size();
        out.pad_offset = pad / 2;
        std::vector<double> padded(target, 0.0);
        for (std::size_t i = 0; i < series.size(); ++i) padded[i + out.pad_offset] = series[i];
        work = std::move(padded);
    }
    out.length = work.size();

    std::vector<double> next;
    for (int j = 1; j <= levels; ++j) {
        std::vector<double> d;
        analyze(work, filter.highpass, d);
        analyze(work, filter.lowpass, next);
        out.details.push_back(std::move(d));
        work.swap(next);
    }
    out.approx = std::move(work);
    return out;
}

std::vector<double> dwt_inverse(const WaveletCoefficients& coeffs, const FilterPair& filter) {
    coeffs.validate();
    std::vector<double> acc = coeffs.approx;
    for (int j = coeffs.levels; j >= 1; --j) {
        std::vector<double> up(acc.size() * 2, 0.0);
        synthesize_into(acc, filter.lowpass, up);
        synthesize_into(coeffs.details[std::size_t(j) - 1], filter.highpass, up);
        acc = std::move(up);
    }
    if (coeffs.padded())
        return {acc.begin() + long(coeffs.pad_offset),
                acc.begin() + long(coeffs.pad_offset + coeffs.source_length)};
    return acc;
}

MraDecomposition mra(std::span<const double> series, const FilterPair& filter, int levels,
                     BoundaryPolicy boundary) {
    const WaveletCoefficients coeffs = dwt_forward(series, filter, levels, boundary);
    MraDecomposition out;

    WaveletCoefficients only = coeffs;
    for (auto& d : only.details) std::fill(d.begin(), d.end(), 0.0);
    out.approximation = dwt_inverse(only, filter);

    for (int j = 1; j <= levels; ++j) {
        WaveletCoefficients one = only;
        std::fill(one.approx.begin(), one.approx.end(), 0.0);
        one.details[std::size_t(j) - 1] = coeffs.details[std::size_t(j) - 1];
        out.details.push_back(dwt_inverse(one, filter));
    }
    return out;
}

} // namespace wavemode
