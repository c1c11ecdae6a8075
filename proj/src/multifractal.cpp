#include "wavemode/multifractal.hpp"

#include <cmath>
#include <string>

#include "wavemode/errors.hpp"

namespace wavemode {

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw ValidationError("grid: need lo <= hi and step > 0");
    std::vector<double> g;
    const std::size_t count = std::size_t(std::floor((hi - lo) / step + 0.5)) + 1;
    g.reserve(count);
    for (std::size_t i = 0; i < count; ++i) g.push_back(lo + double(i) * step);
    if (g.back() > hi + step * 1e-9) g.pop_back();
    return g;
}

StructureFunctions structure_functions(const WaveletCoefficients& coeffs,
                                       std::span<const double> p_grid) {
    coeffs.validate();
    if (p_grid.empty()) throw ValidationError("structure_functions: empty p grid");
    for (double p : p_grid)
        if (!std::isfinite(p)) throw ValidationError("structure_functions: non-finite p");

    StructureFunctions sf;
    sf.p_grid.assign(p_grid.begin(), p_grid.end());

    int usable = 0;
    for (int j = 1; j <= coeffs.levels; ++j) {
        const auto d = coeffs.detail(j);
        bool any_nonzero = false;
        std::vector<double> row(p_grid.size(), 0.0);
        for (double c : d) {
            const double a = std::abs(c);
            if (a == 0.0) {
                ++sf.coefficient_zeros;
                for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
                    if (p_grid[ip] < 0.0)
                        ++sf.zeros_skipped;
                    else
                        row[ip] += std::pow(a, p_grid[ip]); // 0^0 = 1, 0^p = 0
                }
                continue;
            }
            any_nonzero = true;
            for (std::size_t ip = 0; ip < p_grid.size(); ++ip) row[ip] += std::pow(a, p_grid[ip]);
        }
        if (any_nonzero) ++usable;
        sf.levels.push_back(j);
        sf.s.push_back(std::move(row));
    }
    if (usable < 3)
        throw NumericError("structure_functions: only " + std::to_string(usable) +
                           " levels with nonzero coefficients; need at least 3");
    return sf;
}

std::vector<double> besov_exponent(const StructureFunctions& sf, LevelRange fit_range) {
    if (fit_range.hi < fit_range.lo)
        throw ValidationError("besov_exponent: empty fit range");
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < sf.levels.size(); ++i)
        if (sf.levels[i] >= fit_range.lo && sf.levels[i] <= fit_range.hi) rows.push_back(i);
    if (rows.size() < 3)
        throw ValidationError("besov_exponent: fit range [" + std::to_string(fit_range.lo) +
                              ", " + std::to_string(fit_range.hi) + "] covers " +
                              std::to_string(rows.size()) + " levels; need at least 3");

    // OLS slope of log2 S_j(p) on j, shared j moments across p.
    double mean_j = 0.0;
    for (std::size_t i : rows) mean_j += double(sf.levels[i]);
    mean_j /= double(rows.size());
    double sxx = 0.0;
    for (std::size_t i : rows) {
        const double dj = double(sf.levels[i]) - mean_j;
        sxx += dj * dj;
    }

    std::vector<double> b(sf.p_grid.size(), 0.0);
    for (std::size_t ip = 0; ip < sf.p_grid.size(); ++ip) {
        double mean_y = 0.0;
        for (std::size_t i : rows) {
            const double s = sf.s[i][ip];
            if (!(s > 0.0))
                throw NumericError("besov_exponent: S_j(p) <= 0 at level j=" +
                                   std::to_string(sf.levels[i]) +
                                   ", p=" + std::to_string(sf.p_grid[ip]));
            mean_y += std::log2(s);
        }
        mean_y /= double(rows.size());
        double sxy = 0.0;
        for (std::size_t i : rows)
            sxy += (double(sf.levels[i]) - mean_j) * (std::log2(sf.s[i][ip]) - mean_y);
        b[ip] = 1.0 - sxy / sxx;
    }
    return b;
}

std::vector<SpectrumPoint> singularity_spectrum(std::span<const double> besov,
                                                std::span<const double> p_grid,
                                                std::span<const double> alpha_grid) {
    if (p_grid.empty() || alpha_grid.empty())
        throw ValidationError("singularity_spectrum: empty grid");
    if (besov.size() != p_grid.size())
        throw ValidationError("singularity_spectrum: b(p) and p grid sizes differ");
    for (double b : besov)
        if (!std::isfinite(b)) throw ValidationError("singularity_spectrum: non-finite b(p)");

    std::vector<SpectrumPoint> out;
    out.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        SpectrumPoint pt;
        pt.alpha = alpha;
        pt.d = alpha * p_grid[0] - besov[0] + 1.0;
        pt.argmin_p = p_grid[0];
        for (std::size_t ip = 1; ip < p_grid.size(); ++ip) {
            const double v = alpha * p_grid[ip] - besov[ip] + 1.0;
            if (v < pt.d) {
                pt.d = v;
                pt.argmin_p = p_grid[ip];
            }
        }
        out.push_back(pt);
    }
    return out;
}

ConcavityResult concavity_test(std::span<const double> alpha, std::span<const double> d,
                               double tol) {
    if (alpha.size() != d.size()) throw ValidationError("concavity_test: size mismatch");
    if (alpha.size() < 3) throw ValidationError("concavity_test: need at least 3 points");
    for (std::size_t i = 1; i < alpha.size(); ++i)
        if (!(alpha[i] > alpha[i - 1]))
            throw ValidationError("concavity_test: alpha must be strictly increasing");

    ConcavityResult r;
    r.gap = 0.0;
    for (std::size_t i = 1; i + 1 < alpha.size(); ++i) {
        const double hl = alpha[i] - alpha[i - 1];
        const double hr = alpha[i + 1] - alpha[i];
        const double slope_jump = (d[i + 1] - d[i]) / hr - (d[i] - d[i - 1]) / hl;
        // equals d[i-1] - 2 d[i] + d[i+1] on a uniform grid
        const double second = slope_jump * 0.5 * (hl + hr);
        if (second > r.gap) r.gap = second;
    }
    r.concave = r.gap <= tol;
    return r;
}

ConcavityResult concavity_test(std::span<const SpectrumPoint> points, double tol) {
    std::vector<double> alpha, d;
    alpha.reserve(points.size());
    d.reserve(points.size());
    for (const auto& pt : points) {
        alpha.push_back(pt.alpha);
        d.push_back(pt.d);
    }
    return concavity_test(alpha, d, tol);
}

MultifractalSpectrum estimate_spectrum(const WaveletCoefficients& coeffs,
                                       const SpectrumOptions& options) {
    coeffs.validate();
    bool any_zero = false;
    for (const auto& level : coeffs.details)
        for (double c : level)
            if (c == 0.0) any_zero = true;

    const double p_lo = options.p_min.value_or(any_zero ? 0.0 : -5.0);
    const double p_hi = options.p_max.value_or(5.0);
    const auto p_grid = make_grid(p_lo, p_hi, options.p_step);
    const auto alpha_grid = make_grid(options.alpha_min, options.alpha_max, options.alpha_step);

    LevelRange range = options.fit_range.value_or(
        LevelRange{2, coeffs.levels > 2 ? coeffs.levels - 1 : coeffs.levels});
    if (range.lo < 1 || range.hi > coeffs.levels)
        throw ValidationError("estimate_spectrum: fit range outside available levels");

    MultifractalSpectrum mf;
    mf.structure = structure_functions(coeffs, p_grid);
    mf.fit_range = range;
    mf.besov = besov_exponent(mf.structure, range);
    mf.spectrum = singularity_spectrum(mf.besov, p_grid, alpha_grid);
    const auto conc = concavity_test(mf.spectrum, options.concavity_tol);
    mf.concave = conc.concave;
    mf.concavity_gap = conc.gap;
    return mf;
}

} // namespace wavemode
