#include "wavemode/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wavemode/errors.hpp"

namespace wavemode {

double GaussianSampler::uniform01() {
    return double(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::array<CycleSpec, 2> quadrature_pair(double period, double growth_rate, double amplitude,
                                         double phase, std::vector<double> loading_a,
                                         std::vector<double> loading_b) {
    CycleSpec a{period, growth_rate, amplitude, phase, std::move(loading_a)};
    CycleSpec b{period, growth_rate, amplitude, phase - std::numbers::pi / 2.0,
                std::move(loading_b)};
    return {std::move(a), std::move(b)};
}

namespace {

Panel panel_shell(std::size_t n, std::size_t length) {
    Panel p;
    p.dt = 1.0;
    p.times.resize(length);
    for (std::size_t t = 0; t < length; ++t) p.times[t] = std::int64_t(t);
    p.values.assign(n, std::vector<double>(length, 0.0));
    p.series_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) p.series_ids.push_back("s" + std::to_string(i + 1));
    return p;
}

} // namespace

Panel gen_linear_system(const std::vector<std::vector<double>>& a, std::span<const double> x0,
                        std::size_t length) {
    const std::size_t n = a.size();
    if (n == 0 || x0.size() != n)
        throw ValidationError("gen_linear_system: x0 length must match matrix dimension");
    for (const auto& row : a)
        if (row.size() != n) throw ValidationError("gen_linear_system: matrix must be square");
    if (length < 2) throw ValidationError("gen_linear_system: need length >= 2");

    Panel p = panel_shell(n, length);
    std::vector<double> state(x0.begin(), x0.end());
    std::vector<double> next(n);
    for (std::size_t t = 0; t < length; ++t) {
        for (std::size_t i = 0; i < n; ++i) p.values[i][t] = state[i];
        if (t + 1 == length) break;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += a[i][k] * state[k];
            next[i] = acc;
        }
        state.swap(next);
    }
    return p;
}

Panel gen_planted_cycles(std::span<const CycleSpec> specs, std::size_t length, double noise_std,
                         std::uint64_t seed) {
    if (specs.empty()) throw ValidationError("gen_planted_cycles: no cycle specs");
    if (noise_std < 0.0) throw ValidationError("gen_planted_cycles: noise_std must be >= 0");
    if (length < 2) throw ValidationError("gen_planted_cycles: need length >= 2");
    const std::size_t n = specs.front().loading.size();
    if (n == 0) throw ValidationError("gen_planted_cycles: empty loading vector");
    for (const auto& s : specs) {
        if (s.loading.size() != n)
            throw ValidationError("gen_planted_cycles: loading lengths disagree");
        if (!(s.period > 0.0)) // infinity passes
            throw ValidationError("gen_planted_cycles: period must be > 0 or infinite");
        if (s.amplitude < 0.0)
            throw ValidationError("gen_planted_cycles: amplitude must be >= 0");
    }

    Panel p = panel_shell(n, length);
    for (const auto& s : specs) {
        const bool steady = std::isinf(s.period);
        for (std::size_t t = 0; t < length; ++t) {
            const double tt = double(t);
            const double osc =
                steady ? std::cos(s.phase)
                       : std::cos(2.0 * std::numbers::pi * tt / s.period + s.phase);
            const double c = s.amplitude * std::exp(s.growth_rate * tt) * osc;
            for (std::size_t i = 0; i < n; ++i) p.values[i][t] += c * s.loading[i];
        }
    }
    if (noise_std > 0.0) {
        GaussianSampler noise(seed);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < length; ++t) p.values[i][t] += noise_std * noise.next();
    }
    return p;
}

WaveletCoefficients gen_cascade(int depth, double m0, double m1, std::uint64_t seed) {
    if (depth < 3) throw ValidationError("gen_cascade: depth must be >= 3");
    if (!(m0 > 0.0) || !(m1 > 0.0))
        throw ValidationError("gen_cascade: multipliers must be > 0");

    WaveletCoefficients c;
    c.levels = depth;
    c.length = std::size_t(1) << depth;
    c.source_length = c.length;
    c.details.assign(std::size_t(depth), {});
    c.approx.assign(1, 0.0);

    std::mt19937_64 engine(seed);
    std::vector<double> parent{1.0};
    c.details[std::size_t(depth) - 1] = parent;
    for (int j = depth - 1; j >= 1; --j) {
        std::vector<double> child(parent.size() * 2);
        for (std::size_t k = 0; k < parent.size(); ++k) {
            const bool swap = (engine() & 1u) != 0;
            child[2 * k] = parent[k] * (swap ? m1 : m0);
            child[2 * k + 1] = parent[k] * (swap ? m0 : m1);
        }
        parent = child;
        for (double& v : child)
            if ((engine() & 1u) != 0) v = -v;
        c.details[std::size_t(j) - 1] = std::move(child);
    }
    c.validate();
    return c;
}

} // namespace wavemode
