#include "wavemode/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wavemode/errors.hpp"

namespace wavemode {

SeriesSummary summarize(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) throw ValidationError("summarize: need at least 2 observations");

    SeriesSummary s;
    double sum = 0.0;
    for (double v : series) sum += v;
    s.mean = sum / double(n);

    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : series) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= double(n);
    m3 /= double(n);
    m4 /= double(n);
    s.std = std::sqrt(m2);
    if (s.std > 0.0) {
        s.skewness = m3 / (m2 * s.std);
        s.kurtosis = m4 / (m2 * m2);
    }
    return s;
}

double jb_statistic(std::size_t n, double skewness, double kurtosis) {
    const double excess = kurtosis - 3.0;
    return double(n) / 6.0 * (skewness * skewness + excess * excess / 4.0);
}

JbResult jarque_bera(std::span<const double> series, double alpha) {
    if (series.size() < 8) throw ValidationError("jarque_bera: need at least 8 observations");
    const SeriesSummary s = summarize(series);
    if (!s.skewness.has_value())
        throw ValidationError("jarque_bera: degenerate (constant) series");
    JbResult r;
    r.alpha = alpha;
    r.statistic = jb_statistic(series.size(), *s.skewness, *s.kurtosis);
    r.p_value = std::exp(-r.statistic / 2.0); // chi-square(2) survival
    r.h = r.p_value < alpha;
    return r;
}

} // namespace wavemode
