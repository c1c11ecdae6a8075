#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace wavemode {

/// Descriptive statistics for one series. Central moments use the
/// population convention (divide by n); kurtosis is non-excess, so a
/// normal sample sits near 3. Skewness and kurtosis are unset for
/// degenerate (constant) series.
struct SeriesSummary {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std = 0.0; // population
    std::optional<double> skewness;
    std::optional<double> kurtosis;
};

struct JbResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool h = false; // reject normality at level alpha
    double alpha = 0.05;
};

SeriesSummary summarize(std::span<const double> series);

/// JB = n/6 * (S^2 + (K-3)^2 / 4) with K non-excess.
double jb_statistic(std::size_t n, double skewness, double kurtosis);

/// Jarque-Bera normality test. The p-value uses the asymptotic
/// chi-square(2) law, whose survival function is exp(-JB/2) in closed
/// form. Requires length >= 8 and a non-degenerate series.
JbResult jarque_bera(std::span<const double> series, double alpha = 0.05);

} // namespace wavemode
