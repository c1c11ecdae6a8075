#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavemode/panel.hpp"

namespace wavemode {

/// One dynamic mode: eigenvalue of the reduced one-step operator, the
/// exact (unit-norm) spatial mode, the amplitude fit at the first
/// snapshot, and the continuous exponent omega = ln(lambda) / dt on the
/// principal branch.
struct DmdMode {
    std::complex<double> eigenvalue;
    std::vector<std::complex<double>> shape; // one entry per series, |.|_2 = 1
    std::complex<double> amplitude;          // b_i
    std::complex<double> omega;              // undefined when decayed_one_step
    bool decayed_one_step = false;           // lambda == 0: omega has no logarithm
    bool at_nyquist = false;                 // lambda on the negative real axis
};

/// Rank selection: an explicit rank, or the smallest rank whose retained
/// squared singular values reach the energy fraction (default 0.999).
struct RankSpec {
    std::optional<int> rank;
    double energy = 0.999;

    static RankSpec fixed(int r) { return RankSpec{r, 1.0}; }
    static RankSpec energy_threshold(double e) { return RankSpec{std::nullopt, e}; }
};

struct DmdModel {
    int rank = 0;
    double dt = 1.0;
    double svd_energy = 0.0; // fraction of squared singular values retained
    std::vector<DmdMode> modes;
    std::vector<std::string> series_ids;
    std::int64_t start_time = 0; // model time t = 0 corresponds to this day
    std::size_t sample_count = 0;
};

/// Exact DMD: snapshot shift pair X1/X2, thin SVD of X1, truncation,
/// reduced operator eigendecomposition, exact modes through X2, and a
/// least-squares amplitude fit at the first snapshot.
DmdModel fit_dmd(const Panel& panel, RankSpec rank = RankSpec{});

enum class PowerConvention { amplitude_squared, amplitude };

/// Report row for one conjugate pair (the representative has
/// Im(lambda) >= 0). duration is in whole days; unset means an infinite
/// (zero-frequency) cycle.
struct ModeRow {
    int mode = 0; // 1-based rank position
    double power = 0.0;
    double daily_frequency = 0.0; // cycles per day
    std::optional<std::int64_t> duration_days;
    double growth_rate = 0.0; // Re omega, per day
    int model_index = 0;      // index into DmdModel::modes
    bool at_nyquist = false;
};

struct ModeReport {
    std::vector<ModeRow> rows; // sorted by power desc, then frequency asc
    PowerConvention convention = PowerConvention::amplitude_squared;
    std::size_t decayed_excluded = 0;
};

ModeReport mode_report(const DmdModel& model,
                       PowerConvention convention = PowerConvention::amplitude_squared);

struct TemporalTraces {
    std::vector<int> mode_indices; // into DmdModel::modes
    std::vector<std::vector<std::complex<double>>> traces;
    std::size_t decayed_excluded = 0;
};

/// Per-mode traces b_i * exp(omega_i * t) at the given model times
/// (days since the first snapshot). Zero eigenvalues are excluded.
TemporalTraces temporal_dynamics(const DmdModel& model, std::span<const double> times);

/// Real trace of one report row: conjugate pairs are combined into
/// 2*Re(b * exp(omega t)); real modes contribute Re(b * exp(omega t)).
std::vector<double> real_mode_trace(const DmdModel& model, const ModeRow& row,
                                    std::span<const double> times);

/// Sum of all mode contributions evaluated at the given day offsets.
/// Extrapolation beyond the fitted sample is allowed.
Panel reconstruct(const DmdModel& model, std::span<const std::int64_t> day_offsets);

struct SeriesPhaseMagnitude {
    std::string series_id;
    double magnitude = 0.0;
    double phase = 0.0; // in (-pi, pi]
};

/// Element-wise magnitude and phase of one mode, in panel series order.
std::vector<SeriesPhaseMagnitude> phase_magnitude(const DmdModel& model, int mode_index);

} // namespace wavemode
