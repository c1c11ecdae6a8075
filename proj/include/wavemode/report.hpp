#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavemode/dmd.hpp"
#include "wavemode/multifractal.hpp"
#include "wavemode/panel.hpp"
#include "wavemode/stats.hpp"
#include "wavemode/wavelet.hpp"

namespace wavemode {

/// FNV-1a 64-bit over raw bytes; used to fingerprint emitted files and
/// configurations in the manifest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// Fixed-point with the given decimals (table style).
std::string format_fixed(double v, int decimals);
/// Shortest decimal that round-trips to the same double (JSON/plot data).
std::string format_full(double v);

struct Provenance {
    std::string tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
};

/// Everything one pipeline run produced. Disabled stages leave their
/// fields empty and are marked skipped in the manifest.
struct AnalysisBundle {
    Panel panel; // the analyzed (normalized) panel
    Provenance provenance;

    std::vector<SeriesSummary> summaries;
    std::vector<JbResult> jb;

    std::vector<MraDecomposition> decompositions; // aligned with panel series
    std::string filter_name;
    int wavelet_levels = 0;

    std::optional<MultifractalSpectrum> spectrum;
    std::string spectrum_series;

    std::optional<DmdModel> dmd;
    std::optional<ModeReport> modes;
    int top_k = 8;

    [[nodiscard]] bool stats_done() const { return !summaries.empty(); }
    [[nodiscard]] bool mra_done() const { return !decompositions.empty(); }
};

/// Table-3/4 style mode table: mode, daily frequency at 4 decimals,
/// whole-day duration with the literal "Inf" for zero frequency.
void emit_mode_table(const ModeReport& report, std::size_t top_k, std::ostream& out);

/// Long-format plot data (t, component, value) with components
/// x, A<J>, D1..D<J>; full precision.
void emit_decomposition(const MraDecomposition& mra, std::span<const double> source,
                        std::span<const std::int64_t> times, std::ostream& out);

/// Table-2 style summary CSV: id,mean,median,min,max,std,skewness,
/// kurtosis,jb_h,jb_p. Moments use 2 decimals; undefined moments print NA.
void emit_stats_table(std::span<const std::string> ids, std::span<const SeriesSummary> summaries,
                      std::span<const JbResult> jb, std::ostream& out);

void emit_besov(const MultifractalSpectrum& mf, std::ostream& out);
void emit_spectrum(const MultifractalSpectrum& mf, std::ostream& out);

void emit_spatial_magnitudes(const DmdModel& model, const ModeReport& report, std::size_t top_k,
                             std::ostream& out);
void emit_temporal_traces(const DmdModel& model, const ModeReport& report, std::size_t top_k,
                          std::ostream& out);
void emit_phase_magnitude(const DmdModel& model, const ModeReport& report, std::size_t top_k,
                          std::ostream& out);

/// Write every artifact of the bundle under out_dir and a manifest.json
/// hashing each file. Returns the manifest path. Re-running on an
/// identical bundle yields byte-identical output.
std::string emit_bundle(const AnalysisBundle& bundle, const std::string& out_dir);

} // namespace wavemode
