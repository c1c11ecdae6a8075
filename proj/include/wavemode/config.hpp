#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "wavemode/dmd.hpp"
#include "wavemode/multifractal.hpp"
#include "wavemode/panel.hpp"

namespace wavemode {

/// Full pipeline configuration. Parsed from a flat key-value file with
/// one section per stage; every key can also be overridden on the
/// command line. Unknown sections or keys are rejected.
struct RunConfig {
    // [input]
    std::string input_path;
    NormalizeMethod normalize = NormalizeMethod::minmax;
    MissingPolicy missing = MissingPolicy::reject;

    // [stats]
    bool stats_enabled = true;
    double jb_alpha = 0.05;

    // [wavelet]
    bool wavelet_enabled = true;
    std::string filter = "haar";
    int levels = 6;
    bool pad = false;

    // [mfspectrum]
    bool mf_enabled = true;
    std::optional<double> p_min;
    std::optional<double> p_max;
    double p_step = 0.25;
    double alpha_min = 0.0;
    double alpha_max = 1.5;
    double alpha_step = 0.01;
    std::optional<LevelRange> fit_levels;
    std::string mf_series; // empty: first series

    // [dmd]
    bool dmd_enabled = true;
    std::optional<int> rank;
    double energy = 0.999;
    int top_k = 8;
    PowerConvention power = PowerConvention::amplitude_squared;

    // [output]
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    /// Throws ValidationError on inconsistent settings. Called before
    /// any computation starts.
    void validate() const;

    /// Canonical serialization; its hash identifies the effective
    /// configuration (file plus overrides) in output manifests.
    [[nodiscard]] std::string canonical_text() const;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

LevelRange parse_level_range(std::string_view text); // "lo:hi"

} // namespace wavemode
