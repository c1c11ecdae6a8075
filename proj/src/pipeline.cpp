#include "wavemode/pipeline.hpp"

#include <algorithm>

#include "wavemode/errors.hpp"
#include "wavemode/synth.hpp"
#include "wavemode/version.hpp"

namespace wavemode {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("[") + name + "] " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string("[") + name + "] " + e.what());
    }
}

} // namespace

AnalysisBundle run_pipeline(const RunConfig& config) {
    config.validate();

    AnalysisBundle bundle;
    bundle.provenance.tool_version = kVersion;
    bundle.provenance.config_hash = "fnv1a64:" + fnv1a64_hex(config.canonical_text());
    bundle.provenance.seed = config.seed;
    bundle.top_k = config.top_k;

    const Panel raw = stage("ingest", [&] {
        IngestConfig ic;
        ic.missing = config.missing;
        return load_panel_file(config.input_path, ic);
    });
    bundle.panel = stage("ingest", [&] { return normalize(raw, config.normalize); });

    if (config.stats_enabled) {
        stage("stats", [&] {
            for (std::size_t i = 0; i < raw.series_count(); ++i) {
                bundle.summaries.push_back(summarize(raw.series(i)));
                bundle.jb.push_back(jarque_bera(raw.series(i), config.jb_alpha));
            }
            return 0;
        });
    }

    const BoundaryPolicy boundary =
        config.pad ? BoundaryPolicy::zero_pad : BoundaryPolicy::strict;

    if (config.wavelet_enabled) {
        stage("wavelet", [&] {
            const FilterPair filter = FilterPair::from_name(config.filter);
            bundle.filter_name = filter.name;
            bundle.wavelet_levels = config.levels;
            for (std::size_t i = 0; i < bundle.panel.series_count(); ++i)
                bundle.decompositions.push_back(
                    mra(bundle.panel.series(i), filter, config.levels, boundary));
            return 0;
        });
    }

    if (config.mf_enabled) {
        stage("mfspectrum", [&] {
            std::size_t target = 0;
            if (!config.mf_series.empty()) {
                const auto it = std::find(bundle.panel.series_ids.begin(),
                                          bundle.panel.series_ids.end(), config.mf_series);
                if (it == bundle.panel.series_ids.end())
                    throw ValidationError("unknown series '" + config.mf_series + "'");
                target = std::size_t(it - bundle.panel.series_ids.begin());
            }
            const FilterPair filter = FilterPair::from_name(config.filter);
            const WaveletCoefficients coeffs =
                dwt_forward(bundle.panel.series(target), filter, config.levels, boundary);
            SpectrumOptions opts;
            opts.p_min = config.p_min;
            opts.p_max = config.p_max;
            opts.p_step = config.p_step;
            opts.alpha_min = config.alpha_min;
            opts.alpha_max = config.alpha_max;
            opts.alpha_step = config.alpha_step;
            opts.fit_range = config.fit_levels;
            bundle.spectrum = estimate_spectrum(coeffs, opts);
            bundle.spectrum_series = bundle.panel.series_ids[target];
            return 0;
        });
    }

    if (config.dmd_enabled) {
        stage("dmd", [&] {
            RankSpec spec;
            if (config.rank)
                spec = RankSpec::fixed(*config.rank);
            else
                spec = RankSpec::energy_threshold(config.energy);
            bundle.dmd = fit_dmd(bundle.panel, spec);
            bundle.modes = mode_report(*bundle.dmd, config.power);
            return 0;
        });
    }

    return bundle;
}

std::string run_and_emit(const RunConfig& config) {
    const AnalysisBundle bundle = run_pipeline(config);
    return stage("report", [&] { return emit_bundle(bundle, config.out_dir); });
}

} // namespace wavemode
