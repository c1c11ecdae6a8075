#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "wavemode/config.hpp"
#include "wavemode/errors.hpp"
#include "wavemode/pipeline.hpp"
#include "wavemode/synth.hpp"
#include "wavemode/version.hpp"

namespace {

using namespace wavemode;

int log_level() { // 0 quiet, 1 info, 2 debug; WAVEMODE_LOG only
    const char* env = std::getenv("WAVEMODE_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "wavemode: " << msg << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    return out;
}

Panel load_input(const std::string& path, const std::string& missing,
                 const std::string& normalize_method) {
    IngestConfig ic;
    ic.missing = parse_missing_policy(missing);
    Panel p = load_panel_file(path, ic);
    return normalize(p, parse_normalize_method(normalize_method));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "inf" || item == "Inf")
            out.push_back(std::numeric_limits<double>::infinity());
        else
            out.push_back(std::stod(item));
    }
    return out;
}

struct CommonIo {
    std::string input;
    std::string out;
    std::string normalize = "none";
    std::string missing = "reject";
};

void add_common(CLI::App* cmd, CommonIo& io, bool normalized_default) {
    cmd->add_option("--input", io.input, "panel CSV (date,<id>,... header)")->required();
    cmd->add_option("--out", io.out, "output path")->required();
    if (normalized_default) io.normalize = "minmax";
    cmd->add_option("--normalize", io.normalize, "minmax|zscore|none")
        ->capture_default_str();
    cmd->add_option("--missing", io.missing, "reject|forward-fill")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"panel decomposition toolkit: wavelet multiresolution analysis, "
                 "multifractal spectra and dynamic mode decomposition"};
    app.set_version_flag("--version", std::string("wavemode ") + kVersion);
    app.require_subcommand(1);

    // stats ---------------------------------------------------------------
    CommonIo stats_io;
    double stats_alpha = 0.05;
    auto* stats_cmd = app.add_subcommand("stats", "per-series descriptive statistics and "
                                                  "Jarque-Bera normality test");
    add_common(stats_cmd, stats_io, false);
    stats_cmd->add_option("--alpha", stats_alpha, "JB significance level")
        ->capture_default_str();

    // wavelet -------------------------------------------------------------
    CommonIo wav_io;
    std::string wav_filter = "haar";
    int wav_levels = 6;
    bool wav_pad = false;
    auto* wav_cmd = app.add_subcommand("wavelet", "dyadic multiresolution decomposition "
                                                  "per series (plot data)");
    add_common(wav_cmd, wav_io, true);
    wav_cmd->add_option("--filter", wav_filter, "haar|db2")->capture_default_str();
    wav_cmd->add_option("--levels", wav_levels, "decomposition level J")->capture_default_str();
    wav_cmd->add_flag("--pad", wav_pad, "zero-pad lengths that are not multiples of 2^J");

    // mfspectrum ----------------------------------------------------------
    CommonIo mf_io;
    std::string mf_filter = "haar";
    int mf_levels = 6;
    bool mf_pad = false;
    std::string mf_series, mf_fit;
    double pmin = std::numeric_limits<double>::quiet_NaN();
    double pmax = std::numeric_limits<double>::quiet_NaN();
    double pstep = 0.25, amin = 0.0, amax = 1.5, astep = 0.01;
    auto* mf_cmd = app.add_subcommand("mfspectrum", "wavelet multifractal spectrum: "
                                                    "structure functions, Besov exponent, "
                                                    "Legendre spectrum, concavity verdict");
    add_common(mf_cmd, mf_io, true);
    mf_cmd->add_option("--filter", mf_filter, "haar|db2")->capture_default_str();
    mf_cmd->add_option("--levels", mf_levels, "decomposition level J")->capture_default_str();
    mf_cmd->add_flag("--pad", mf_pad, "zero-pad lengths that are not multiples of 2^J");
    mf_cmd->add_option("--series", mf_series, "series id (default: first)");
    mf_cmd->add_option("--pmin", pmin, "lowest moment order");
    mf_cmd->add_option("--pmax", pmax, "highest moment order");
    mf_cmd->add_option("--pstep", pstep, "moment grid step")->capture_default_str();
    mf_cmd->add_option("--alpha-min", amin, "")->capture_default_str();
    mf_cmd->add_option("--alpha-max", amax, "")->capture_default_str();
    mf_cmd->add_option("--alpha-step", astep, "")->capture_default_str();
    mf_cmd->add_option("--fit-levels", mf_fit, "regression level range lo:hi");

    // dmd -----------------------------------------------------------------
    CommonIo dmd_io;
    int dmd_rank = -1, dmd_top = 8;
    double dmd_energy = 0.999;
    std::string dmd_power = "amp2";
    auto* dmd_cmd = app.add_subcommand("dmd", "exact dynamic mode decomposition with "
                                              "power-ranked mode tables");
    add_common(dmd_cmd, dmd_io, true);
    dmd_cmd->add_option("--rank", dmd_rank, "truncation rank (overrides --energy)");
    dmd_cmd->add_option("--energy", dmd_energy, "squared singular value energy threshold")
        ->capture_default_str();
    dmd_cmd->add_option("--top", dmd_top, "modes to report")->capture_default_str();
    dmd_cmd->add_option("--power", dmd_power, "amp2|amp")->capture_default_str();

    // synth ---------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "seeded synthetic generators");
    synth_cmd->require_subcommand(1);

    std::string cyc_out, cyc_periods = "925,654,inf,5,19,31,7,332";
    std::string cyc_growths, cyc_amplitudes;
    std::size_t cyc_series = 12, cyc_length = 1024;
    double cyc_noise = 0.0;
    std::uint64_t cyc_seed = 1;
    bool cyc_quadrature = true;
    auto* cyc_cmd = synth_cmd->add_subcommand("cycles", "panel of damped cycles on random "
                                                        "loadings (ingest CSV contract)");
    cyc_cmd->add_option("--out", cyc_out, "output CSV")->required();
    cyc_cmd->add_option("--periods", cyc_periods, "comma list of cycle periods in days "
                                                  "(inf = steady)")
        ->capture_default_str();
    cyc_cmd->add_option("--growths", cyc_growths, "comma list of per-day growth rates "
                                                  "(default 0)");
    cyc_cmd->add_option("--amplitudes", cyc_amplitudes, "comma list (default descending)");
    cyc_cmd->add_option("--series", cyc_series, "series count")->capture_default_str();
    cyc_cmd->add_option("--length", cyc_length, "observations")->capture_default_str();
    cyc_cmd->add_option("--noise-std", cyc_noise, "Gaussian noise std")->capture_default_str();
    cyc_cmd->add_option("--seed", cyc_seed, "RNG seed")->capture_default_str();
    cyc_cmd->add_flag("--quadrature,!--no-quadrature", cyc_quadrature,
                      "plant each finite cycle in quadrature (DMD-recoverable)");

    std::string cas_out;
    int cas_depth = 10;
    double cas_m0 = 0.4, cas_m1 = 0.6;
    std::uint64_t cas_seed = 1;
    auto* cas_cmd = synth_cmd->add_subcommand("cascade", "multiplicative cascade detail "
                                                         "coefficients (level,k,value CSV)");
    cas_cmd->add_option("--out", cas_out, "output CSV")->required();
    cas_cmd->add_option("--depth", cas_depth, "tree depth / level count")->capture_default_str();
    cas_cmd->add_option("--m0", cas_m0, "first multiplier")->capture_default_str();
    cas_cmd->add_option("--m1", cas_m1, "second multiplier")->capture_default_str();
    cas_cmd->add_option("--seed", cas_seed, "RNG seed")->capture_default_str();

    // run -----------------------------------------------------------------
    std::string run_config;
    std::string run_input, run_out, run_normalize, run_filter, run_fit, run_series, run_power;
    int run_levels = -1, run_rank = -1, run_top = -1;
    double run_energy = -1.0, run_alpha = -1.0;
    std::uint64_t run_seed = 0;
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file into an "
                                              "output bundle with manifest");
    run_cmd->add_option("--config", run_config, "config file")->required();
    run_cmd->add_option("--input", run_input, "override input.path");
    run_cmd->add_option("--out", run_out, "override output.dir");
    auto* seed_opt = run_cmd->add_option("--seed", run_seed, "override output.seed");
    run_cmd->add_option("--normalize", run_normalize, "override input.normalize");
    run_cmd->add_option("--filter", run_filter, "override wavelet.filter");
    run_cmd->add_option("--levels", run_levels, "override wavelet.levels");
    run_cmd->add_option("--fit-levels", run_fit, "override mfspectrum.fit_levels");
    run_cmd->add_option("--series", run_series, "override mfspectrum.series");
    run_cmd->add_option("--rank", run_rank, "override dmd.rank");
    run_cmd->add_option("--energy", run_energy, "override dmd.energy");
    run_cmd->add_option("--top", run_top, "override dmd.top");
    run_cmd->add_option("--power", run_power, "override dmd.power (amp2|amp)");
    run_cmd->add_option("--alpha", run_alpha, "override stats.alpha");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*stats_cmd) {
            IngestConfig ic;
            ic.missing = parse_missing_policy(stats_io.missing);
            Panel raw = load_panel_file(stats_io.input, ic);
            Panel p = normalize(raw, parse_normalize_method(stats_io.normalize));
            std::vector<SeriesSummary> summaries;
            std::vector<JbResult> jb;
            for (std::size_t i = 0; i < p.series_count(); ++i) {
                summaries.push_back(summarize(p.series(i)));
                jb.push_back(jarque_bera(p.series(i), stats_alpha));
            }
            auto out = open_out(stats_io.out);
            emit_stats_table(p.series_ids, summaries, jb, out);
            info("wrote " + stats_io.out);
        } else if (*wav_cmd) {
            Panel p = load_input(wav_io.input, wav_io.missing, wav_io.normalize);
            const FilterPair filter = FilterPair::from_name(wav_filter);
            const BoundaryPolicy bp = wav_pad ? BoundaryPolicy::zero_pad : BoundaryPolicy::strict;
            std::filesystem::create_directories(wav_io.out);
            for (std::size_t i = 0; i < p.series_count(); ++i) {
                const MraDecomposition d = mra(p.series(i), filter, wav_levels, bp);
                const std::string path = wav_io.out + "/" + p.series_ids[i] + ".csv";
                auto out = open_out(path);
                emit_decomposition(d, p.series(i), p.times, out);
            }
            info("wrote " + std::to_string(p.series_count()) + " decompositions to " +
                 wav_io.out);
        } else if (*mf_cmd) {
            Panel p = load_input(mf_io.input, mf_io.missing, mf_io.normalize);
            std::size_t target = 0;
            if (!mf_series.empty()) {
                auto it = std::find(p.series_ids.begin(), p.series_ids.end(), mf_series);
                if (it == p.series_ids.end())
                    throw ValidationError("unknown series '" + mf_series + "'");
                target = std::size_t(it - p.series_ids.begin());
            }
            const FilterPair filter = FilterPair::from_name(mf_filter);
            const BoundaryPolicy bp = mf_pad ? BoundaryPolicy::zero_pad : BoundaryPolicy::strict;
            const WaveletCoefficients coeffs = dwt_forward(p.series(target), filter, mf_levels, bp);
            SpectrumOptions opts;
            if (!std::isnan(pmin)) opts.p_min = pmin;
            if (!std::isnan(pmax)) opts.p_max = pmax;
            opts.p_step = pstep;
            opts.alpha_min = amin;
            opts.alpha_max = amax;
            opts.alpha_step = astep;
            if (!mf_fit.empty()) opts.fit_range = parse_level_range(mf_fit);
            const MultifractalSpectrum mf = estimate_spectrum(coeffs, opts);
            std::filesystem::create_directories(mf_io.out);
            {
                auto out = open_out(mf_io.out + "/besov.csv");
                emit_besov(mf, out);
            }
            {
                auto out = open_out(mf_io.out + "/spectrum.csv");
                emit_spectrum(mf, out);
            }
            std::cout << "series " << p.series_ids[target] << ": spectrum is "
                      << (mf.concave ? "concave" : "not concave")
                      << " (max second difference " << format_full(mf.concavity_gap) << ")\n";
        } else if (*dmd_cmd) {
            Panel p = load_input(dmd_io.input, dmd_io.missing, dmd_io.normalize);
            RankSpec spec = dmd_rank >= 0 ? RankSpec::fixed(dmd_rank)
                                          : RankSpec::energy_threshold(dmd_energy);
            const DmdModel model = fit_dmd(p, spec);
            const PowerConvention conv = dmd_power == "amp"
                                             ? PowerConvention::amplitude
                                             : PowerConvention::amplitude_squared;
            const ModeReport report = mode_report(model, conv);
            const std::size_t k = std::min<std::size_t>(std::size_t(dmd_top),
                                                        report.rows.size());
            std::filesystem::create_directories(dmd_io.out);
            {
                auto out = open_out(dmd_io.out + "/modes.csv");
                emit_mode_table(report, k, out);
            }
            {
                auto out = open_out(dmd_io.out + "/spatial.csv");
                emit_spatial_magnitudes(model, report, k, out);
            }
            {
                auto out = open_out(dmd_io.out + "/temporal.csv");
                emit_temporal_traces(model, report, k, out);
            }
            {
                auto out = open_out(dmd_io.out + "/phase_magnitude.csv");
                emit_phase_magnitude(model, report, k, out);
            }
            info("rank " + std::to_string(model.rank) + " fit; wrote mode tables to " +
                 dmd_io.out);
        } else if (*cyc_cmd) {
            const auto periods = parse_list(cyc_periods);
            std::vector<double> growths(periods.size(), 0.0);
            if (!cyc_growths.empty()) growths = parse_list(cyc_growths);
            std::vector<double> amplitudes(periods.size());
            for (std::size_t i = 0; i < periods.size(); ++i)
                amplitudes[i] = double(periods.size() - i);
            if (!cyc_amplitudes.empty()) amplitudes = parse_list(cyc_amplitudes);
            if (growths.size() != periods.size() || amplitudes.size() != periods.size())
                throw ValidationError("synth cycles: periods/growths/amplitudes lengths differ");

            GaussianSampler shapes(cyc_seed ^ 0x9e3779b97f4a7c15ull);
            auto random_loading = [&] {
                std::vector<double> v(cyc_series);
                double norm = 0.0;
                for (double& x : v) {
                    x = shapes.next();
                    norm += x * x;
                }
                norm = std::sqrt(norm);
                for (double& x : v) x /= norm;
                return v;
            };
            std::vector<CycleSpec> specs;
            for (std::size_t i = 0; i < periods.size(); ++i) {
                if (cyc_quadrature && std::isfinite(periods[i])) {
                    auto pair = quadrature_pair(periods[i], growths[i], amplitudes[i], 0.0,
                                                random_loading(), random_loading());
                    specs.push_back(std::move(pair[0]));
                    specs.push_back(std::move(pair[1]));
                } else {
                    specs.push_back(
                        CycleSpec{periods[i], growths[i], amplitudes[i], 0.0, random_loading()});
                }
            }
            const Panel p = gen_planted_cycles(specs, cyc_length, cyc_noise, cyc_seed);
            save_panel_file(p, cyc_out);
            info("wrote " + cyc_out);
        } else if (*cas_cmd) {
            const WaveletCoefficients c = gen_cascade(cas_depth, cas_m0, cas_m1, cas_seed);
            auto out = open_out(cas_out);
            out << "level,k,value\n";
            for (int j = 1; j <= c.levels; ++j) {
                const auto d = c.detail(j);
                for (std::size_t k = 0; k < d.size(); ++k)
                    out << j << ',' << k << ',' << format_full(d[k]) << '\n';
            }
            info("wrote " + cas_out);
        } else if (*run_cmd) {
            RunConfig cfg = parse_config_file(run_config);
            if (!run_input.empty()) cfg.input_path = run_input;
            if (!run_out.empty()) cfg.out_dir = run_out;
            if (!seed_opt->empty()) cfg.seed = run_seed;
            if (!run_normalize.empty()) cfg.normalize = parse_normalize_method(run_normalize);
            if (!run_filter.empty()) cfg.filter = run_filter;
            if (run_levels >= 0) cfg.levels = run_levels;
            if (!run_fit.empty()) cfg.fit_levels = parse_level_range(run_fit);
            if (!run_series.empty()) cfg.mf_series = run_series;
            if (run_rank >= 0) cfg.rank = run_rank;
            if (run_energy > 0.0) cfg.energy = run_energy;
            if (run_top >= 0) cfg.top_k = run_top;
            if (!run_power.empty()) {
                if (run_power == "amp2") cfg.power = PowerConvention::amplitude_squared;
                else if (run_power == "amp") cfg.power = PowerConvention::amplitude;
                else throw ValidationError("dmd.power must be amp2 or amp");
            }
            if (run_alpha > 0.0) cfg.jb_alpha = run_alpha;
            const std::string manifest = run_and_emit(cfg);
            info("bundle complete; manifest at " + manifest);
            std::cout << manifest << '\n';
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
