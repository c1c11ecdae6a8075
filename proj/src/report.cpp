#include "wavemode/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavemode/errors.hpp"
#include "wavemode/version.hpp"

namespace wavemode {

namespace {

using nlohmann::json;

std::string format_sig(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

json complex_json(const std::complex<double>& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

std::size_t clamp_top(const ModeReport& report, std::size_t top_k) {
    if (top_k > report.rows.size())
        throw ValidationError("mode table: requested top " + std::to_string(top_k) +
                              " of only " + std::to_string(report.rows.size()) + " modes");
    return top_k;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(bytes));
    return buf;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string format_full(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void emit_mode_table(const ModeReport& report, std::size_t top_k, std::ostream& out) {
    const std::size_t k = clamp_top(report, top_k);
    out << "mode,daily_frequency,duration_days\n";
    for (std::size_t i = 0; i < k; ++i) {
        const ModeRow& row = report.rows[i];
        out << row.mode << ',' << format_fixed(row.daily_frequency, 4) << ',';
        if (row.duration_days.has_value())
            out << *row.duration_days;
        else
            out << "Inf";
        out << '\n';
    }
}

void emit_decomposition(const MraDecomposition& mra, std::span<const double> source,
                        std::span<const std::int64_t> times, std::ostream& out) {
    const std::size_t t_count = times.size();
    if (source.size() != t_count || mra.approximation.size() != t_count)
        throw ValidationError("emit_decomposition: lengths disagree");
    out << "t,component,value\n";
    for (std::size_t t = 0; t < t_count; ++t)
        out << times[t] << ",x," << format_full(source[t]) << '\n';
    const std::string a_name = "A" + std::to_string(mra.levels());
    for (std::size_t t = 0; t < t_count; ++t)
        out << times[t] << ',' << a_name << ',' << format_full(mra.approximation[t]) << '\n';
    for (int j = 1; j <= mra.levels(); ++j) {
        const auto& dx = mra.details[std::size_t(j) - 1];
        for (std::size_t t = 0; t < t_count; ++t)
            out << times[t] << ",D" << j << ',' << format_full(dx[t]) << '\n';
    }
}

void emit_stats_table(std::span<const std::string> ids, std::span<const SeriesSummary> summaries,
                      std::span<const JbResult> jb, std::ostream& out) {
    if (ids.size() != summaries.size() || ids.size() != jb.size())
        throw ValidationError("emit_stats_table: lengths disagree");
    out << "id,mean,median,min,max,std,skewness,kurtosis,jb_h,jb_p\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const SeriesSummary& s = summaries[i];
        out << ids[i] << ',' << format_fixed(s.mean, 2) << ',' << format_fixed(s.median, 2)
            << ',' << format_fixed(s.min, 2) << ',' << format_fixed(s.max, 2) << ','
            << format_fixed(s.std, 2) << ','
            << (s.skewness ? format_fixed(*s.skewness, 2) : "NA") << ','
            << (s.kurtosis ? format_fixed(*s.kurtosis, 2) : "NA") << ',' << (jb[i].h ? 1 : 0)
            << ',' << format_sig(jb[i].p_value, 3) << '\n';
    }
}

void emit_besov(const MultifractalSpectrum& mf, std::ostream& out) {
    out << "p,b\n";
    for (std::size_t i = 0; i < mf.structure.p_grid.size(); ++i)
        out << format_full(mf.structure.p_grid[i]) << ',' << format_full(mf.besov[i]) << '\n';
}

void emit_spectrum(const MultifractalSpectrum& mf, std::ostream& out) {
    out << "alpha,d,argmin_p\n";
    for (const SpectrumPoint& pt : mf.spectrum)
        out << format_full(pt.alpha) << ',' << format_full(pt.d) << ','
            << format_full(pt.argmin_p) << '\n';
}

void emit_spatial_magnitudes(const DmdModel& model, const ModeReport& report, std::size_t top_k,
                             std::ostream& out) {
    const std::size_t k = clamp_top(report, top_k);
    out << "mode,series,magnitude\n";
    for (std::size_t i = 0; i < k; ++i) {
        const ModeRow& row = report.rows[i];
        const DmdMode& m = model.modes[std::size_t(row.model_index)];
        for (std::size_t s = 0; s < m.shape.size(); ++s)
            out << row.mode << ',' << model.series_ids[s] << ','
                << format_full(std::abs(m.shape[s])) << '\n';
    }
}

void emit_temporal_traces(const DmdModel& model, const ModeReport& report, std::size_t top_k,
                          std::ostream& out) {
    const std::size_t k = clamp_top(report, top_k);
    std::vector<double> times(model.sample_count);
    for (std::size_t t = 0; t < model.sample_count; ++t) times[t] = double(t) * model.dt;
    std::vector<std::vector<double>> traces;
    traces.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        traces.push_back(real_mode_trace(model, report.rows[i], times));
    out << "t";
    for (std::size_t i = 0; i < k; ++i) out << ",mode" << report.rows[i].mode;
    out << '\n';
    for (std::size_t t = 0; t < times.size(); ++t) {
        out << format_full(times[t]);
        for (std::size_t i = 0; i < k; ++i) out << ',' << format_full(traces[i][t]);
        out << '\n';
    }
}

void emit_phase_magnitude(const DmdModel& model, const ModeReport& report, std::size_t top_k,
                          std::ostream& out) {
    const std::size_t k = clamp_top(report, top_k);
    out << "mode,series,magnitude,phase\n";
    for (std::size_t i = 0; i < k; ++i) {
        const ModeRow& row = report.rows[i];
        const auto entries = phase_magnitude(model, row.model_index);
        for (const auto& e : entries)
            out << row.mode << ',' << e.series_id << ',' << format_full(e.magnitude) << ','
                << format_full(e.phase) << '\n';
    }
}

std::string emit_bundle(const AnalysisBundle& bundle, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    fs::create_directories(root);

    json manifest;
    manifest["tool"] = "wavemode";
    manifest["version"] = bundle.provenance.tool_version.empty() ? kVersion
                                                                 : bundle.provenance.tool_version;
    manifest["config_hash"] = bundle.provenance.config_hash;
    manifest["seed"] = bundle.provenance.seed;
    json stages = json::object();
    json artifacts = json::array();

    auto add_artifact = [&](const std::string& cls, const std::string& rel,
                            const std::string& contents) {
        write_file(root / rel, contents);
        artifacts.push_back(
            json{{"class", cls}, {"path", rel}, {"hash", "fnv1a64:" + fnv1a64_hex(contents)}});
    };

    { // panel echo
        std::ostringstream os;
        save_panel(bundle.panel, os);
        add_artifact("panel", "panel.csv", os.str());
        stages["panel"] = "ok";
    }

    if (bundle.stats_done()) {
        std::ostringstream os;
        emit_stats_table(bundle.panel.series_ids, bundle.summaries, bundle.jb, os);
        add_artifact("stats", "stats.csv", os.str());

        json rows = json::array();
        for (std::size_t i = 0; i < bundle.summaries.size(); ++i) {
            const SeriesSummary& s = bundle.summaries[i];
            json row{{"id", bundle.panel.series_ids[i]}, {"mean", s.mean},
                     {"median", s.median},               {"min", s.min},
                     {"max", s.max},                     {"std", s.std}};
            row["skewness"] = s.skewness ? json(*s.skewness) : json(nullptr);
            row["kurtosis"] = s.kurtosis ? json(*s.kurtosis) : json(nullptr);
            row["jb"] = json{{"statistic", bundle.jb[i].statistic},
                             {"p_value", bundle.jb[i].p_value},
                             {"h", bundle.jb[i].h},
                             {"alpha", bundle.jb[i].alpha}};
            rows.push_back(std::move(row));
        }
        add_artifact("stats", "stats.json", rows.dump(2) + "\n");
        stages["stats"] = "ok";
    } else {
        stages["stats"] = "skipped";
    }

    if (bundle.mra_done()) {
        fs::create_directories(root / "mra");
        for (std::size_t i = 0; i < bundle.decompositions.size(); ++i) {
            std::ostringstream os;
            emit_decomposition(bundle.decompositions[i], bundle.panel.values[i],
                               bundle.panel.times, os);
            add_artifact("mra", "mra/" + bundle.panel.series_ids[i] + ".csv", os.str());
        }
        stages["mra"] = "ok";
    } else {
        stages["mra"] = "skipped";
    }

    if (bundle.spectrum.has_value()) {
        fs::create_directories(root / "mfspectrum");
        const MultifractalSpectrum& mf = *bundle.spectrum;
        std::ostringstream besov_os;
        emit_besov(mf, besov_os);
        add_artifact("mfspectrum", "mfspectrum/besov.csv", besov_os.str());
        std::ostringstream spec_os;
        emit_spectrum(mf, spec_os);
        add_artifact("mfspectrum", "mfspectrum/spectrum.csv", spec_os.str());

        json mj;
        mj["series"] = bundle.spectrum_series;
        mj["p_grid"] = mf.structure.p_grid;
        mj["besov"] = mf.besov;
        mj["fit_range"] = json{{"lo", mf.fit_range.lo}, {"hi", mf.fit_range.hi}};
        mj["alpha"] = json::array();
        mj["d"] = json::array();
        mj["argmin_p"] = json::array();
        for (const SpectrumPoint& pt : mf.spectrum) {
            mj["alpha"].push_back(pt.alpha);
            mj["d"].push_back(pt.d);
            mj["argmin_p"].push_back(pt.argmin_p);
        }
        mj["concave"] = mf.concave;
        mj["concavity_gap"] = mf.concavity_gap;
        mj["zeros_skipped"] = mf.structure.zeros_skipped;
        add_artifact("mfspectrum", "mfspectrum/mfspectrum.json", mj.dump(2) + "\n");
        stages["mfspectrum"] = "ok";
    } else {
        stages["mfspectrum"] = "skipped";
    }

    if (bundle.dmd.has_value() && bundle.modes.has_value()) {
        fs::create_directories(root / "dmd");
        const DmdModel& model = *bundle.dmd;
        const ModeReport& report = *bundle.modes;
        const std::size_t k = std::min<std::size_t>(std::size_t(bundle.top_k),
                                                    report.rows.size());
        std::ostringstream table_os;
        emit_mode_table(report, k, table_os);
        add_artifact("dmd", "dmd/modes.csv", table_os.str());
        std::ostringstream spatial_os;
        emit_spatial_magnitudes(model, report, k, spatial_os);
        add_artifact("dmd", "dmd/spatial.csv", spatial_os.str());
        std::ostringstream temporal_os;
        emit_temporal_traces(model, report, k, temporal_os);
        add_artifact("dmd", "dmd/temporal.csv", temporal_os.str());
        std::ostringstream pm_os;
        emit_phase_magnitude(model, report, k, pm_os);
        add_artifact("dmd", "dmd/phase_magnitude.csv", pm_os.str());

        json dj;
        dj["rank"] = model.rank;
        dj["dt"] = model.dt;
        dj["svd_energy"] = model.svd_energy;
        dj["power_convention"] =
            report.convention == PowerConvention::amplitude_squared ? "amplitude_squared"
                                                                    : "amplitude";
        dj["modes"] = json::array();
        for (const DmdMode& m : model.modes) {
            json mm{{"eigenvalue", complex_json(m.eigenvalue)},
                    {"amplitude", complex_json(m.amplitude)},
                    {"decayed_one_step", m.decayed_one_step},
                    {"at_nyquist", m.at_nyquist}};
            mm["omega"] = m.decayed_one_step ? json(nullptr) : complex_json(m.omega);
            json shape = json::array();
            for (const auto& z : m.shape) shape.push_back(complex_json(z));
            mm["shape"] = std::move(shape);
            dj["modes"].push_back(std::move(mm));
        }
        dj["report"] = json::array();
        for (const ModeRow& row : report.rows) {
            json rr{{"mode", row.mode},
                    {"power", row.power},
                    {"daily_frequency", row.daily_frequency},
                    {"growth_rate", row.growth_rate},
                    {"model_index", row.model_index}};
            rr["duration_days"] = row.duration_days ? json(*row.duration_days) : json(nullptr);
            dj["report"].push_back(std::move(rr));
        }
        add_artifact("dmd", "dmd/dmd.json", dj.dump(2) + "\n");
        stages["dmd"] = "ok";
    } else {
        stages["dmd"] = "skipped";
    }

    manifest["stages"] = std::move(stages);
    manifest["artifacts"] = std::move(artifacts);
    const std::string manifest_path = (root / "manifest.json").string();
    write_file(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

} // namespace wavemode
