#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wavemode/config.hpp"
#include "wavemode/dmd.hpp"
#include "wavemode/errors.hpp"
#include "wavemode/multifractal.hpp"
#include "wavemode/panel.hpp"
#include "wavemode/pipeline.hpp"
#include "wavemode/stats.hpp"
#include "wavemode/synth.hpp"
#include "wavemode/version.hpp"
#include "wavemode/wavelet.hpp"

namespace py = pybind11;
using namespace wavemode;

PYBIND11_MODULE(_core, m) {
    m.doc() = "panel decomposition toolkit: wavelet MRA, multifractal spectra and exact DMD";
    m.attr("__version__") = kVersion;
    m.attr("INFINITE") = std::numeric_limits<double>::infinity();

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // panel -----------------------------------------------------------
    py::enum_<NormalizeMethod>(m, "NormalizeMethod")
        .value("minmax", NormalizeMethod::minmax)
        .value("zscore", NormalizeMethod::zscore)
        .value("none", NormalizeMethod::none);
    py::enum_<MissingPolicy>(m, "MissingPolicy")
        .value("reject", MissingPolicy::reject)
        .value("forward_fill", MissingPolicy::forward_fill);

    py::class_<Panel>(m, "Panel")
        .def(py::init<>())
        .def_readwrite("series_ids", &Panel::series_ids)
        .def_readwrite("times", &Panel::times)
        .def_readwrite("values", &Panel::values)
        .def_readwrite("dt", &Panel::dt)
        .def("validate", &Panel::validate)
        .def("series_count", &Panel::series_count)
        .def("length", &Panel::length);

    m.def(
        "load_panel",
        [](const std::string& path, MissingPolicy missing) {
            IngestConfig cfg;
            cfg.missing = missing;
            return load_panel_file(path, cfg);
        },
        py::arg("path"), py::arg("missing") = MissingPolicy::reject);
    m.def(
        "loads_panel",
        [](const std::string& text, MissingPolicy missing) {
            IngestConfig cfg;
            cfg.missing = missing;
            std::istringstream in(text);
            return load_panel(in, cfg);
        },
        py::arg("text"), py::arg("missing") = MissingPolicy::reject);
    m.def("save_panel", &save_panel_file, py::arg("panel"), py::arg("path"));
    m.def("normalize", &normalize, py::arg("panel"), py::arg("method"));
    m.def("stack_for_plot", &stack_for_plot, py::arg("panel"), py::arg("gap"));

    // stats -----------------------------------------------------------
    py::class_<SeriesSummary>(m, "SeriesSummary")
        .def_readonly("mean", &SeriesSummary::mean)
        .def_readonly("median", &SeriesSummary::median)
        .def_readonly("min", &SeriesSummary::min)
        .def_readonly("max", &SeriesSummary::max)
        .def_readonly("std", &SeriesSummary::std)
        .def_readonly("skewness", &SeriesSummary::skewness)
        .def_readonly("kurtosis", &SeriesSummary::kurtosis);
    py::class_<JbResult>(m, "JbResult")
        .def_readonly("statistic", &JbResult::statistic)
        .def_readonly("p_value", &JbResult::p_value)
        .def_readonly("h", &JbResult::h)
        .def_readonly("alpha", &JbResult::alpha);
    m.def("summarize",
          [](const std::vector<double>& x) { return summarize(x); });
    m.def(
        "jarque_bera",
        [](const std::vector<double>& x, double alpha) { return jarque_bera(x, alpha); },
        py::arg("series"), py::arg("alpha") = 0.05);

    // wavelet ---------------------------------------------------------
    py::class_<FilterPair>(m, "FilterPair")
        .def_readonly("name", &FilterPair::name)
        .def_readonly("lowpass", &FilterPair::lowpass)
        .def_readonly("highpass", &FilterPair::highpass)
        .def_static("haar", &FilterPair::haar)
        .def_static("db2", &FilterPair::db2)
        .def_static("from_name", &FilterPair::from_name);
    py::enum_<BoundaryPolicy>(m, "BoundaryPolicy")
        .value("strict", BoundaryPolicy::strict)
        .value("zero_pad", BoundaryPolicy::zero_pad);
    py::class_<WaveletCoefficients>(m, "WaveletCoefficients")
        .def_readwrite("levels", &WaveletCoefficients::levels)
        .def_readwrite("details", &WaveletCoefficients::details)
        .def_readwrite("approx", &WaveletCoefficients::approx)
        .def_readwrite("length", &WaveletCoefficients::length)
        .def_readwrite("source_length", &WaveletCoefficients::source_length)
        .def("padded", &WaveletCoefficients::padded);
    py::class_<MraDecomposition>(m, "MraDecomposition")
        .def_readonly("approximation", &MraDecomposition::approximation)
        .def_readonly("details", &MraDecomposition::details)
        .def("levels", &MraDecomposition::levels);
    m.def(
        "dwt_forward",
        [](const std::vector<double>& x, const FilterPair& f, int levels,
           BoundaryPolicy b) { return dwt_forward(x, f, levels, b); },
        py::arg("series"), py::arg("filter"), py::arg("levels"),
        py::arg("boundary") = BoundaryPolicy::strict);
    m.def("dwt_inverse", &dwt_inverse, py::arg("coefficients"), py::arg("filter"));
    m.def(
        "mra",
        [](const std::vector<double>& x, const FilterPair& f, int levels, BoundaryPolicy b) {
            return mra(x, f, levels, b);
        },
        py::arg("series"), py::arg("filter"), py::arg("levels"),
        py::arg("boundary") = BoundaryPolicy::strict);

    // multifractal ----------------------------------------------------
    py::class_<LevelRange>(m, "LevelRange")
        .def(py::init<int, int>(), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &LevelRange::lo)
        .def_readwrite("hi", &LevelRange::hi);
    py::class_<StructureFunctions>(m, "StructureFunctions")
        .def_readonly("levels", &StructureFunctions::levels)
        .def_readonly("p_grid", &StructureFunctions::p_grid)
        .def_readonly("s", &StructureFunctions::s)
        .def_readonly("zeros_skipped", &StructureFunctions::zeros_skipped);
    py::class_<SpectrumPoint>(m, "SpectrumPoint")
        .def_readonly("alpha", &SpectrumPoint::alpha)
        .def_readonly("d", &SpectrumPoint::d)
        .def_readonly("argmin_p", &SpectrumPoint::argmin_p);
    py::class_<MultifractalSpectrum>(m, "MultifractalSpectrum")
        .def_readonly("structure", &MultifractalSpectrum::structure)
        .def_readonly("besov", &MultifractalSpectrum::besov)
        .def_readonly("spectrum", &MultifractalSpectrum::spectrum)
        .def_readonly("fit_range", &MultifractalSpectrum::fit_range)
        .def_readonly("concave", &MultifractalSpectrum::concave)
        .def_readonly("concavity_gap", &MultifractalSpectrum::concavity_gap);
    m.def(
        "structure_functions",
        [](const WaveletCoefficients& c, const std::vector<double>& p) {
            return structure_functions(c, p);
        },
        py::arg("coefficients"), py::arg("p_grid"));
    m.def("besov_exponent", &besov_exponent, py::arg("structure"), py::arg("fit_range"));
    m.def(
        "singularity_spectrum",
        [](const std::vector<double>& b, const std::vector<double>& p,
           const std::vector<double>& a) { return singularity_spectrum(b, p, a); },
        py::arg("besov"), py::arg("p_grid"), py::arg("alpha_grid"));
    m.def(
        "concavity_test",
        [](const std::vector<double>& alpha, const std::vector<double>& d, double tol) {
            const auto r = concavity_test(alpha, d, tol);
            return py::make_tuple(r.concave, r.gap);
        },
        py::arg("alpha"), py::arg("d"), py::arg("tol") = 1e-8);
    m.def(
        "estimate_spectrum",
        [](const WaveletCoefficients& c, std::optional<double> p_min,
           std::optional<double> p_max, double p_step, double alpha_min, double alpha_max,
           double alpha_step, std::optional<LevelRange> fit_range, double concavity_tol) {
            SpectrumOptions opts;
            opts.p_min = p_min;
            opts.p_max = p_max;
            opts.p_step = p_step;
            opts.alpha_min = alpha_min;
            opts.alpha_max = alpha_max;
            opts.alpha_step = alpha_step;
            opts.fit_range = fit_range;
            opts.concavity_tol = concavity_tol;
            return estimate_spectrum(c, opts);
        },
        py::arg("coefficients"), py::arg("p_min") = std::nullopt,
        py::arg("p_max") = std::nullopt, py::arg("p_step") = 0.25,
        py::arg("alpha_min") = 0.0, py::arg("alpha_max") = 1.5, py::arg("alpha_step") = 0.01,
        py::arg("fit_range") = std::nullopt, py::arg("concavity_tol") = 1e-3);

    // dmd ---------------------------------------------------------------
    py::enum_<PowerConvention>(m, "PowerConvention")
        .value("amplitude_squared", PowerConvention::amplitude_squared)
        .value("amplitude", PowerConvention::amplitude);
    py::class_<DmdMode>(m, "DmdMode")
        .def_readonly("eigenvalue", &DmdMode::eigenvalue)
        .def_readonly("shape", &DmdMode::shape)
        .def_readonly("amplitude", &DmdMode::amplitude)
        .def_readonly("omega", &DmdMode::omega)
        .def_readonly("decayed_one_step", &DmdMode::decayed_one_step)
        .def_readonly("at_nyquist", &DmdMode::at_nyquist);
    py::class_<DmdModel>(m, "DmdModel")
        .def_readonly("rank", &DmdModel::rank)
        .def_readonly("dt", &DmdModel::dt)
        .def_readonly("svd_energy", &DmdModel::svd_energy)
        .def_readonly("modes", &DmdModel::modes)
        .def_readonly("series_ids", &DmdModel::series_ids);
    py::class_<ModeRow>(m, "ModeRow")
        .def_readonly("mode", &ModeRow::mode)
        .def_readonly("power", &ModeRow::power)
        .def_readonly("daily_frequency", &ModeRow::daily_frequency)
        .def_readonly("duration_days", &ModeRow::duration_days)
        .def_readonly("growth_rate", &ModeRow::growth_rate)
        .def_readonly("model_index", &ModeRow::model_index);
    py::class_<ModeReport>(m, "ModeReport")
        .def_readonly("rows", &ModeReport::rows)
        .def_readonly("decayed_excluded", &ModeReport::decayed_excluded);
    m.def(
        "fit_dmd",
        [](const Panel& panel, std::optional<int> rank, double energy) {
            RankSpec spec;
            if (rank.has_value())
                spec = RankSpec::fixed(*rank);
            else
                spec = RankSpec::energy_threshold(energy);
            return fit_dmd(panel, spec);
        },
        py::arg("panel"), py::arg("rank") = std::nullopt, py::arg("energy") = 0.999);
    m.def("mode_report", &mode_report, py::arg("model"),
          py::arg("convention") = PowerConvention::amplitude_squared);
    m.def(
        "temporal_dynamics",
        [](const DmdModel& model, const std::vector<double>& times) {
            const auto tr = temporal_dynamics(model, times);
            return py::make_tuple(tr.mode_indices, tr.traces);
        },
        py::arg("model"), py::arg("times"));
    m.def(
        "real_mode_trace",
        [](const DmdModel& model, const ModeRow& row, const std::vector<double>& times) {
            return real_mode_trace(model, row, times);
        },
        py::arg("model"), py::arg("row"), py::arg("times"));
    m.def(
        "reconstruct",
        [](const DmdModel& model, const std::vector<std::int64_t>& offsets) {
            return reconstruct(model, offsets);
        },
        py::arg("model"), py::arg("day_offsets"));
    m.def(
        "phase_magnitude",
        [](const DmdModel& model, int index) {
            std::vector<py::tuple> out;
            for (const auto& e : phase_magnitude(model, index))
                out.push_back(py::make_tuple(e.series_id, e.magnitude, e.phase));
            return out;
        },
        py::arg("model"), py::arg("mode_index"));

    // synth ---------------------------------------------------------------
    py::class_<CycleSpec>(m, "CycleSpec")
        .def(py::init([](double period, double growth_rate, double amplitude, double phase,
                         std::vector<double> loading) {
                 return CycleSpec{period, growth_rate, amplitude, phase, std::move(loading)};
             }),
             py::arg("period"), py::arg("growth_rate") = 0.0, py::arg("amplitude") = 1.0,
             py::arg("phase") = 0.0, py::arg("loading") = std::vector<double>{})
        .def_readwrite("period", &CycleSpec::period)
        .def_readwrite("growth_rate", &CycleSpec::growth_rate)
        .def_readwrite("amplitude", &CycleSpec::amplitude)
        .def_readwrite("phase", &CycleSpec::phase)
        .def_readwrite("loading", &CycleSpec::loading);
    m.def(
        "quadrature_pair",
        [](double period, double growth_rate, double amplitude, double phase,
           std::vector<double> a, std::vector<double> b) {
            auto pair = quadrature_pair(period, growth_rate, amplitude, phase, std::move(a),
                                        std::move(b));
            return py::make_tuple(pair[0], pair[1]);
        },
        py::arg("period"), py::arg("growth_rate"), py::arg("amplitude"), py::arg("phase"),
        py::arg("loading_a"), py::arg("loading_b"));
    m.def(
        "gen_linear_system",
        [](const std::vector<std::vector<double>>& a, const std::vector<double>& x0,
           std::size_t length) { return gen_linear_system(a, x0, length); },
        py::arg("a"), py::arg("x0"), py::arg("length"));
    m.def(
        "gen_planted_cycles",
        [](const std::vector<CycleSpec>& specs, std::size_t length, double noise_std,
           std::uint64_t seed) { return gen_planted_cycles(specs, length, noise_std, seed); },
        py::arg("specs"), py::arg("length"), py::arg("noise_std") = 0.0, py::arg("seed") = 0);
    m.def("gen_cascade", &gen_cascade, py::arg("depth"), py::arg("m0"), py::arg("m1"),
          py::arg("seed") = 0);

    // pipeline --------------------------------------------------------
    m.def(
        "run_pipeline_file",
        [](const std::string& config_path) {
            const RunConfig cfg = parse_config_file(config_path);
            return run_and_emit(cfg);
        },
        py::arg("config_path"), "run the full pipeline from a config file; returns the "
                                "manifest path");
}
