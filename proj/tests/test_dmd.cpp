#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"
#include "wavemode/dmd.hpp"
#include "wavemode/errors.hpp"
#include "wavemode/synth.hpp"

using namespace wavemode;
using std::numbers::pi;

namespace {

std::vector<std::vector<double>> scaled_rotation(double theta, double rho) {
    return {{rho * std::cos(theta), -rho * std::sin(theta)},
            {rho * std::sin(theta), rho * std::cos(theta)}};
}

Panel constant_panel(std::size_t n, std::size_t t, double value) {
    Panel p;
    p.dt = 1.0;
    for (std::size_t i = 0; i < n; ++i) p.series_ids.push_back("s" + std::to_string(i + 1));
    p.times.resize(t);
    for (std::size_t k = 0; k < t; ++k) p.times[k] = std::int64_t(k);
    p.values.assign(n, std::vector<double>(t, value));
    return p;
}

// model with one planted mode per given omega, unit shapes on distinct axes
DmdModel synthetic_model(const std::vector<std::complex<double>>& omegas,
                         const std::vector<std::complex<double>>& amplitudes) {
    DmdModel m;
    m.rank = int(omegas.size());
    m.dt = 1.0;
    m.sample_count = 16;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        m.series_ids.push_back("s" + std::to_string(i + 1));
        DmdMode mode;
        mode.omega = omegas[i];
        mode.eigenvalue = std::exp(omegas[i]);
        mode.amplitude = amplitudes[i];
        mode.shape.assign(omegas.size(), {0.0, 0.0});
        mode.shape[i] = {1.0, 0.0};
        m.modes.push_back(std::move(mode));
    }
    return m;
}

double frobenius(const Panel& p) {
    double acc = 0.0;
    for (const auto& row : p.values)
        for (double v : row) acc += v * v;
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("DMD recovers the eigenvalues of a damped rotation") {
    const double theta = 0.1, rho = 0.99;
    const Panel p = gen_linear_system(scaled_rotation(theta, rho),
                                      std::vector<double>{1.0, 0.25}, 120);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(2));
    REQUIRE(model.modes.size() == 2);

    // oracle: the planted matrix has eigenvalues rho * exp(+-i theta)
    const std::complex<double> want(rho * std::cos(theta), rho * std::sin(theta));
    for (const auto& m : model.modes) {
        const std::complex<double> got = m.eigenvalue.imag() >= 0.0
                                             ? m.eigenvalue
                                             : std::conj(m.eigenvalue);
        CHECK(std::abs(got - want) < 1e-8);
    }
    const ModeReport report = mode_report(model);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].daily_frequency == doctest::Approx(theta / (2.0 * pi)).epsilon(1e-8));
}

TEST_CASE("a constant panel yields one steady mode") {
    const Panel p = constant_panel(4, 32, 3.25);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(1));
    REQUIRE(model.modes.size() == 1);
    CHECK(std::abs(model.modes[0].eigenvalue - std::complex<double>(1.0, 0.0)) < 1e-12);
    const ModeReport report = mode_report(model);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].daily_frequency == 0.0);
    CHECK_FALSE(report.rows[0].duration_days.has_value()); // infinite cycle
}

TEST_CASE("energy-threshold rank selection finds the signal rank") {
    std::vector<CycleSpec> specs;
    auto pair = quadrature_pair(19.0, 0.0, 1.0, 0.1, testutil::unit_loading(6, 1),
                                testutil::unit_loading(6, 2));
    specs.push_back(pair[0]);
    specs.push_back(pair[1]);
    const Panel p = gen_planted_cycles(specs, 256, 0.0, 0);
    const DmdModel model = fit_dmd(p); // default energy 0.999
    CHECK(model.rank == 2);
    CHECK(model.svd_energy >= 0.999);
}

TEST_CASE("duration arithmetic reproduces the whole-day rounding") {
    // frequencies and day counts from the price mode table
    const std::vector<std::pair<double, std::int64_t>> cases{
        {0.2154, 5}, {0.0517, 19}, {0.0320, 31}, {0.1436, 7}};
    std::vector<std::complex<double>> omegas, amps;
    for (const auto& [f, days] : cases) {
        omegas.push_back({-1e-3, 2.0 * pi * f});
        amps.push_back({1.0, 0.0});
    }
    omegas.push_back({-1e-3, 0.0}); // steady mode
    amps.push_back({1.0, 0.0});

    const DmdModel model = synthetic_model(omegas, amps);
    const ModeReport report = mode_report(model);
    REQUIRE(report.rows.size() == cases.size() + 1);
    for (const auto& row : report.rows) {
        if (row.daily_frequency == 0.0) {
            CHECK_FALSE(row.duration_days.has_value());
            continue;
        }
        const auto it = std::find_if(cases.begin(), cases.end(), [&](const auto& c) {
            return std::abs(c.first - row.daily_frequency) < 1e-12;
        });
        REQUIRE(it != cases.end());
        CHECK(row.duration_days.has_value());
        CHECK(*row.duration_days == it->second);
        CHECK(std::llround(1.0 / row.daily_frequency) == it->second);
    }
}

TEST_CASE("rank order sorts by power, then frequency, then index") {
    const std::vector<std::complex<double>> omegas{
        {0.0, 2.0 * pi * 0.2}, {0.0, 2.0 * pi * 0.1}, {0.0, 2.0 * pi * 0.3}};
    const std::vector<std::complex<double>> amps{{2.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    const ModeReport report = mode_report(synthetic_model(omegas, amps));
    REQUIRE(report.rows.size() == 3);
    // two power ties at |b|^2 = 4: the lower frequency wins
    CHECK(report.rows[0].daily_frequency == doctest::Approx(0.2));
    CHECK(report.rows[1].daily_frequency == doctest::Approx(0.3));
    CHECK(report.rows[2].daily_frequency == doctest::Approx(0.1));
    CHECK(report.rows[0].mode == 1);
    CHECK(report.rows[2].power == doctest::Approx(1.0));

    const ModeReport by_amp = mode_report(synthetic_model(omegas, amps),
                                          PowerConvention::amplitude);
    CHECK(by_amp.rows[0].power == doctest::Approx(2.0));
}

TEST_CASE("temporal dynamics of elementary modes") {
    // lambda = 1, b = 1: constant trace of 1
    {
        const DmdModel m = synthetic_model({{0.0, 0.0}}, {{1.0, 0.0}});
        const std::vector<double> times{0.0, 1.0, 2.0, 5.0};
        const TemporalTraces tr = temporal_dynamics(m, times);
        REQUIRE(tr.traces.size() == 1);
        for (const auto& z : tr.traces[0]) {
            CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(z.imag()) <= 1e-14);
        }
    }
    // lambda = 0.5: the trace halves each day
    {
        const DmdModel m = synthetic_model({{std::log(0.5), 0.0}}, {{1.0, 0.0}});
        const std::vector<double> times{0.0, 1.0, 2.0, 3.0};
        const TemporalTraces tr = temporal_dynamics(m, times);
        for (std::size_t t = 0; t < times.size(); ++t)
            CHECK(tr.traces[0][t].real() ==
                  doctest::Approx(std::pow(0.5, times[t])).epsilon(1e-12));
    }
}

TEST_CASE("combined real trace of a damped 19-day cycle matches the closed form") {
    std::vector<CycleSpec> specs;
    auto pair = quadrature_pair(19.0, -4e-3, 1.0, 0.7, testutil::unit_loading(6, 11),
                                testutil::unit_loading(6, 12));
    specs.push_back(pair[0]);
    specs.push_back(pair[1]);
    const Panel p = gen_planted_cycles(specs, 256, 0.0, 0);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(2));
    const ModeReport report = mode_report(model);
    REQUIRE(report.rows.size() == 1);

    std::vector<double> times;
    for (int t = 0; t < 64; ++t) times.push_back(double(t));
    const auto trace = real_mode_trace(model, report.rows[0], times);

    const DmdMode& m = model.modes[std::size_t(report.rows[0].model_index)];
    const double mag = std::abs(m.eigenvalue);
    const double ang = std::arg(m.eigenvalue.imag() >= 0 ? m.eigenvalue
                                                         : std::conj(m.eigenvalue));
    for (std::size_t t = 0; t < times.size(); ++t) {
        const double closed = 2.0 * std::abs(m.amplitude) * std::pow(mag, times[t]) *
                              std::cos(ang * times[t] + std::arg(m.amplitude));
        CHECK(std::abs(trace[t] - closed) < 1e-8);
    }
    // the fitted cycle matches the planted one
    CHECK(report.rows[0].daily_frequency == doctest::Approx(1.0 / 19.0).epsilon(1e-10));
    CHECK(mag == doctest::Approx(std::exp(-4e-3)).epsilon(1e-10));
}

TEST_CASE("full-rank reconstruction of a linear-system panel") {
    // well-conditioned planted operator: orthogonal conjugation of
    // rotation-scaling blocks
    const std::size_t n = 6;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    const double rhos[3] = {1.01, 0.97, 0.97};
    const double thetas[3] = {0.05, 0.4, 1.1};
    for (std::size_t blk = 0; blk < 3; ++blk) {
        const auto rot = scaled_rotation(thetas[blk], rhos[blk]);
        a[2 * blk][2 * blk] = rot[0][0];
        a[2 * blk][2 * blk + 1] = rot[0][1];
        a[2 * blk + 1][2 * blk] = rot[1][0];
        a[2 * blk + 1][2 * blk + 1] = rot[1][1];
    }
    const auto x0 = testutil::random_series(n, 77);
    const Panel p = gen_linear_system(a, x0, 100);

    const DmdModel model = fit_dmd(p, RankSpec::fixed(int(n)));
    std::vector<std::int64_t> offsets(p.length());
    for (std::size_t t = 0; t < p.length(); ++t) offsets[t] = std::int64_t(t);
    const Panel rec = reconstruct(model, offsets);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < p.length(); ++t)
            err += (rec.values[i][t] - p.values[i][t]) * (rec.values[i][t] - p.values[i][t]);
    CHECK(std::sqrt(err) / frobenius(p) < 1e-6);

    // one-step operator consistency on the shifted snapshots
    std::vector<std::int64_t> shifted(offsets.begin() + 1, offsets.end());
    const Panel rec2 = reconstruct(model, shifted);
    double err2 = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 1; t < p.length(); ++t) {
            const double d = rec2.values[i][t - 1] - p.values[i][t];
            err2 += d * d;
            norm2 += p.values[i][t] * p.values[i][t];
        }
    CHECK(std::sqrt(err2 / norm2) < 1e-8);
}

TEST_CASE("rank-1 truncation of rank-1 data is exact") {
    const Panel p = gen_linear_system({{0.9, 0.0}, {0.0, 0.9}},
                                      std::vector<double>{3.0, 1.5}, 40);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(1)); // data is rank 1
    std::vector<std::int64_t> offsets;
    for (int t = 0; t < 40; ++t) offsets.push_back(t);
    const Panel rec = reconstruct(model, offsets);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t t = 0; t < 40; ++t)
            CHECK(std::abs(rec.values[i][t] - p.values[i][t]) < 1e-8);
}

TEST_CASE("rank 0 reconstructs the zero panel") {
    const Panel p = constant_panel(3, 16, 1.0);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(0));
    CHECK(model.rank == 0);
    CHECK(model.svd_energy == 0.0);
    const std::vector<std::int64_t> offsets{0, 1, 2, 3};
    const Panel rec = reconstruct(model, offsets);
    for (const auto& row : rec.values)
        for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("spectrum of real data closes under conjugation") {
    std::vector<CycleSpec> specs;
    std::uint64_t seed = 500;
    for (double period : {9.0, 23.0}) {
        auto pair = quadrature_pair(period, -2e-3, 1.0, 0.2, testutil::unit_loading(8, seed++),
                                    testutil::unit_loading(8, seed++));
        specs.push_back(pair[0]);
        specs.push_back(pair[1]);
    }
    const Panel p = gen_planted_cycles(specs, 400, 1e-5, 321);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(4));

    for (const auto& m : model.modes) {
        if (m.eigenvalue.imag() == 0.0) continue;
        bool found = false;
        for (const auto& other : model.modes) {
            if (std::abs(other.eigenvalue - std::conj(m.eigenvalue)) > 1e-10) continue;
            if (std::abs(other.amplitude - std::conj(m.amplitude)) > 1e-10) continue;
            double shape_diff = 0.0;
            for (std::size_t k = 0; k < m.shape.size(); ++k)
                shape_diff = std::max(shape_diff,
                                      std::abs(other.shape[k] - std::conj(m.shape[k])));
            if (shape_diff < 1e-10) found = true;
        }
        CHECK(found);
    }

    // summed complex contributions stay real
    for (std::size_t t = 0; t < 50; ++t) {
        for (std::size_t i = 0; i < p.series_count(); ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (const auto& m : model.modes)
                acc += m.amplitude * std::exp(m.omega * double(t)) * m.shape[i];
            CHECK(std::abs(acc.imag()) < 1e-9);
        }
    }
}

TEST_CASE("power ranking is invariant under panel scaling") {
    std::vector<CycleSpec> specs;
    std::uint64_t seed = 900;
    const double amps[3] = {3.0, 2.0, 1.2};
    int k = 0;
    for (double period : {7.0, 16.0, 40.0}) {
        auto pair = quadrature_pair(period, -1e-3, amps[k++], 0.0,
                                    testutil::unit_loading(8, seed++),
                                    testutil::unit_loading(8, seed++));
        specs.push_back(pair[0]);
        specs.push_back(pair[1]);
    }
    const Panel base = gen_planted_cycles(specs, 300, 1e-6, 8);

    std::vector<double> reference;
    for (double c : {0.1, 1.0, 10.0}) {
        Panel scaled = base;
        for (auto& row : scaled.values)
            for (double& v : row) v *= c;
        const ModeReport report = mode_report(fit_dmd(scaled, RankSpec::fixed(6)));
        std::vector<double> freqs;
        for (const auto& row : report.rows) freqs.push_back(row.daily_frequency);
        if (reference.empty()) {
            reference = freqs;
            // strongest planted amplitude first
            CHECK(freqs[0] == doctest::Approx(1.0 / 7.0).epsilon(1e-6));
            CHECK(freqs[2] == doctest::Approx(1.0 / 40.0).epsilon(1e-6));
        } else {
            REQUIRE(freqs.size() == reference.size());
            for (std::size_t i = 0; i < freqs.size(); ++i)
                CHECK(std::abs(freqs[i] - reference[i]) < 1e-9);
        }
    }
}

TEST_CASE("phase_magnitude reports element-wise polar coordinates") {
    DmdModel m = synthetic_model({{0.0, 0.1}}, {{1.0, 0.0}});
    m.series_ids = {"a", "b", "c"};
    m.modes[0].shape = {{0.5, 0.0}, {-3.0, 0.0}, {0.0, 2.0}};
    const auto pm = phase_magnitude(m, 0);
    REQUIRE(pm.size() == 3);
    CHECK(pm[0].magnitude == doctest::Approx(0.5));
    CHECK(pm[0].phase == 0.0);
    CHECK(pm[1].magnitude == doctest::Approx(3.0));
    CHECK(pm[1].phase == doctest::Approx(pi)); // (-pi, pi] convention
    CHECK(pm[2].phase == doctest::Approx(pi / 2.0));
    CHECK(pm[0].series_id == "a");
    CHECK_THROWS_AS(phase_magnitude(m, 5), ValidationError);
}

TEST_CASE("a quarter-period lag shows up as a pi/2 phase difference") {
    const double period = 24.0;
    Panel p;
    p.dt = 1.0;
    p.series_ids = {"lead", "lag"};
    const std::size_t t_count = 240;
    p.times.resize(t_count);
    p.values.assign(2, std::vector<double>(t_count, 0.0));
    for (std::size_t t = 0; t < t_count; ++t) {
        p.times[t] = std::int64_t(t);
        const double arg = 2.0 * pi * double(t) / period;
        p.values[0][t] = std::cos(arg);
        p.values[1][t] = std::cos(arg - pi / 2.0); // lags by period/4
    }
    const DmdModel model = fit_dmd(p, RankSpec::fixed(2));
    int rep = -1;
    for (std::size_t i = 0; i < model.modes.size(); ++i)
        if (model.modes[i].eigenvalue.imag() > 0.0) rep = int(i);
    REQUIRE(rep >= 0);
    const auto pm = phase_magnitude(model, rep);
    double diff = pm[0].phase - pm[1].phase;
    while (diff > pi) diff -= 2.0 * pi;
    while (diff <= -pi) diff += 2.0 * pi;
    CHECK(std::abs(std::abs(diff) - pi / 2.0) < 1e-6);
}

TEST_CASE("fit preconditions and rank failures") {
    const Panel p = constant_panel(3, 2, 1.0);
    CHECK_THROWS_AS(fit_dmd(p, RankSpec::fixed(1)), ValidationError); // T < 3

    const Panel q = constant_panel(3, 16, 1.0);
    CHECK_THROWS_AS(fit_dmd(q, RankSpec::fixed(7)), ValidationError); // r > min(N, T-1)
    CHECK_THROWS_AS(fit_dmd(q, RankSpec::fixed(3)), NumericError);    // rank-1 data
    try {
        fit_dmd(q, RankSpec::fixed(3));
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("rank") != std::string::npos);
    }
}

TEST_CASE("a negative real eigenvalue lands on the Nyquist frequency, flagged") {
    const Panel p = gen_linear_system({{-0.9, 0.0}, {0.0, 0.5}},
                                      std::vector<double>{1.0, 1.0}, 40);
    const DmdModel model = fit_dmd(p, RankSpec::fixed(2));
    bool saw_nyquist = false;
    for (const auto& m : model.modes) {
        if (std::abs(m.eigenvalue - std::complex<double>(-0.9, 0.0)) < 1e-10) {
            CHECK(m.at_nyquist);
            CHECK(std::abs(m.omega.imag()) == doctest::Approx(pi).epsilon(1e-12));
            saw_nyquist = true;
        }
    }
    CHECK(saw_nyquist);
    const ModeReport report = mode_report(model);
    for (const auto& row : report.rows)
        if (row.at_nyquist) CHECK(row.daily_frequency == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero eigenvalues are excluded as decayed-in-one-step") {
    DmdModel m = synthetic_model({{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.0}, {2.0, 0.0}});
    m.modes[1].eigenvalue = {0.0, 0.0};
    m.modes[1].decayed_one_step = true;

    const ModeReport report = mode_report(m);
    CHECK(report.rows.size() == 1);
    CHECK(report.decayed_excluded == 1);

    const std::vector<double> times{0.0, 1.0};
    const TemporalTraces tr = temporal_dynamics(m, times);
    CHECK(tr.traces.size() == 1);
    CHECK(tr.decayed_excluded == 1);
    CHECK_THROWS_AS(real_mode_trace(m, ModeRow{0, 1.0, 0.0, std::nullopt, 0.0, 1, false},
                                    times),
                    ValidationError);
}
