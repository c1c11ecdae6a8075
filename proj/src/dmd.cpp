#include "wavemode/dmd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavemode/errors.hpp"

namespace wavemode {

namespace {

Eigen::MatrixXd to_matrix(const Panel& panel) {
    Eigen::MatrixXd m(panel.series_count(), panel.length());
    for (std::size_t i = 0; i < panel.series_count(); ++i)
        for (std::size_t t = 0; t < panel.length(); ++t) m(long(i), long(t)) = panel.values[i][t];
    return m;
}

double mode_frequency(const DmdMode& m) {
    if (m.decayed_one_step) return 0.0;
    return std::abs(m.omega.imag()) / (2.0 * std::numbers::pi);
}

} // namespace

DmdModel fit_dmd(const Panel& panel, RankSpec rank) {
    panel.validate();
    const long n = long(panel.series_count());
    const long t = long(panel.length());
    if (t < 3) throw ValidationError("fit_dmd: need at least 3 snapshots");

    const Eigen::MatrixXd x = to_matrix(panel);
    const Eigen::MatrixXd x1 = x.leftCols(t - 1);
    const Eigen::MatrixXd x2 = x.rightCols(t - 1);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sigma = svd.singularValues();
    const double total_energy = sigma.squaredNorm();
    if (total_energy == 0.0) throw NumericError("fit_dmd: zero snapshot matrix");

    const long max_rank = std::min(n, t - 1);
    long r;
    if (rank.rank.has_value()) {
        r = *rank.rank;
        if (r < 0 || r > max_rank)
            throw ValidationError("fit_dmd: rank must lie in [0, min(N, T-1)] = [0, " +
                                  std::to_string(max_rank) + "]");
    } else {
        if (!(rank.energy > 0.0) || rank.energy > 1.0)
            throw ValidationError("fit_dmd: energy threshold must lie in (0, 1]");
        double acc = 0.0;
        r = max_rank;
        for (long i = 0; i < sigma.size(); ++i) {
            acc += sigma(i) * sigma(i);
            if (acc / total_energy >= rank.energy) {
                r = i + 1;
                break;
            }
        }
    }

    // Zero (or numerically vanished) singular values cannot be inverted.
    const double tiny = sigma.size() > 0 ? sigma(0) * 1e-13 : 0.0;
    for (long i = 0; i < r; ++i)
        if (!(sigma(i) > tiny))
            throw NumericError("fit_dmd: singular value " + std::to_string(i + 1) +
                               " vanishes inside the truncation; retry with rank <= " +
                               std::to_string(i));

    DmdModel model;
    model.rank = int(r);
    model.dt = panel.dt;
    model.series_ids = panel.series_ids;
    model.start_time = panel.times.front();
    model.sample_count = panel.length();
    model.svd_energy = r == 0 ? 0.0 : sigma.head(r).squaredNorm() / total_energy;
    if (r == 0) return model;

    const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
    const Eigen::MatrixXd v = svd.matrixV().leftCols(r);
    const Eigen::VectorXd sr = sigma.head(r);
    const Eigen::MatrixXd x2v_sinv = x2 * v * sr.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd a_tilde = u.transpose() * x2v_sinv;

    Eigen::EigenSolver<Eigen::MatrixXd> eig(a_tilde);
    if (eig.info() != Eigen::Success) throw NumericError("fit_dmd: eigendecomposition failed");
    const Eigen::VectorXcd lambda = eig.eigenvalues();
    const Eigen::MatrixXcd w = eig.eigenvectors();

    Eigen::MatrixXcd phi = x2v_sinv.cast<std::complex<double>>() * w;
    for (long i = 0; i < r; ++i) {
        const double norm = phi.col(i).norm();
        if (norm > 0.0) phi.col(i) /= norm;
    }

    // amplitudes: least-squares coordinates of the first snapshot
    const Eigen::VectorXcd b =
        phi.colPivHouseholderQr().solve(x.col(0).cast<std::complex<double>>());

    model.modes.reserve(std::size_t(r));
    for (long i = 0; i < r; ++i) {
        DmdMode m;
        m.eigenvalue = lambda(i);
        m.amplitude = b(i);
        m.shape.resize(std::size_t(n));
        for (long k = 0; k < n; ++k) m.shape[std::size_t(k)] = phi(k, i);
        if (std::abs(m.eigenvalue) == 0.0) {
            m.decayed_one_step = true;
            m.omega = {0.0, 0.0};
        } else {
            m.omega = std::log(m.eigenvalue) / panel.dt; // principal branch
            m.at_nyquist = m.eigenvalue.real() < 0.0 && m.eigenvalue.imag() == 0.0;
        }
        model.modes.push_back(std::move(m));
    }
    return model;
}

ModeReport mode_report(const DmdModel& model, PowerConvention convention) {
    ModeReport report;
    report.convention = convention;
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        const DmdMode& m = model.modes[i];
        if (m.decayed_one_step) {
            ++report.decayed_excluded;
            continue;
        }
        if (m.eigenvalue.imag() < 0.0) continue; // conjugate partner reported once
        ModeRow row;
        row.model_index = int(i);
        const double amp = std::abs(m.amplitude);
        row.power = convention == PowerConvention::amplitude_squared ? amp * amp : amp;
        row.daily_frequency = mode_frequency(m);
        if (row.daily_frequency > 0.0)
            row.duration_days = std::int64_t(std::llround(1.0 / row.daily_frequency));
        row.growth_rate = m.omega.real();
        row.at_nyquist = m.at_nyquist;
        report.rows.push_back(row);
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const ModeRow& a, const ModeRow& b) {
                         if (a.power != b.power) return a.power > b.power;
                         if (a.daily_frequency != b.daily_frequency)
                             return a.daily_frequency < b.daily_frequency;
                         return a.model_index < b.model_index;
                     });
    for (std::size_t i = 0; i < report.rows.size(); ++i) report.rows[i].mode = int(i) + 1;
    return report;
}

TemporalTraces temporal_dynamics(const DmdModel& model, std::span<const double> times) {
    TemporalTraces out;
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        const DmdMode& m = model.modes[i];
        if (m.decayed_one_step) {
            ++out.decayed_excluded;
            continue;
        }
        std::vector<std::complex<double>> trace;
        trace.reserve(times.size());
        for (double t : times) trace.push_back(m.amplitude * std::exp(m.omega * t));
        out.mode_indices.push_back(int(i));
        out.traces.push_back(std::move(trace));
    }
    return out;
}

std::vector<double> real_mode_trace(const DmdModel& model, const ModeRow& row,
                                    std::span<const double> times) {
    const DmdMode& m = model.modes.at(std::size_t(row.model_index));
    if (m.decayed_one_step) throw ValidationError("real_mode_trace: mode decayed in one step");
    const double weight = m.eigenvalue.imag() != 0.0 ? 2.0 : 1.0;
    std::vector<double> trace;
    trace.reserve(times.size());
    for (double t : times) trace.push_back(weight * (m.amplitude * std::exp(m.omega * t)).real());
    return trace;
}

Panel reconstruct(const DmdModel& model, std::span<const std::int64_t> day_offsets) {
    if (day_offsets.size() < 2) throw ValidationError("reconstruct: need at least 2 times");
    Panel p;
    p.series_ids = model.series_ids;
    p.times.assign(day_offsets.begin(), day_offsets.end());
    p.dt = double(day_offsets.size() > 1 ? day_offsets[1] - day_offsets[0] : 1);
    p.values.assign(model.series_ids.size(), std::vector<double>(day_offsets.size(), 0.0));
    for (const DmdMode& m : model.modes) {
        if (m.decayed_one_step) continue;
        for (std::size_t t = 0; t < day_offsets.size(); ++t) {
            const std::complex<double> coeff =
                m.amplitude * std::exp(m.omega * double(day_offsets[t]));
            for (std::size_t i = 0; i < m.shape.size(); ++i)
                p.values[i][t] += (coeff * m.shape[i]).real();
        }
    }
    return p;
}

std::vector<SeriesPhaseMagnitude> phase_magnitude(const DmdModel& model, int mode_index) {
    if (mode_index < 0 || std::size_t(mode_index) >= model.modes.size())
        throw ValidationError("phase_magnitude: mode index out of range");
    const DmdMode& m = model.modes[std::size_t(mode_index)];
    std::vector<SeriesPhaseMagnitude> out;
    out.reserve(m.shape.size());
    for (std::size_t i = 0; i < m.shape.size(); ++i) {
        SeriesPhaseMagnitude e;
        e.series_id = model.series_ids[i];
        e.magnitude = std::abs(m.shape[i]);
        e.phase = std::arg(m.shape[i]);
        if (e.phase == -std::numbers::pi) e.phase = std::numbers::pi; // (-pi, pi]
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace wavemode
