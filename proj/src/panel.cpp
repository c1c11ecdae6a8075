#include "wavemode/panel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wavemode/errors.hpp"

namespace wavemode {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    // tolerate trailing carriage return from CRLF files
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// Missing cells parse to NaN; malformed text throws.
double parse_value(const std::string& raw, std::size_t line_no) {
    std::string cell = trim(raw);
    if (cell.empty()) return kNaN;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ValidationError("line " + std::to_string(line_no) + ": cannot parse value '" + cell + "'");
    return v;
}

bool parse_iso_date(const std::string& cell, std::int64_t& day_index) {
    // YYYY-MM-DD
    if (cell.size() != 10 || cell[4] != '-' || cell[7] != '-') return false;
    int y = 0, m = 0, d = 0;
    auto num = [](const char* a, const char* b, int& out) {
        auto [p, ec] = std::from_chars(a, b, out);
        return ec == std::errc{} && p == b;
    };
    const char* s = cell.data();
    if (!num(s, s + 4, y) || !num(s + 5, s + 7, m) || !num(s + 8, s + 10, d)) return false;
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) return false;
    day_index = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return true;
}

std::int64_t parse_time(const std::string& raw, std::size_t line_no) {
    std::string cell = trim(raw);
    std::int64_t day = 0;
    if (parse_iso_date(cell, day)) return day;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), day);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ValidationError("line " + std::to_string(line_no) +
                              ": expected ISO-8601 date or integer day index, got '" + cell + "'");
    return day;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

void Panel::validate() const {
    if (series_ids.size() != values.size())
        throw ValidationError("panel: series_ids and values disagree on series count");
    const std::size_t t = times.size();
    if (t < 2) throw ValidationError("panel: need at least 2 observations");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != t)
            throw ValidationError("panel: series '" + series_ids[i] + "' has " +
                                  std::to_string(values[i].size()) + " values, expected " +
                                  std::to_string(t));
        for (double v : values[i])
            if (!std::isfinite(v))
                throw ValidationError("panel: non-finite value in series '" + series_ids[i] + "'");
    }
    const std::int64_t step = times[1] - times[0];
    if (step <= 0) throw ValidationError("panel: times must be strictly increasing");
    for (std::size_t k = 1; k < t; ++k)
        if (times[k] - times[k - 1] != step)
            throw ValidationError("panel: non-uniform spacing between t=" +
                                  std::to_string(times[k - 1]) + " and t=" + std::to_string(times[k]));
    if (dt != double(step))
        throw ValidationError("panel: dt does not match time spacing");
}

Panel load_panel(std::istream& in, const IngestConfig& config) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty input");
    const auto header = split_csv_line(line);
    if (header.empty() || trim(header[0]) != config.date_column)
        throw ValidationError("header must start with date column '" + config.date_column + "'");
    if (header.size() < 2) throw ValidationError("header names no series");

    Panel panel;
    for (std::size_t i = 1; i < header.size(); ++i) {
        std::string id = trim(header[i]);
        if (id.empty()) throw ValidationError("empty series id in header");
        panel.series_ids.push_back(id);
    }
    const std::size_t n = panel.series_ids.size();
    panel.values.assign(n, {});

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != n + 1)
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(n + 1) + " fields, got " +
                                  std::to_string(fields.size()));
        panel.times.push_back(parse_time(fields[0], line_no));
        for (std::size_t i = 0; i < n; ++i) {
            double v = parse_value(fields[i + 1], line_no);
            if (!std::isfinite(v)) {
                if (config.missing == MissingPolicy::reject)
                    throw ValidationError("line " + std::to_string(line_no) +
                                          ": missing or non-finite value in series '" +
                                          panel.series_ids[i] + "'");
                if (panel.values[i].empty())
                    throw ValidationError("line " + std::to_string(line_no) + ": series '" +
                                          panel.series_ids[i] +
                                          "' starts with a missing value; cannot forward-fill");
                v = panel.values[i].back();
            }
            panel.values[i].push_back(v);
        }
    }
    if (panel.times.size() < 2) throw ValidationError("panel needs at least 2 rows");
    panel.dt = double(panel.times[1] - panel.times[0]);
    panel.validate();
    return panel;
}

Panel load_panel_file(const std::string& path, const IngestConfig& config) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return load_panel(in, config);
}

void save_panel(const Panel& panel, std::ostream& out) {
    out << "date";
    for (const auto& id : panel.series_ids) out << ',' << id;
    out << '\n';
    for (std::size_t t = 0; t < panel.length(); ++t) {
        out << panel.times[t];
        for (std::size_t i = 0; i < panel.series_count(); ++i)
            out << ',' << format_double(panel.values[i][t]);
        out << '\n';
    }
}

void save_panel_file(const Panel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    save_panel(panel, out);
}

Panel normalize(const Panel& panel, NormalizeMethod method) {
    if (method == NormalizeMethod::none) return panel;
    Panel out = panel;
    for (auto& row : out.values) {
        if (method == NormalizeMethod::minmax) {
            const auto [lo_it, hi_it] = std::minmax_element(row.begin(), row.end());
            const double lo = *lo_it;
            const double range = *hi_it - lo;
            if (range == 0.0) {
                std::fill(row.begin(), row.end(), 0.0);
            } else {
                for (double& v : row) v = (v - lo) / range;
            }
        } else { // zscore, population std
            double mean = 0.0;
            for (double v : row) mean += v;
            mean /= double(row.size());
            double var = 0.0;
            for (double v : row) var += (v - mean) * (v - mean);
            var /= double(row.size());
            const double sd = std::sqrt(var);
            if (sd == 0.0) {
                std::fill(row.begin(), row.end(), 0.0);
            } else {
                for (double& v : row) v = (v - mean) / sd;
            }
        }
    }
    return out;
}

Panel stack_for_plot(const Panel& panel, double gap) {
    if (!(gap > 0.0)) throw ValidationError("stack_for_plot: gap must be > 0");
    Panel out = panel;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        for (double& v : out.values[i]) v += double(i) * gap;
    return out;
}

NormalizeMethod parse_normalize_method(std::string_view name) {
    if (name == "minmax") return NormalizeMethod::minmax;
    if (name == "zscore") return NormalizeMethod::zscore;
    if (name == "none") return NormalizeMethod::none;
    throw ValidationError("unknown normalize method '" + std::string(name) +
                          "' (expected minmax, zscore or none)");
}

MissingPolicy parse_missing_policy(std::string_view name) {
    if (name == "reject") return MissingPolicy::reject;
    if (name == "forward-fill" || name == "forward_fill") return MissingPolicy::forward_fill;
    throw ValidationError("unknown missing policy '" + std::string(name) +
                          "' (expected reject or forward-fill)");
}

std::string to_string(NormalizeMethod method) {
    switch (method) {
        case NormalizeMethod::minmax: return "minmax";
        case NormalizeMethod::zscore: return "zscore";
        case NormalizeMethod::none: return "none";
    }
    return "?";
}

std::string to_string(MissingPolicy policy) {
    return policy == MissingPolicy::reject ? "reject" : "forward-fill";
}

} // namespace wavemode
