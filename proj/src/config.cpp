#include "wavemode/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wavemode/errors.hpp"
#include "wavemode/report.hpp"

namespace wavemode {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("config line " + std::to_string(line) + ": expected boolean, got '" +
                          v + "'");
}

double parse_double(const std::string& v, std::size_t line) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ValidationError("config line " + std::to_string(line) + ": expected number, got '" +
                              v + "'");
    return out;
}

template <typename Int>
Int parse_int(const std::string& v, std::size_t line) {
    Int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ValidationError("config line " + std::to_string(line) +
                              ": expected integer, got '" + v + "'");
    return out;
}

} // namespace

LevelRange parse_level_range(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("level range must look like lo:hi, got '" + std::string(text) + "'");
    LevelRange r;
    const std::string lo(text.substr(0, colon)), hi(text.substr(colon + 1));
    auto [p1, e1] = std::from_chars(lo.data(), lo.data() + lo.size(), r.lo);
    auto [p2, e2] = std::from_chars(hi.data(), hi.data() + hi.size(), r.hi);
    if (e1 != std::errc{} || p1 != lo.data() + lo.size() || e2 != std::errc{} ||
        p2 != hi.data() + hi.size() || r.lo > r.hi)
        throw ValidationError("bad level range '" + std::string(text) + "'");
    return r;
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section != "input" && section != "stats" && section != "wavelet" &&
                section != "mfspectrum" && section != "dmd" && section != "output")
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "input.path") cfg.input_path = value;
        else if (qual == "input.normalize") cfg.normalize = parse_normalize_method(value);
        else if (qual == "input.missing") cfg.missing = parse_missing_policy(value);
        else if (qual == "stats.enabled") cfg.stats_enabled = parse_bool(value, line_no);
        else if (qual == "stats.alpha") cfg.jb_alpha = parse_double(value, line_no);
        else if (qual == "wavelet.enabled") cfg.wavelet_enabled = parse_bool(value, line_no);
        else if (qual == "wavelet.filter") cfg.filter = value;
        else if (qual == "wavelet.levels") cfg.levels = parse_int<int>(value, line_no);
        else if (qual == "wavelet.pad") cfg.pad = parse_bool(value, line_no);
        else if (qual == "mfspectrum.enabled") cfg.mf_enabled = parse_bool(value, line_no);
        else if (qual == "mfspectrum.pmin") cfg.p_min = parse_double(value, line_no);
        else if (qual == "mfspectrum.pmax") cfg.p_max = parse_double(value, line_no);
        else if (qual == "mfspectrum.pstep") cfg.p_step = parse_double(value, line_no);
        else if (qual == "mfspectrum.alpha_min") cfg.alpha_min = parse_double(value, line_no);
        else if (qual == "mfspectrum.alpha_max") cfg.alpha_max = parse_double(value, line_no);
        else if (qual == "mfspectrum.alpha_step") cfg.alpha_step = parse_double(value, line_no);
        else if (qual == "mfspectrum.fit_levels") cfg.fit_levels = parse_level_range(value);
        else if (qual == "mfspectrum.series") cfg.mf_series = value;
        else if (qual == "dmd.enabled") cfg.dmd_enabled = parse_bool(value, line_no);
        else if (qual == "dmd.rank") cfg.rank = parse_int<int>(value, line_no);
        else if (qual == "dmd.energy") cfg.energy = parse_double(value, line_no);
        else if (qual == "dmd.top") cfg.top_k = parse_int<int>(value, line_no);
        else if (qual == "dmd.power") {
            if (value == "amp2") cfg.power = PowerConvention::amplitude_squared;
            else if (value == "amp") cfg.power = PowerConvention::amplitude;
            else
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": dmd.power must be amp2 or amp");
        }
        else if (qual == "output.dir") cfg.out_dir = value;
        else if (qual == "output.seed") cfg.seed = parse_int<std::uint64_t>(value, line_no);
        else
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  qual + "'");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    return parse_config(in);
}

void RunConfig::validate() const {
    if (input_path.empty()) throw ValidationError("config: input.path is required");
    if (out_dir.empty()) throw ValidationError("config: output.dir must not be empty");
    if (!(jb_alpha > 0.0 && jb_alpha < 1.0))
        throw ValidationError("config: stats.alpha must lie in (0, 1)");
    if (wavelet_enabled || mf_enabled) {
        FilterPair::from_name(filter); // throws on unknown name
        if (levels < 1) throw ValidationError("config: wavelet.levels must be >= 1");
    }
    if (mf_enabled) {
        if (!(p_step > 0.0) || !(alpha_step > 0.0))
            throw ValidationError("config: mfspectrum grid steps must be > 0");
        if (p_min && p_max && *p_min > *p_max)
            throw ValidationError("config: mfspectrum.pmin exceeds pmax");
        if (alpha_min > alpha_max)
            throw ValidationError("config: mfspectrum.alpha_min exceeds alpha_max");
        if (fit_levels && (fit_levels->lo < 1 || fit_levels->hi > levels))
            throw ValidationError("config: mfspectrum.fit_levels outside 1.." +
                                  std::to_string(levels));
    }
    if (dmd_enabled) {
        if (rank && *rank < 0) throw ValidationError("config: dmd.rank must be >= 0");
        if (!(energy > 0.0) || energy > 1.0)
            throw ValidationError("config: dmd.energy must lie in (0, 1]");
        if (top_k < 0) throw ValidationError("config: dmd.top must be >= 0");
    }
}

std::string RunConfig::canonical_text() const {
    std::ostringstream os;
    os << "[input]\npath = " << input_path << "\nnormalize = " << to_string(normalize)
       << "\nmissing = " << to_string(missing) << "\n";
    os << "[stats]\nenabled = " << (stats_enabled ? "true" : "false")
       << "\nalpha = " << format_full(jb_alpha) << "\n";
    os << "[wavelet]\nenabled = " << (wavelet_enabled ? "true" : "false")
       << "\nfilter = " << filter << "\nlevels = " << levels
       << "\npad = " << (pad ? "true" : "false") << "\n";
    os << "[mfspectrum]\nenabled = " << (mf_enabled ? "true" : "false");
    if (p_min) os << "\npmin = " << format_full(*p_min);
    if (p_max) os << "\npmax = " << format_full(*p_max);
    os << "\npstep = " << format_full(p_step) << "\nalpha_min = " << format_full(alpha_min)
       << "\nalpha_max = " << format_full(alpha_max)
       << "\nalpha_step = " << format_full(alpha_step);
    if (fit_levels) os << "\nfit_levels = " << fit_levels->lo << ':' << fit_levels->hi;
    if (!mf_series.empty()) os << "\nseries = " << mf_series;
    os << "\n[dmd]\nenabled = " << (dmd_enabled ? "true" : "false");
    if (rank) os << "\nrank = " << *rank;
    os << "\nenergy = " << format_full(energy) << "\ntop = " << top_k << "\npower = "
       << (power == PowerConvention::amplitude_squared ? "amp2" : "amp");
    // output.dir is deliberately absent: the hash identifies the analysis,
    // not where its files land
    os << "\n[output]\nseed = " << seed << "\n";
    return os.str();
}

} // namespace wavemode
