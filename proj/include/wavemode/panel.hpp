#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavemode {

/// A set of N time series sampled on one uniform daily grid.
///
/// Invariants (enforced by validate()):
///   - every row of `values` has the same length T >= 2,
///   - `times` is strictly increasing with constant spacing `dt`,
///   - all values are finite.
///
/// Panels are immutable by convention once constructed; every operation
/// returns a new Panel, so concurrent reads are safe.
struct Panel {
    std::vector<std::string> series_ids;
    std::vector<std::int64_t> times;              // day indices
    std::vector<std::vector<double>> values;      // [series][time]
    double dt = 1.0;                              // sampling interval in days

    [[nodiscard]] std::size_t series_count() const { return values.size(); }
    [[nodiscard]] std::size_t length() const { return times.size(); }
    [[nodiscard]] std::span<const double> series(std::size_t i) const { return values.at(i); }

    /// Throws ValidationError if any invariant is violated.
    void validate() const;
};

enum class MissingPolicy { reject, forward_fill };
enum class NormalizeMethod { minmax, zscore, none };

struct IngestConfig {
    std::string date_column = "date";
    MissingPolicy missing = MissingPolicy::reject;
};

/// Parse a delimited-text panel.
///
/// Expected format: UTF-8, comma-delimited, header `date,<id1>,...,<idN>`,
/// dates as ISO-8601 (YYYY-MM-DD) or integer day indices, decimal point `.`,
/// no thousands separators. Ragged rows, non-monotonic or non-uniform dates,
/// and (under the reject policy) missing/non-finite cells raise
/// ValidationError with the offending line number.
Panel load_panel(std::istream& in, const IngestConfig& config = {});
Panel load_panel_file(const std::string& path, const IngestConfig& config = {});

/// Write a panel in the same CSV contract, full precision (shortest
/// round-trip decimal), so load -> save -> load is bit-identical.
void save_panel(const Panel& panel, std::ostream& out);
void save_panel_file(const Panel& panel, const std::string& path);

/// Per-series normalization. minmax maps each series onto [0,1]; zscore
/// to mean 0 and population std 1; none is the identity. Constant series
/// map to all zeros under both minmax and zscore.
Panel normalize(const Panel& panel, NormalizeMethod method);

/// Offset series i by i*gap, for stacked plot-data export. gap must be > 0.
Panel stack_for_plot(const Panel& panel, double gap);

NormalizeMethod parse_normalize_method(std::string_view name);
MissingPolicy parse_missing_policy(std::string_view name);
std::string to_string(NormalizeMethod method);
std::string to_string(MissingPolicy policy);

} // namespace wavemode
