#pragma once

#include <string>

#include "wavemode/config.hpp"
#include "wavemode/report.hpp"

namespace wavemode {

/// Run every enabled stage on the configured input. Descriptive
/// statistics are computed on the raw (unnormalized) panel; wavelet,
/// multifractal and DMD stages on the normalized one. A failure in any
/// stage aborts the run with the stage name prefixed to the error.
AnalysisBundle run_pipeline(const RunConfig& config);

/// run_pipeline followed by emit_bundle into config.out_dir.
/// Returns the manifest path.
std::string run_and_emit(const RunConfig& config);

} // namespace wavemode
