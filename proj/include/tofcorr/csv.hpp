#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tofcorr/correlations.hpp"
#include "tofcorr/expansion.hpp"
#include "tofcorr/experiment.hpp"

namespace tofcorr {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Deterministic number formatting shared by every writer, so identical runs
// produce byte-identical files.
std::string format_number(double v);

// '# key = value' comment block, then 'u,value' rows.
void write_curve_csv(const std::string& path, const CorrelationCurve& curve,
                     const KeyValues& params);

// '# ...' comments, then 'x,value' rows.
void write_density_csv(const std::string& path, const DensityProfile& profile,
                       const KeyValues& params);

// 'V2,secondary_trace,secondary_povm,energy,seed,status' rows.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     const KeyValues& params);

// Peak lists as a key-value report.
void write_peaks_report(const std::string& path, const PeakReport& report,
                        const KeyValues& params);

// Flat key = value sidecar recording every parameter of a run.
void write_manifest(const std::string& path, const KeyValues& params);

}  // namespace tofcorr
