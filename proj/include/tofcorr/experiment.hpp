#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tofcorr/anneal.hpp"
#include "tofcorr/correlations.hpp"
#include "tofcorr/model.hpp"

namespace tofcorr {

inline constexpr const char* kVersion = "0.1.0";

struct Peak {
  double u = 0.0;
  double height = 0.0;  // value - 1
};

struct PeakReport {
  std::vector<Peak> main_peaks;       // near u = 2 pi p, p >= 1
  std::vector<Peak> secondary_peaks;  // every other local maximum above threshold
  double threshold = 1e-3;
  std::size_t grid_points = 0;

  double max_secondary_height() const;
};

// A peak is an interior grid point strictly above both neighbours with
// value - 1 > threshold; main when |u - 2 pi p| < pi/M for some p >= 1.
// The grid must be uniformly spaced.
PeakReport find_peaks(const CorrelationCurve& curve, double threshold, int sites);

// u_i = i * u_max / points for i = 1..points: starts one step in (the u = 0
// self-peak is excluded) and ends at u_max.
std::vector<double> default_u_grid(std::size_t points = 4096,
                                   double u_max = 6.0 * 3.14159265358979323846);

struct Figure1Result {
  AnnealResult ground;
  CorrelationCurve trace_curve;
  CorrelationCurve povm_curve;
  PeakReport trace_peaks;
  PeakReport povm_peaks;
};

// Anneal one configuration, evaluate both prescriptions on the grid, report
// peaks.
Figure1Result run_figure1(const LatticeSpec& spec, int n_atoms, const AnnealSchedule& sched,
                          std::span<const double> u_grid, double threshold);

struct SweepRow {
  double v2 = 0.0;
  double secondary_trace = 0.0;
  double secondary_povm = 0.0;
  double energy = 0.0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string note;
};

// One annealed row per V2 value (must be ascending). Rows run on up to
// `workers` threads, each with a seed derived from (base_seed, index); the
// output order always matches the input order, and a failed row is marked
// rather than aborting the sweep.
std::vector<SweepRow> sweep_v2(const LatticeSpec& base, std::span<const double> v2_list,
                               int n_atoms, const AnnealSchedule& sched,
                               std::span<const double> u_grid, double threshold,
                               std::uint64_t base_seed, int workers);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

enum class VerifyLevel { fast, full };

// Cross-validates the closed forms against the independent oracles:
// resolution-of-unity (exhaustive and Monte Carlo), annealer vs exhaustive
// minimization, quadrature vs closed trace form, Monte Carlo vs the closed
// coherent-measure forms, and the corrupted-normalization sensitivity checks.
VerifyReport verify(VerifyLevel level);

}  // namespace tofcorr
