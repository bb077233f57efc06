#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tofcorr/expansion.hpp"
#include "tofcorr/model.hpp"

namespace tofcorr {

// Integrated, normalized density-density correlation sampled in the
// dimensionless phase u = Q r. Values are real and even in u by construction.
struct CorrelationCurve {
  std::vector<double> u;
  std::vector<double> value;
  std::string prescription;  // "trace" | "povm"
};

// sum_{i != j} c_i c_j e^{i(i-j)u} with c = k (or k+1 when shifted),
// evaluated as |sum_j c_j e^{iju}|^2 - sum_j c_j^2. Real by symmetry.
double occupation_cross_sum(const FockConfig& k, double u, bool shifted);

// Standard-average closed form:
// (N(N-1)/N^2) { 1 + [sum_{i!=j} k_i k_j e^{i(i-j)u}] / (N(N-1)) }.
double corr_closed_trace(const FockConfig& k, double u);

// Coherent-state-measure closed form:
// (N(N-1)/N^2) { 1 + [sum_{i!=j} (k_i+1)(k_j+1) e^{i(i-j)u}] / ((N+M)(N+M+1)) }.
// The (N+M)(N+M+1) normalization is the exact second moment of the simplex
// measure: the average of xi_i xi_j against the weight |<k|xi,phi>|^2 is
// (k_i+1)(k_j+1) / ((N+M)(N+M+1)).
double corr_closed_povm(const FockConfig& k, double u);

// Balanced filling k_j = N/M, with the u -> 2 pi p limit of the sine ratio
// handled analytically. Requires M | N.
double corr_balanced(int n_atoms, int sites, double u);

// Kernel-backed evaluation over a u grid.
CorrelationCurve eval_curve(const FockConfig& k, std::span<const double> u, bool povm);

// Pre-asymptotic single-particle packet: Gaussian of width sigma centered on
// its own site, with the ballistic quadratic phase. This is what the common
// envelope approximates once sigma >> M d; the quadrature oracles use it so
// that agreement with the closed forms is a genuine limit, not an identity.
std::complex<double> wannier_ballistic(const ExpansionContext& ctx, int site, double x);

// <k| psi^+(x) psi^+(x') psi(x) psi(x') |k> by applying the field operator
// twice and summing squared amplitudes over the reduced Fock basis.
// Brute force; refuses instances beyond N <= 6, M <= 4.
double two_point_fock_oracle(const FockConfig& k, const ExpansionContext& ctx, double x,
                             double xp);

// Integrates the two-point oracle over the barycenter R at fixed separation
// r and divides by the integrated density product. Converges to
// corr_closed_trace(k, Q r) as sigma grows.
double integrated_oracle_trace(const FockConfig& k, const ExpansionContext& ctx, double r);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

enum class McObservable {
  unit,              // resolution-of-unity check; estimates total weight
  density,           // density at x = arg
  pair_correlation,  // integrated pair correlation at separation r = arg
};

// Monte Carlo average over coherent-state configurations: xi uniform on the
// simplex (exponential spacings), phases uniform with the last one pinned,
// each sample importance-weighted by the state overlap times the measure
// constant. Refuses instances beyond M <= 3 (N <= 6 for Fock states).
McEstimate povm_mc_oracle(const FockConfig& k, const ExpansionContext& ctx, McObservable obs,
                          double arg, long long samples, std::uint64_t seed);

// Same machinery for a coherent initial state (density observable trend).
McEstimate povm_mc_oracle(const CoherentSpec& rho, int n_atoms, const ExpansionContext& ctx,
                          McObservable obs, double arg, long long samples, std::uint64_t seed);

// (N+M-1)!/N! * N!/k! * (prod_j k_j!)/(N+M-1)! - 1, log space. Zero when the
// coherent-state resolution of unity holds.
double completeness_residual(const FockConfig& k);

}  // namespace tofcorr
