#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "tofcorr/model.hpp"

namespace tofcorr {

// Ballistic time-of-flight parameters. After expansion every site shares one
// envelope |w(x,t)| and differs only by the quadratic phase
// exp(i m (x - x_j)^2 / (2 hbar t)); the envelope here is a normalized
// Gaussian of width sigma centered on the lattice center (M+1)d/2.
struct ExpansionContext {
  double mass = 1.0;
  double time = 1.0;
  double hbar = 1.0;
  double spacing = 1.0;  // d, copied from the lattice
  int sites = 2;         // M, sets the envelope center and the regime check
  double sigma = 0.0;    // envelope width; <= 0 means the 20*M*d default

  static ExpansionContext for_lattice(const LatticeSpec& spec, double time = 1.0,
                                      double mass = 1.0, double hbar = 1.0,
                                      double sigma = 0.0);

  void validate() const;
  double quad_phase_coeff() const { return mass / (2.0 * hbar * time); }
  double center() const { return 0.5 * (sites + 1) * spacing; }
  double site_position(int site_1based) const { return site_1based * spacing; }
};

// Q = m d / (hbar t); fringe spacing 2*pi/Q.
double fringe_wavevector(const ExpansionContext& ctx);

// True when sigma >= 5 M d, the regime where the common-envelope closed
// forms hold. Callers that build profiles warn (never silently) below it.
bool envelope_regime_ok(const ExpansionContext& ctx);

// |w(x,t)|: Gaussian amplitude, normalized so the integral of |w|^2 is 1.
double envelope_amplitude(const ExpansionContext& ctx, double x);

// w_j(x,t) = |w(x,t)| exp(i m (x - x_j)^2 / (2 hbar t)), site index 1-based.
std::complex<double> wannier_evolved(const ExpansionContext& ctx, int site, double x);

// n(x) = N |sum_j sqrt(xi_j) e^{i phi_j} w_j(x,t)|^2
double density_coherent(const CoherentSpec& c, int n_atoms, const ExpansionContext& ctx,
                        double x);
void density_coherent_grid(const CoherentSpec& c, int n_atoms, const ExpansionContext& ctx,
                           std::span<const double> x, std::span<double> out);

// Standard average for a Fock state: sum_j k_j |w_j(x,t)|^2.
// site_weights is a test hook scaling each site's envelope weight.
double density_fock_trace(const FockConfig& k, const ExpansionContext& ctx, double x,
                          std::span<const double> site_weights = {});

// Coherent-state-measure average: N/(N+M) sum_j (k_j + 1) |w_j(x,t)|^2.
// Identical to the trace profile under the common envelope.
double density_fock_povm(const FockConfig& k, const ExpansionContext& ctx, double x,
                         std::span<const double> site_weights = {});

struct DensityProfile {
  std::vector<double> x;
  std::vector<double> value;
  std::string prescription;  // "trace" | "povm"
  std::string state;         // "fock" | "coherent"
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

// Grid spanning the envelope center +- 6 sigma.
std::vector<double> default_density_grid(const ExpansionContext& ctx,
                                         std::size_t points = std::size_t{1} << 14);

DensityProfile density_profile_fock(const FockConfig& k, const ExpansionContext& ctx,
                                    std::span<const double> grid, bool povm);
DensityProfile density_profile_coherent(const CoherentSpec& c, int n_atoms,
                                        const ExpansionContext& ctx,
                                        std::span<const double> grid);

// Composite trapezoid on a uniform grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace tofcorr
