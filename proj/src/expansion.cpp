#include "tofcorr/expansion.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "tofcorr/errors.hpp"
#include "tofcorr/kernels.hpp"

namespace tofcorr {

ExpansionContext ExpansionContext::for_lattice(const LatticeSpec& spec, double time, double mass,
                                               double hbar, double sigma) {
  ExpansionContext ctx;
  ctx.mass = mass;
  ctx.time = time;
  ctx.hbar = hbar;
  ctx.spacing = spec.spacing;
  ctx.sites = spec.sites;
  ctx.sigma = sigma > 0.0 ? sigma : 20.0 * spec.sites * spec.spacing;
  ctx.validate();
  return ctx;
}

void ExpansionContext::validate() const {
  if (!(mass > 0.0 && time > 0.0 && hbar > 0.0 && spacing > 0.0))
    throw input_error("ExpansionContext: mass, time, hbar, spacing must be > 0");
  if (sites < 1) throw input_error("ExpansionContext: sites must be >= 1");
  if (!(sigma > 0.0)) throw input_error("ExpansionContext: sigma must be > 0");
}

double fringe_wavevector(const ExpansionContext& ctx) {
  return ctx.mass * ctx.spacing / (ctx.hbar * ctx.time);
}

bool envelope_regime_ok(const ExpansionContext& ctx) {
  return ctx.sigma >= 5.0 * ctx.sites * ctx.spacing;
}

namespace {

void warn_envelope(const ExpansionContext& ctx) {
  if (!envelope_regime_ok(ctx)) {
    std::cerr << "warning: envelope width sigma=" << ctx.sigma << " is below 5*M*d="
              << 5.0 * ctx.sites * ctx.spacing
              << "; the common-envelope description degrades\n";
  }
}

}  // namespace

double envelope_amplitude(const ExpansionContext& ctx, double x) {
  // |w|^2 is the normal density with std sigma, so |w| integrates to 1 in square.
  const double u = (x - ctx.center()) / ctx.sigma;
  const double norm = std::pow(2.0 * std::numbers::pi * ctx.sigma * ctx.sigma, -0.25);
  return norm * std::exp(-0.25 * u * u);
}

std::complex<double> wannier_evolved(const ExpansionContext& ctx, int site, double x) {
  const double dx = x - ctx.site_position(site);
  return std::polar(envelope_amplitude(ctx, x), ctx.quad_phase_coeff() * dx * dx);
}

double density_coherent(const CoherentSpec& c, int n_atoms, const ExpansionContext& ctx,
                        double x) {
  std::complex<double> f = 0.0;
  for (int j = 1; j <= c.sites(); ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    f += std::sqrt(c.xi()[idx]) * std::polar(1.0, c.phi()[idx]) * wannier_evolved(ctx, j, x);
  }
  return n_atoms * std::norm(f);
}

void density_coherent_grid(const CoherentSpec& c, int n_atoms, const ExpansionContext& ctx,
                           std::span<const double> x, std::span<double> out) {
  if (out.size() != x.size()) throw input_error("density_coherent_grid: output size mismatch");
  const std::size_t n = x.size();
  const std::size_t m = static_cast<std::size_t>(c.sites());
  const double alpha = ctx.quad_phase_coeff();
  const double d = ctx.spacing;
  const double q = fringe_wavevector(ctx);

  // exp(i a (x - jd)^2) = exp(i a x^2) * (e^{-iQx})^j * exp(i a d^2 j^2):
  // the grid-dependent phasor z = e^{-iQx} turns the site sum into a
  // polynomial handled by the phasor kernel; the global exp(i a x^2) drops
  // out of |f|^2.
  std::vector<double> cre(m), cim(m), zre(n), zim(n), sre(n), sim(n);
  for (std::size_t j = 0; j < m; ++j) {
    const double site = static_cast<double>(j + 1);
    const double amp = std::sqrt(c.xi()[j]);
    const double phase = c.phi()[j] + alpha * d * d * site * site;
    cre[j] = amp * std::cos(phase);
    cim[j] = amp * std::sin(phase);
  }
  for (std::size_t g = 0; g < n; ++g) {
    zre[g] = std::cos(q * x[g]);
    zim[g] = -std::sin(q * x[g]);
  }

  const auto& k = kernels::table();
  k.phasor_poly(cre.data(), cim.data(), m, zre.data(), zim.data(), n, sre.data(), sim.data());
  k.norm_sq(sre.data(), sim.data(), n, out.data());
  for (std::size_t g = 0; g < n; ++g) {
    const double env = envelope_amplitude(ctx, x[g]);
    out[g] *= n_atoms * env * env;
  }
}

namespace {

double site_weight(std::span<const double> w, int j_1based) {
  return w.empty() ? 1.0 : w[static_cast<std::size_t>(j_1based - 1)];
}

}  // namespace

double density_fock_trace(const FockConfig& k, const ExpansionContext& ctx, double x,
                          std::span<const double> site_weights) {
  if (!site_weights.empty() && site_weights.size() != static_cast<std::size_t>(k.sites()))
    throw input_error("density_fock_trace: site_weights length mismatch");
  const double env = envelope_amplitude(ctx, x);
  double acc = 0.0;
  for (int j = 1; j <= k.sites(); ++j) acc += k[j - 1] * site_weight(site_weights, j);
  return acc * env * env;
}

double density_fock_povm(const FockConfig& k, const ExpansionContext& ctx, double x,
                         std::span<const double> site_weights) {
  if (!site_weights.empty() && site_weights.size() != static_cast<std::size_t>(k.sites()))
    throw input_error("density_fock_povm: site_weights length mismatch");
  const double env = envelope_amplitude(ctx, x);
  const int n = k.n_atoms();
  const int m = k.sites();
  double acc = 0.0;
  for (int j = 1; j <= m; ++j) acc += (k[j - 1] + 1.0) * site_weight(site_weights, j);
  return static_cast<double>(n) / (n + m) * acc * env * env;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw input_error("uniform_grid: bad range");
  std::vector<double> x(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) x[i] = lo + h * static_cast<double>(i);
  return x;
}

std::vector<double> default_density_grid(const ExpansionContext& ctx, std::size_t points) {
  const double c = ctx.center();
  return uniform_grid(c - 6.0 * ctx.sigma, c + 6.0 * ctx.sigma, points);
}

DensityProfile density_profile_fock(const FockConfig& k, const ExpansionContext& ctx,
                                    std::span<const double> grid, bool povm) {
  warn_envelope(ctx);
  DensityProfile p;
  p.x.assign(grid.begin(), grid.end());
  p.value.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.value[i] = povm ? density_fock_povm(k, ctx, grid[i]) : density_fock_trace(k, ctx, grid[i]);
  }
  p.prescription = povm ? "povm" : "trace";
  p.state = "fock";
  return p;
}

DensityProfile density_profile_coherent(const CoherentSpec& c, int n_atoms,
                                        const ExpansionContext& ctx,
                                        std::span<const double> grid) {
  warn_envelope(ctx);
  DensityProfile p;
  p.x.assign(grid.begin(), grid.end());
  p.value.resize(grid.size());
  density_coherent_grid(c, n_atoms, ctx, grid, p.value);
  p.prescription = "trace";
  p.state = "coherent";
  return p;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw input_error("trapezoid: bad input sizes");
  const double h = x[1] - x[0];
  double acc = kernels::table().sum(y.data(), y.size());
  acc -= 0.5 * (y.front() + y.back());
  return acc * h;
}

}  // namespace tofcorr
