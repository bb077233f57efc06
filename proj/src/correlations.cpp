#include "tofcorr/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "tofcorr/errors.hpp"
#include "tofcorr/kernels.hpp"
#include "tofcorr/rng.hpp"

namespace tofcorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> phasor_sum(std::span<const double> coeffs, double u) {
  const std::complex<double> z = std::polar(1.0, u);
  std::complex<double> s = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) s = (s + coeffs[j]) * z;
  return s;
}

void check_pair_defined(const FockConfig& k) {
  if (k.n_atoms() < 2)
    throw input_error("pair correlations need at least two atoms");
}

}  // namespace

double occupation_cross_sum(const FockConfig& k, double u, bool shifted) {
  std::vector<double> c(static_cast<std::size_t>(k.sites()));
  double sum_sq = 0.0;
  for (int j = 0; j < k.sites(); ++j) {
    const double v = k[j] + (shifted ? 1.0 : 0.0);
    c[static_cast<std::size_t>(j)] = v;
    sum_sq += v * v;
  }
  return std::norm(phasor_sum(c, u)) - sum_sq;
}

double corr_closed_trace(const FockConfig& k, double u) {
  check_pair_defined(k);
  const double n = k.n_atoms();
  return (n - 1.0) / n * (1.0 + occupation_cross_sum(k, u, false) / (n * (n - 1.0)));
}

double corr_closed_povm(const FockConfig& k, double u) {
  check_pair_defined(k);
  const double n = k.n_atoms();
  const double nm = n + k.sites();
  return (n - 1.0) / n * (1.0 + occupation_cross_sum(k, u, true) / (nm * (nm + 1.0)));
}

double corr_balanced(int n_atoms, int sites, double u) {
  if (sites < 1 || n_atoms < 2) throw input_error("corr_balanced: need M >= 1, N >= 2");
  if (n_atoms % sites != 0) throw input_error("corr_balanced: M must divide N");
  const double n = n_atoms;
  const double m = sites;
  const double fill = n / m;

  // sin^2(M u/2)/sin^2(u/2); at u = 2 pi p the ratio tends to M^2.
  const double half = 0.5 * u;
  const double s = std::sin(half);
  double ratio_sq;
  if (std::abs(s) < 1e-8) {
    ratio_sq = m * m;
  } else {
    const double t = std::sin(m * half) / s;
    ratio_sq = t * t;
  }
  return (n - 1.0) / n * (1.0 + fill * fill * (ratio_sq - m) / (n * (n - 1.0)));
}

CorrelationCurve eval_curve(const FockConfig& k, std::span<const double> u, bool povm) {
  check_pair_defined(k);
  const std::size_t n_pts = u.size();
  const auto m = static_cast<std::size_t>(k.sites());
  const double n = k.n_atoms();
  const double denom = povm ? (n + k.sites()) * (n + k.sites() + 1.0) : n * (n - 1.0);
  const double pref = (n - 1.0) / n;

  std::vector<double> c(m);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    c[j] = k[static_cast<int>(j)] + (povm ? 1.0 : 0.0);
    sum_sq += c[j] * c[j];
  }

  std::vector<double> zre(n_pts), zim(n_pts), sre(n_pts), sim(n_pts);
  for (std::size_t g = 0; g < n_pts; ++g) {
    zre[g] = std::cos(u[g]);
    zim[g] = std::sin(u[g]);
  }

  CorrelationCurve curve;
  curve.u.assign(u.begin(), u.end());
  curve.value.resize(n_pts);
  curve.prescription = povm ? "povm" : "trace";

  const auto& kt = kernels::table();
  kt.phasor_poly(c.data(), nullptr, m, zre.data(), zim.data(), n_pts, sre.data(), sim.data());
  kt.norm_sq(sre.data(), sim.data(), n_pts, curve.value.data());
  for (std::size_t g = 0; g < n_pts; ++g) {
    curve.value[g] = pref * (1.0 + (curve.value[g] - sum_sq) / denom);
  }
  return curve;
}

std::complex<double> wannier_ballistic(const ExpansionContext& ctx, int site, double x) {
  const double dx = x - ctx.site_position(site);
  const double norm = std::pow(2.0 * std::numbers::pi * ctx.sigma * ctx.sigma, -0.25);
  const double amp = norm * std::exp(-0.25 * dx * dx / (ctx.sigma * ctx.sigma));
  return std::polar(amp, ctx.quad_phase_coeff() * dx * dx);
}

namespace {

void check_oracle_instance(const FockConfig& k) {
  if (k.n_atoms() > 6 || k.sites() > 4)
    throw input_error("two_point_fock_oracle: refuses instances beyond N <= 6, M <= 4");
}

// Trace density of the same site-centered packet model the oracle evolves.
double density_site_centered(const FockConfig& k, const ExpansionContext& ctx, double x) {
  double acc = 0.0;
  for (int j = 1; j <= k.sites(); ++j) acc += k[j - 1] * std::norm(wannier_ballistic(ctx, j, x));
  return acc;
}

}  // namespace

double two_point_fock_oracle(const FockConfig& k, const ExpansionContext& ctx, double x,
                             double xp) {
  check_oracle_instance(k);
  const int m = k.sites();

  // psi(x) psi(x') |k> = sum over annihilation channels (l at x', then j at x)
  // of sqrt(k_l) sqrt(k_j - [j==l]) w_l(x') w_j(x) |k - e_l - e_j>.
  // Amplitudes landing on the same reduced configuration add coherently.
  std::array<std::complex<double>, 16> amp{};
  std::array<std::complex<double>, 4> w_x{};
  std::array<std::complex<double>, 4> w_xp{};
  for (int j = 0; j < m; ++j) {
    w_x[static_cast<std::size_t>(j)] = wannier_ballistic(ctx, j + 1, x);
    w_xp[static_cast<std::size_t>(j)] = wannier_ballistic(ctx, j + 1, xp);
  }

  for (int l = 0; l < m; ++l) {
    if (k[l] == 0) continue;
    for (int j = 0; j < m; ++j) {
      const int kj_left = k[j] - (j == l ? 1 : 0);
      if (kj_left <= 0) continue;
      const double factor = std::sqrt(static_cast<double>(k[l])) *
                            std::sqrt(static_cast<double>(kj_left));
      const auto slot = static_cast<std::size_t>(std::min(l, j) * m + std::max(l, j));
      amp[slot] += factor * w_xp[static_cast<std::size_t>(l)] * w_x[static_cast<std::size_t>(j)];
    }
  }

  double total = 0.0;
  for (const auto& a : amp) total += std::norm(a);
  return total;
}

double integrated_oracle_trace(const FockConfig& k, const ExpansionContext& ctx, double r) {
  check_oracle_instance(k);
  const double q = fringe_wavevector(ctx);
  const double step = kTwoPi / q / 64.0;  // >= 32 points per fringe, doubled
  const double half_width = 6.5 * ctx.sigma + 0.5 * std::abs(r) + ctx.sites * ctx.spacing;
  const auto points = static_cast<std::size_t>(std::ceil(2.0 * half_width / step)) + 1;
  const std::vector<double> grid = uniform_grid(ctx.center() - half_width,
                                                ctx.center() + half_width, points);

  std::vector<double> num(points), den(points);
  for (std::size_t g = 0; g < points; ++g) {
    const double xa = grid[g] - 0.5 * r;
    const double xb = grid[g] + 0.5 * r;
    num[g] = two_point_fock_oracle(k, ctx, xa, xb);
    den[g] = density_site_centered(k, ctx, xa) * density_site_centered(k, ctx, xb);
  }
  return trapezoid(grid, num) / trapezoid(grid, den);
}

namespace {

struct McAccum {
  double sw = 0.0, sww = 0.0, sv = 0.0, svv = 0.0, svw = 0.0;
  long long n = 0;

  void add(double w, double v) {
    sw += w;
    sww += w * w;
    sv += v;
    svv += v * v;
    svw += v * w;
    ++n;
  }
  double mean_w() const { return sw / static_cast<double>(n); }
  double mean_v() const { return sv / static_cast<double>(n); }
  double var_w() const { return sww / static_cast<double>(n) - mean_w() * mean_w(); }
  double var_v() const { return svv / static_cast<double>(n) - mean_v() * mean_v(); }
  double cov_vw() const { return svw / static_cast<double>(n) - mean_v() * mean_w(); }
};

void draw_configuration(Rng& rng, int m, std::vector<double>& xi, std::vector<double>& phi) {
  xi.resize(static_cast<std::size_t>(m));
  phi.resize(static_cast<std::size_t>(m));
  double total = 0.0;
  for (auto& x : xi) {
    x = rng.next_exponential();
    total += x;
  }
  for (auto& x : xi) x /= total;  // exact uniform law on the simplex
  for (int j = 0; j < m - 1; ++j) phi[static_cast<std::size_t>(j)] = kTwoPi * rng.next_double();
  phi[static_cast<std::size_t>(m - 1)] = 0.0;  // only relative phases matter
}

// Density of the sampled coherent configuration at x, using the production
// common-envelope packets.
double sample_density(std::span<const double> xi, std::span<const double> phi, int n_atoms,
                      const ExpansionContext& ctx, double x) {
  std::complex<double> f = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    f += std::sqrt(xi[j]) * std::polar(1.0, phi[j]) *
         wannier_evolved(ctx, static_cast<int>(j) + 1, x);
  }
  return n_atoms * std::norm(f);
}

// Barycenter-integrated pair-correlation coefficient of one coherent sample
// at separation r, in the sigma -> infinity limit where the envelope factors
// out: 1 + 2 sum_{delta>=1} |V_delta|^2 cos(delta Q r), with
// V_delta = sum_l sqrt(xi_{l+delta} xi_l) e^{i(phi_{l+delta}-phi_l)} e^{i delta Qd l}.
// Terms whose barycenter phase does not cancel integrate to zero and are
// dropped exactly, which leaves the estimator unbiased.
double sample_pair_coefficient(std::span<const double> xi, std::span<const double> phi,
                               const ExpansionContext& ctx, double r) {
  const int m = static_cast<int>(xi.size());
  const double q = fringe_wavevector(ctx);
  const double qd = q * ctx.spacing;
  double a = 1.0;
  for (int delta = 1; delta < m; ++delta) {
    std::complex<double> v = 0.0;
    for (int l = 1; l + delta <= m; ++l) {
      const auto lo = static_cast<std::size_t>(l - 1);
      const auto hi = static_cast<std::size_t>(l - 1 + delta);
      v += std::sqrt(xi[hi] * xi[lo]) * std::polar(1.0, phi[hi] - phi[lo] + delta * qd * l);
    }
    a += 2.0 * std::norm(v) * std::cos(delta * q * r);
  }
  return a;
}

struct WeightModel {
  // log of the constant part: measure constant over the uniform sampling
  // density (M-1)!, plus the occupation multinomial for Fock states.
  double log_const;
  const FockConfig* fock = nullptr;
  const CoherentSpec* coherent = nullptr;
  int n_atoms = 0;

  double weight(std::span<const double> xi, std::span<const double> phi) const {
    if (fock) {
      double log_w = log_const;
      for (int j = 0; j < fock->sites(); ++j) {
        const int kj = (*fock)[j];
        if (kj == 0) continue;
        const double x = xi[static_cast<std::size_t>(j)];
        if (x == 0.0) return 0.0;
        log_w += kj * std::log(x);
      }
      return std::exp(log_w);
    }
    CoherentSpec sample(std::vector<double>(xi.begin(), xi.end()),
                        std::vector<double>(phi.begin(), phi.end()));
    return std::exp(log_const) * std::norm(coherent_overlap(*coherent, sample, n_atoms));
  }
};

McEstimate run_povm_mc(const WeightModel& wm, int m, int n_atoms, const ExpansionContext& ctx,
                       McObservable obs, double arg, long long samples, std::uint64_t seed) {
  if (samples < 10'000) throw input_error("povm_mc_oracle: needs at least 1e4 samples");

  Rng rng(derive_seed(seed, 0x706f766dULL));
  std::vector<double> xi, phi;
  McAccum acc;
  for (long long s = 0; s < samples; ++s) {
    draw_configuration(rng, m, xi, phi);
    const double w = wm.weight(xi, phi);
    double v = 1.0;
    switch (obs) {
      case McObservable::unit:
        break;
      case McObservable::density:
        v = sample_density(xi, phi, n_atoms, ctx, arg);
        break;
      case McObservable::pair_correlation:
        v = sample_pair_coefficient(xi, phi, ctx, arg);
        break;
    }
    acc.add(w, v * w);
  }

  const double inv_n = 1.0 / static_cast<double>(samples);
  const double w_bar = acc.mean_w();
  const double v_bar = acc.mean_v();
  McEstimate est;
  est.samples = samples;
  est.seed = seed;

  switch (obs) {
    case McObservable::unit: {
      est.value = w_bar;
      est.std_error = std::sqrt(std::max(0.0, acc.var_w()) * inv_n);
      break;
    }
    case McObservable::density: {
      // self-normalized ratio E[w v]/E[w]; delta-method error
      est.value = v_bar / w_bar;
      const double var = acc.var_v() / (w_bar * w_bar) +
                         v_bar * v_bar * acc.var_w() / std::pow(w_bar, 4) -
                         2.0 * v_bar * acc.cov_vw() / std::pow(w_bar, 3);
      est.std_error = std::sqrt(std::max(0.0, var) * inv_n);
      break;
    }
    case McObservable::pair_correlation: {
      // The target is num/den with den = N^2 times the envelope overlap; the
      // configuration average of the density cross terms vanishes by phase
      // symmetry, so the denominator reduces to the squared total weight.
      const double n = n_atoms;
      const double pref = (n - 1.0) / n;
      est.value = pref * v_bar / (w_bar * w_bar);
      const double var = acc.var_v() / std::pow(w_bar, 4) +
                         4.0 * v_bar * v_bar * acc.var_w() / std::pow(w_bar, 6) -
                         4.0 * v_bar * acc.cov_vw() / std::pow(w_bar, 5);
      est.std_error = pref * std::sqrt(std::max(0.0, var) * inv_n);
      break;
    }
  }
  return est;
}

}  // namespace

McEstimate povm_mc_oracle(const FockConfig& k, const ExpansionContext& ctx, McObservable obs,
                          double arg, long long samples, std::uint64_t seed) {
  if (k.sites() > 3 || k.n_atoms() > 6)
    throw input_error("povm_mc_oracle: refuses Fock instances beyond N <= 6, M <= 3");
  if (obs == McObservable::pair_correlation && k.n_atoms() < 2)
    throw input_error("povm_mc_oracle: pair correlations need at least two atoms");
  WeightModel wm;
  wm.log_const = log_measure_constant(k.n_atoms(), k.sites()) -
                 std::lgamma(static_cast<double>(k.sites())) + log_multinomial(k);
  wm.fock = &k;
  wm.n_atoms = k.n_atoms();
  return run_povm_mc(wm, k.sites(), k.n_atoms(), ctx, obs, arg, samples, seed);
}

McEstimate povm_mc_oracle(const CoherentSpec& rho, int n_atoms, const ExpansionContext& ctx,
                          McObservable obs, double arg, long long samples, std::uint64_t seed) {
  if (rho.sites() > 3 || n_atoms > 16)
    throw input_error("povm_mc_oracle: refuses coherent instances beyond N <= 16, M <= 3");
  WeightModel wm;
  wm.log_const = log_measure_constant(n_atoms, rho.sites()) -
                 std::lgamma(static_cast<double>(rho.sites()));
  wm.coherent = &rho;
  wm.n_atoms = n_atoms;
  return run_povm_mc(wm, rho.sites(), n_atoms, ctx, obs, arg, samples, seed);
}

double completeness_residual(const FockConfig& k) {
  const double total =
      log_measure_constant(k.n_atoms(), k.sites()) + log_multinomial(k) + log_simplex_moment(k);
  return std::expm1(total);
}

}  // namespace tofcorr
