#include "tofcorr/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "tofcorr/errors.hpp"

namespace tofcorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

void LatticeSpec::validate() const {
  if (sites < 2) throw input_error("LatticeSpec: sites must be >= 2");
  if (!(spacing > 0.0)) throw input_error("LatticeSpec: spacing must be > 0");
  if (U < 0.0) throw input_error("LatticeSpec: U must be >= 0");
  if (V2 < 0.0) throw input_error("LatticeSpec: V2 must be >= 0");
  const double reduced = kappa_ratio - std::floor(kappa_ratio);
  if (!(reduced > 0.0))
    throw input_error("LatticeSpec: kappa_ratio must be non-integer (sin^2 is periodic mod 1)");
  if (!extra_offsets.empty() && extra_offsets.size() != static_cast<std::size_t>(sites))
    throw input_error("LatticeSpec: extra_offsets length must equal sites");
}

FockConfig::FockConfig(std::vector<int> occupations) : occ_(std::move(occupations)) {
  if (occ_.empty()) throw input_error("FockConfig: needs at least one site");
  long long total = 0;
  for (int k : occ_) {
    if (k < 0) throw input_error("FockConfig: occupations must be >= 0");
    total += k;
  }
  n_ = static_cast<int>(total);
}

CoherentSpec::CoherentSpec(std::vector<double> xi, std::vector<double> phi)
    : xi_(std::move(xi)), phi_(std::move(phi)) {
  if (xi_.empty() || xi_.size() != phi_.size())
    throw input_error("CoherentSpec: xi and phi must be same nonzero length");
  double total = 0.0;
  for (double x : xi_) {
    if (x < 0.0 || x > 1.0) throw input_error("CoherentSpec: xi entries must lie in [0,1]");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw input_error("CoherentSpec: xi must sum to 1 within 1e-12");
  for (double& p : phi_) {
    p -= kTwoPi * std::floor(p / kTwoPi);
    if (p >= kTwoPi) p = 0.0;  // guards the floor rounding right at 2*pi
  }
}

std::vector<double> site_energies(const LatticeSpec& spec) {
  spec.validate();
  std::vector<double> eps(static_cast<std::size_t>(spec.sites));
  for (int i = 0; i < spec.sites; ++i) {
    const double s = std::sin(static_cast<double>(i + 1) * std::numbers::pi * spec.kappa_ratio);
    eps[static_cast<std::size_t>(i)] = spec.V2 * s * s;
    if (!spec.extra_offsets.empty()) eps[static_cast<std::size_t>(i)] += spec.extra_offsets[static_cast<std::size_t>(i)];
  }
  return eps;
}

double fock_energy(std::span<const int> occupations, std::span<const double> eps, double U) {
  if (occupations.size() != eps.size())
    throw input_error("fock_energy: occupation and energy vectors differ in length");
  double e = 0.0;
  for (std::size_t j = 0; j < occupations.size(); ++j) {
    const double k = occupations[j];
    e += eps[j] * k + 0.5 * U * k * (k - 1.0);
  }
  return e;
}

double fock_energy(const FockConfig& k, std::span<const double> eps, double U) {
  return fock_energy(std::span<const int>(k.occupations()), eps, U);
}

std::complex<double> coherent_overlap(const CoherentSpec& a, const CoherentSpec& b, int n_atoms) {
  if (a.sites() != b.sites()) throw input_error("coherent_overlap: mismatched site counts");
  if (n_atoms < 0) throw input_error("coherent_overlap: negative atom count");
  std::complex<double> s = 0.0;
  for (int i = 0; i < a.sites(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double amp = std::sqrt(a.xi()[idx] * b.xi()[idx]);
    const double dphi = a.phi()[idx] - b.phi()[idx];
    s += amp * std::polar(1.0, dphi);
  }
  return std::pow(s, n_atoms);
}

std::complex<double> fock_coherent_overlap(const FockConfig& k, const CoherentSpec& c) {
  if (k.sites() != c.sites()) throw input_error("fock_coherent_overlap: mismatched site counts");
  double log_mag = 0.5 * log_multinomial(k);
  double phase = 0.0;
  for (int j = 0; j < k.sites(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const int kj = k[j];
    if (kj == 0) continue;
    const double xj = c.xi()[idx];
    if (xj == 0.0) return 0.0;  // occupied mode with zero amplitude
    log_mag += 0.5 * kj * std::log(xj);
    phase += kj * c.phi()[idx];
  }
  return std::polar(std::exp(log_mag), phase);
}

double povm_weight(const FockConfig& k, std::span<const double> xi) {
  if (xi.size() != static_cast<std::size_t>(k.sites()))
    throw input_error("povm_weight: mismatched site counts");
  double log_w = log_multinomial(k);
  for (int j = 0; j < k.sites(); ++j) {
    const int kj = k[j];
    if (kj == 0) continue;
    const double xj = xi[static_cast<std::size_t>(j)];
    if (xj == 0.0) return 0.0;
    log_w += kj * std::log(xj);
  }
  return std::exp(log_w);
}

double povm_weight(const FockConfig& k, const CoherentSpec& c) {
  return povm_weight(k, std::span<const double>(c.xi()));
}

double log_multinomial(const FockConfig& k) {
  double v = log_factorial(k.n_atoms());
  for (int kj : k.occupations()) v -= log_factorial(kj);
  return v;
}

double log_measure_constant(int n_atoms, int sites) {
  return log_factorial(n_atoms + sites - 1) - log_factorial(n_atoms);
}

double log_simplex_moment(const FockConfig& k) {
  double v = -log_factorial(k.n_atoms() + k.sites() - 1);
  for (int kj : k.occupations()) v += log_factorial(kj);
  return v;
}

}  // namespace tofcorr
