#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tofcorr {

// One-dimensional bichromatic lattice plus Bose-Hubbard parameters.
// Energies (U, V2, extra_offsets) share one unit, conventionally h x kHz.
// The hopping J is carried for completeness; state preparation works in the
// regime where it is negligible and never uses it.
struct LatticeSpec {
  int sites = 2;                      // M
  double spacing = 1.0;               // d
  double U = 0.0;                     // on-site repulsion
  double J = 0.0;                     // hopping (unused in preparation)
  double V2 = 0.0;                    // secondary-lattice strength
  double kappa_ratio = 830.0 / 1076.0;  // kappa_2 / kappa_1, mod 1
  std::vector<double> extra_offsets;  // optional per-site additions, length M

  void validate() const;  // throws input_error on violated invariants
};

// Occupation-number configuration: k_i atoms on site i, sum fixed to N.
class FockConfig {
 public:
  explicit FockConfig(std::vector<int> occupations);

  const std::vector<int>& occupations() const { return occ_; }
  int sites() const { return static_cast<int>(occ_.size()); }
  int n_atoms() const { return n_; }
  int operator[](int i) const { return occ_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<int> occ_;
  int n_;
};

// Fixed-phase condensate-like state: all N atoms share one single-particle
// superposition with site probabilities xi and phases phi.
class CoherentSpec {
 public:
  CoherentSpec(std::vector<double> xi, std::vector<double> phi);

  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& phi() const { return phi_; }
  int sites() const { return static_cast<int>(xi_.size()); }

 private:
  std::vector<double> xi_;   // in [0,1], sums to 1
  std::vector<double> phi_;  // reduced to [0, 2*pi)
};

// eps_i = V2 * sin^2(i * pi * kappa_ratio) + extra_offsets[i], site index i
// running 1..M.
std::vector<double> site_energies(const LatticeSpec& spec);

// E = sum_j eps_j k_j + (U/2) sum_j k_j (k_j - 1)
double fock_energy(std::span<const int> occupations, std::span<const double> eps, double U);
double fock_energy(const FockConfig& k, std::span<const double> eps, double U);

// (sum_i sqrt(xi_i xi'_i) e^{i(phi_i - phi'_i)})^N
std::complex<double> coherent_overlap(const CoherentSpec& a, const CoherentSpec& b, int n_atoms);

// sqrt(N!/prod k_j!) e^{i k.phi} prod_j xi_j^{k_j/2}; log-gamma internally.
std::complex<double> fock_coherent_overlap(const FockConfig& k, const CoherentSpec& c);

// |<k|xi,phi>|^2 = (N!/prod k_j!) prod_j xi_j^{k_j}; phase independent.
double povm_weight(const FockConfig& k, const CoherentSpec& c);
double povm_weight(const FockConfig& k, std::span<const double> xi);

// log N! - sum_j log k_j!
double log_multinomial(const FockConfig& k);

// log[(N+M-1)!/N!]: normalization of the coherent-state resolution of unity.
double log_measure_constant(int n_atoms, int sites);

// log of the simplex integral of prod_j xi_j^{k_j}: sum_j log k_j! - log(N+M-1)!
double log_simplex_moment(const FockConfig& k);

}  // namespace tofcorr
