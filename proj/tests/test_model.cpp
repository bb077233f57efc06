#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "support/oracles.hpp"
#include "tofcorr/errors.hpp"
#include "tofcorr/model.hpp"
#include "tofcorr/rng.hpp"

using namespace tofcorr;

TEST_CASE("site_energies evaluates the bichromatic modulation, 1-based") {
  LatticeSpec spec;
  spec.sites = 4;
  spec.V2 = 1.0;
  spec.kappa_ratio = 0.5;
  const auto eps = site_energies(spec);
  // sin^2(i pi / 2) alternates 1, 0, 1, 0
  CHECK(eps[0] == doctest::Approx(1.0));
  CHECK(eps[1] == doctest::Approx(0.0).epsilon(0).scale(1));
  CHECK(eps[2] == doctest::Approx(1.0));
  CHECK(std::abs(eps[3]) < 1e-12);

  spec.V2 = 0.0;
  spec.kappa_ratio = 0.7234;
  for (double e : site_energies(spec)) CHECK(e == 0.0);

  LatticeSpec third;
  third.sites = 3;
  third.V2 = 2.0;
  third.kappa_ratio = 1.0 / 3.0;
  const auto e3 = site_energies(third);
  CHECK(e3[0] == doctest::Approx(1.5));
  CHECK(e3[1] == doctest::Approx(1.5));
  CHECK(std::abs(e3[2]) < 1e-12);
}

TEST_CASE("site_energies is periodic in kappa_ratio mod 1 and supports offsets") {
  LatticeSpec a;
  a.sites = 7;
  a.V2 = 3.3;
  a.kappa_ratio = 0.31;
  LatticeSpec b = a;
  b.kappa_ratio = 1.31;
  const auto ea = site_energies(a);
  const auto eb = site_energies(b);
  for (int i = 0; i < a.sites; ++i)
    CHECK(ea[static_cast<std::size_t>(i)] ==
          doctest::Approx(eb[static_cast<std::size_t>(i)]).epsilon(1e-12));

  a.extra_offsets = {1, 2, 3, 4, 5, 6, 7};
  const auto eo = site_energies(a);
  for (int i = 0; i < a.sites; ++i)
    CHECK(eo[static_cast<std::size_t>(i)] ==
          doctest::Approx(ea[static_cast<std::size_t>(i)] + i + 1));
}

TEST_CASE("LatticeSpec invariants are enforced") {
  LatticeSpec spec;
  spec.sites = 1;
  CHECK_THROWS_AS(spec.validate(), input_error);
  spec.sites = 2;
  spec.kappa_ratio = 2.0;  // integer ratio collapses the modulation
  CHECK_THROWS_AS(spec.validate(), input_error);
  spec.kappa_ratio = 0.5;
  spec.U = -1.0;
  CHECK_THROWS_AS(spec.validate(), input_error);
}

TEST_CASE("fock_energy matches hand-evaluated cases") {
  const std::vector<double> zero2{0.0, 0.0};
  CHECK(fock_energy(FockConfig({1, 1, 1}), std::vector<double>{0, 0, 0}, 7.7) == 0.0);
  CHECK(fock_energy(FockConfig({2, 0}), zero2, 3.0) == doctest::Approx(3.0));
  CHECK(fock_energy(FockConfig({1, 1}), std::vector<double>{0.0, 5.0}, 123.0) ==
        doctest::Approx(5.0));
  CHECK_THROWS_AS(fock_energy(FockConfig({1, 1}), std::vector<double>{0.0}, 1.0), input_error);
}

TEST_CASE("fock_energy is permutation covariant") {
  Rng rng(5);
  const std::vector<int> k{3, 0, 2, 5, 1};
  const std::vector<double> eps{0.3, 1.2, -0.5, 2.0, 0.0};
  const double e = fock_energy(k, eps, 1.7);
  // rotate both together
  std::vector<int> k2(k.begin() + 2, k.end());
  k2.insert(k2.end(), k.begin(), k.begin() + 2);
  std::vector<double> eps2(eps.begin() + 2, eps.end());
  eps2.insert(eps2.end(), eps.begin(), eps.begin() + 2);
  CHECK(fock_energy(k2, eps2, 1.7) == doctest::Approx(e).epsilon(1e-14));
}

TEST_CASE("coherent_overlap reproduces the closed examples") {
  const CoherentSpec half({0.5, 0.5}, {0.0, 0.0});
  CHECK(coherent_overlap(half, half, 13).real() == doctest::Approx(1.0));
  CHECK(coherent_overlap(half, half, 13).imag() == doctest::Approx(0.0));

  const CoherentSpec flipped({0.5, 0.5}, {0.0, std::numbers::pi});
  for (int n : {1, 2, 5}) {
    CHECK(std::abs(coherent_overlap(half, flipped, n)) == doctest::Approx(0.0).scale(1));
  }

  // phase difference pi/2 on the second site, N = 2: (1/2 + i/2)^2 = i/2
  const CoherentSpec quarter({0.5, 0.5}, {0.0, std::numbers::pi / 2});
  const auto v = coherent_overlap(quarter, half, 2);
  CHECK(v.real() == doctest::Approx(0.0).scale(1));
  CHECK(v.imag() == doctest::Approx(0.5));
}

TEST_CASE("coherent_overlap magnitude is bounded and decays with N") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_index(4));
    std::vector<double> xa(static_cast<std::size_t>(m)), xb(static_cast<std::size_t>(m));
    std::vector<double> pa(static_cast<std::size_t>(m)), pb(static_cast<std::size_t>(m));
    double sa = 0, sb = 0;
    for (int j = 0; j < m; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      xa[idx] = rng.next_exponential();
      xb[idx] = rng.next_exponential();
      sa += xa[idx];
      sb += xb[idx];
      pa[idx] = 6.28 * rng.next_double();
      pb[idx] = 6.28 * rng.next_double();
    }
    for (int j = 0; j < m; ++j) {
      xa[static_cast<std::size_t>(j)] /= sa;
      xb[static_cast<std::size_t>(j)] /= sb;
    }
    const CoherentSpec a(xa, pa), b(xb, pb);
    double prev = 1.0;
    for (int n : {1, 2, 4, 8, 16}) {
      const double mag = std::abs(coherent_overlap(a, b, n));
      CHECK(mag <= 1.0 + 1e-12);
      CHECK(mag <= prev + 1e-12);
      prev = mag;
    }
  }
}

TEST_CASE("fock_coherent_overlap closed examples") {
  // single mode: pure phase of magnitude one
  const FockConfig k1({4});
  const CoherentSpec c1({1.0}, {0.3});
  const auto v1 = fock_coherent_overlap(k1, c1);
  CHECK(std::abs(v1) == doctest::Approx(1.0));
  CHECK(std::arg(v1) == doctest::Approx(4 * 0.3));

  // sqrt(2!/1!1!) * (1/2)^{1/2} * (1/2)^{1/2} = sqrt(2)/2
  const FockConfig k2({1, 1});
  const CoherentSpec c2({0.5, 0.5}, {0.0, 0.0});
  CHECK(fock_coherent_overlap(k2, c2).real() == doctest::Approx(std::sqrt(0.5)));

  // zero amplitude on an occupied mode kills the overlap
  const CoherentSpec c3({1.0, 0.0}, {0.0, 0.0});
  CHECK(std::abs(fock_coherent_overlap(k2, c3)) == 0.0);
}

TEST_CASE("povm_weight examples and consistency with the overlap") {
  const FockConfig k({1, 1});
  const CoherentSpec c({0.5, 0.5}, {0.7, 1.9});
  CHECK(povm_weight(k, c) == doctest::Approx(0.5));
  CHECK(povm_weight(FockConfig({5}), CoherentSpec({1.0}, {0.0})) == doctest::Approx(1.0));
  CHECK(povm_weight(FockConfig({3, 0, 0}), CoherentSpec({1.0, 0.0, 0.0}, {0, 0, 0})) ==
        doctest::Approx(1.0));

  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_index(4));
    std::vector<int> occ(static_cast<std::size_t>(m));
    for (auto& o : occ) o = static_cast<int>(rng.next_index(4));
    occ[0] += 1;
    std::vector<double> xi(static_cast<std::size_t>(m)), phi(static_cast<std::size_t>(m));
    double s = 0;
    for (auto& x : xi) {
      x = rng.next_exponential();
      s += x;
    }
    for (auto& x : xi) x /= s;
    for (auto& p : phi) p = 6.0 * rng.next_double();
    const FockConfig kk(occ);
    const CoherentSpec cc(xi, phi);
    const double w = povm_weight(kk, cc);
    CHECK(std::norm(fock_coherent_overlap(kk, cc)) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("povm_weight sums to one over all configurations at fixed N") {
  Rng rng(99);
  for (int m = 1; m <= 4; ++m) {
    std::vector<double> xi(static_cast<std::size_t>(m)), phi(static_cast<std::size_t>(m), 0.0);
    double s = 0;
    for (auto& x : xi) {
      x = rng.next_exponential();
      s += x;
    }
    for (auto& x : xi) x /= s;
    const CoherentSpec c(xi, phi);
    for (int n = 0; n <= 6; ++n) {
      double total = 0.0;
      testsupport::for_each_composition(m, n, [&](const std::vector<int>& occ) {
        total += povm_weight(FockConfig(occ), c);
      });
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
