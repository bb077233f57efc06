#pragma once

// Test-side reference implementations. Everything here recomputes library
// results through an independent route (direct double sums, Fock-basis
// enumeration, convex greedy) and must stay decoupled from the code paths it
// checks.

#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "tofcorr/model.hpp"

namespace testsupport {

inline void for_each_composition(int sites, int atoms,
                                 const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> occ(static_cast<std::size_t>(sites), 0);
  auto rec = [&](auto&& self, int site, int left) -> void {
    if (site == sites - 1) {
      occ[static_cast<std::size_t>(site)] = left;
      fn(occ);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      occ[static_cast<std::size_t>(site)] = k;
      self(self, site + 1, left - k);
    }
  };
  rec(rec, 0, atoms);
}

// sum_{i != j} c_i c_j e^{i(i-j)u} as a literal double sum.
inline double naive_cross_sum(std::span<const double> c, double u) {
  std::complex<double> acc = 0.0;
  const int m = static_cast<int>(c.size());
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      if (i == j) continue;
      acc += c[static_cast<std::size_t>(i - 1)] * c[static_cast<std::size_t>(j - 1)] *
             std::polar(1.0, (i - j) * u);
    }
  }
  return acc.real();
}

// Probability of reduced configuration q after the coherent-state measurement
// map is applied to |k>: the phase average makes the transformed state
// diagonal in the Fock basis with
//   p(q) = (N+M-1)!/N! * (N!)^2/(k! q!) * prod_j (k_j+q_j)! / (2N+M-1)!.
inline double povm_fock_diagonal_weight(const tofcorr::FockConfig& k,
                                        const std::vector<int>& q) {
  const int n = k.n_atoms();
  const int m = k.sites();
  double lg = std::lgamma(n + m) - std::lgamma(n + 1.0);
  lg += 2.0 * std::lgamma(n + 1.0);
  lg -= std::lgamma(2.0 * n + m);
  for (int j = 0; j < m; ++j) {
    lg -= std::lgamma(k[j] + 1.0);
    lg -= std::lgamma(q[static_cast<std::size_t>(j)] + 1.0);
    lg += std::lgamma(k[j] + q[static_cast<std::size_t>(j)] + 1.0);
  }
  return std::exp(lg);
}

// Integrated pair correlation under the coherent-state measure, via full
// enumeration over the diagonal ensemble: G = [N(N-1) + E_q cross_q(u)]/N^2.
inline double povm_pair_by_enumeration(const tofcorr::FockConfig& k, double u) {
  const int n = k.n_atoms();
  const int m = k.sites();
  double expected_cross = 0.0;
  for_each_composition(m, n, [&](const std::vector<int>& q) {
    std::vector<double> c(q.begin(), q.end());
    expected_cross += povm_fock_diagonal_weight(k, q) * naive_cross_sum(c, u);
  });
  return (n * (n - 1.0) + expected_cross) / (static_cast<double>(n) * n);
}

// Mean occupation of site j (1-based) in the diagonal ensemble.
inline double povm_mean_occupation_by_enumeration(const tofcorr::FockConfig& k, int site) {
  double mean = 0.0;
  for_each_composition(k.sites(), k.n_atoms(), [&](const std::vector<int>& q) {
    mean += povm_fock_diagonal_weight(k, q) * q[static_cast<std::size_t>(site - 1)];
  });
  return mean;
}

// Exact minimizer of sum_j eps_j k_j + U/2 sum_j k_j(k_j-1) at fixed N for
// U >= 0: the marginal cost of the next atom on site j is eps_j + U k_j,
// nondecreasing in k_j, so greedy insertion is optimal.
inline std::vector<int> greedy_ground_state(std::span<const double> eps, double U, int atoms) {
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const int m = static_cast<int>(eps.size());
  std::vector<int> occ(static_cast<std::size_t>(m), 0);
  for (int j = 0; j < m; ++j) heap.emplace(eps[static_cast<std::size_t>(j)], j);
  for (int t = 0; t < atoms; ++t) {
    auto [cost, j] = heap.top();
    heap.pop();
    ++occ[static_cast<std::size_t>(j)];
    heap.emplace(eps[static_cast<std::size_t>(j)] + U * occ[static_cast<std::size_t>(j)], j);
  }
  return occ;
}

}  // namespace testsupport
