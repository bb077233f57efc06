#include "tofcorr/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "tofcorr/errors.hpp"

namespace tofcorr {

void AnnealSchedule::validate() const {
  if (!(cooling > 0.0 && cooling < 1.0))
    throw input_error("AnnealSchedule: cooling must lie in (0,1)");
  if (stages < 1) throw input_error("AnnealSchedule: stages must be >= 1");
  if (sweeps_per_stage < 1) throw input_error("AnnealSchedule: sweeps_per_stage must be >= 1");
  if (restarts < 1) throw input_error("AnnealSchedule: restarts must be >= 1");
}

std::pair<int, int> propose_move(std::span<const int> occupations, Rng& rng) {
  const int m = static_cast<int>(occupations.size());
  int occupied = 0;
  for (int k : occupations) occupied += (k > 0) ? 1 : 0;
  if (occupied == 0) throw input_error("propose_move: no atoms to move");
  if (m < 2) throw input_error("propose_move: need at least two sites");

  auto pick = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(occupied)));
  int src = -1;
  for (int i = 0; i < m; ++i) {
    if (occupations[static_cast<std::size_t>(i)] > 0 && pick-- == 0) {
      src = i;
      break;
    }
  }
  int dst = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(m - 1)));
  if (dst >= src) ++dst;
  return {src, dst};
}

double energy_delta(std::span<const int> occupations, std::span<const double> eps, double U,
                    int src, int dst) {
  if (src == dst) throw input_error("energy_delta: source equals target");
  const auto s = static_cast<std::size_t>(src);
  const auto d = static_cast<std::size_t>(dst);
  if (occupations[s] < 1) throw input_error("energy_delta: source site is empty");
  return eps[d] - eps[s] + U * (occupations[d] - occupations[s] + 1);
}

bool metropolis_accept(double delta_e, double temperature, double u) {
  if (delta_e <= 0.0) return true;
  if (!(temperature > 0.0)) return false;
  return u < std::exp(-delta_e / temperature);
}

namespace {

std::vector<int> balanced_start(std::span<const double> eps, int n_atoms) {
  const int m = static_cast<int>(eps.size());
  std::vector<int> occ(static_cast<std::size_t>(m), n_atoms / m);
  int rem = n_atoms % m;
  if (rem > 0) {
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return eps[static_cast<std::size_t>(a)] < eps[static_cast<std::size_t>(b)]; });
    for (int i = 0; i < rem; ++i) ++occ[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  }
  return occ;
}

struct RunOutcome {
  std::vector<int> best;
  double best_energy;
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;
};

RunOutcome anneal_once(std::span<const double> eps, double U, int n_atoms, double t0,
                       const AnnealSchedule& sched, std::uint64_t stream_seed) {
  const int m = static_cast<int>(eps.size());
  Rng rng(stream_seed);

  std::vector<int> occ = balanced_start(eps, n_atoms);
  double energy = fock_energy(occ, eps, U);

  RunOutcome out;
  out.best = occ;
  out.best_energy = energy;

  // Occupied-site list kept incrementally so a proposal costs O(1).
  std::vector<int> occupied;
  std::vector<int> pos(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    if (occ[static_cast<std::size_t>(i)] > 0) {
      pos[static_cast<std::size_t>(i)] = static_cast<int>(occupied.size());
      occupied.push_back(i);
    }
  }

  double temperature = t0;
  for (int stage = 0; stage < sched.stages; ++stage) {
    const long long moves = static_cast<long long>(sched.sweeps_per_stage) * m;
    for (long long mv = 0; mv < moves; ++mv) {
      const int src = occupied[rng.next_index(occupied.size())];
      int dst = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(m - 1)));
      if (dst >= src) ++dst;
      ++out.proposed;

      const double de = energy_delta(occ, eps, U, src, dst);
      bool accept = de <= 0.0;
      if (!accept) accept = metropolis_accept(de, temperature, rng.next_double());
      if (!accept) continue;

      ++out.accepted;
      energy += de;
      auto& ks = occ[static_cast<std::size_t>(src)];
      auto& kd = occ[static_cast<std::size_t>(dst)];
      if (kd == 0) {
        pos[static_cast<std::size_t>(dst)] = static_cast<int>(occupied.size());
        occupied.push_back(dst);
      }
      --ks;
      ++kd;
      if (ks == 0) {
        const int hole = pos[static_cast<std::size_t>(src)];
        const int last = occupied.back();
        occupied[static_cast<std::size_t>(hole)] = last;
        pos[static_cast<std::size_t>(last)] = hole;
        occupied.pop_back();
        pos[static_cast<std::size_t>(src)] = -1;
      }

      if (energy < out.best_energy) {
        out.best_energy = energy;
        out.best = occ;
      }
    }
    temperature *= sched.cooling;
  }
  return out;
}

}  // namespace

AnnealResult anneal(std::span<const double> eps, double U, int n_atoms,
                    const AnnealSchedule& sched) {
  sched.validate();
  if (n_atoms < 0) throw input_error("anneal: negative atom count");
  const int m = static_cast<int>(eps.size());
  if (m < 1) throw input_error("anneal: empty energy vector");

  // Degenerate instances have a unique configuration.
  if (m == 1 || n_atoms == 0) {
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    if (m == 1) occ[0] = n_atoms;
    const double e = fock_energy(occ, eps, U);
    return AnnealResult{FockConfig(std::move(occ)), e, 0, 0};
  }

  double t0 = sched.t0;
  if (!(t0 > 0.0)) {
    double scale = U;
    for (double e : eps) scale = std::max(scale, std::abs(e));
    t0 = std::max(scale, 1.0) * n_atoms;
  }

  std::vector<int> best;
  double best_energy = std::numeric_limits<double>::infinity();
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;
  for (int run = 0; run < sched.restarts; ++run) {
    RunOutcome out = anneal_once(eps, U, n_atoms, t0, sched,
                                 derive_seed(sched.seed, static_cast<std::uint64_t>(run)));
    accepted += out.accepted;
    proposed += out.proposed;
    if (out.best_energy < best_energy) {
      best_energy = out.best_energy;
      best = std::move(out.best);
    }
  }

  const double energy = fock_energy(best, eps, U);  // from scratch, not incremental
  return AnnealResult{FockConfig(std::move(best)), energy, accepted, proposed};
}

AnnealResult anneal(const LatticeSpec& spec, int n_atoms, const AnnealSchedule& sched) {
  const std::vector<double> eps = site_energies(spec);
  AnnealSchedule s = sched;
  if (!(s.t0 > 0.0)) s.t0 = std::max(spec.U, spec.V2) * n_atoms;
  return anneal(eps, spec.U, n_atoms, s);
}

std::uint64_t composition_count(int n_atoms, int sites) {
  // C(N+M-1, M-1), saturating at uint64 max.
  std::uint64_t count = 1;
  for (int i = 1; i < sites; ++i) {
    const auto num = static_cast<std::uint64_t>(n_atoms + i);
    if (count > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    count = count * num / static_cast<std::uint64_t>(i);
  }
  return count;
}

AnnealResult enumerate_ground_state(std::span<const double> eps, double U, int n_atoms,
                                    std::uint64_t cap) {
  const int m = static_cast<int>(eps.size());
  if (m < 1) throw input_error("enumerate_ground_state: empty energy vector");
  if (n_atoms < 0) throw input_error("enumerate_ground_state: negative atom count");

  const std::uint64_t count = composition_count(n_atoms, m);
  if (count > cap) {
    throw cap_exceeded("enumerate_ground_state: " + std::to_string(count) +
                           " compositions exceed cap " + std::to_string(cap) +
                           "; required cap is " + std::to_string(count),
                       count);
  }

  std::vector<int> occ(static_cast<std::size_t>(m), 0);
  std::vector<int> best;
  double best_energy = std::numeric_limits<double>::infinity();

  // Lexicographic enumeration; strict improvement keeps the lexicographically
  // smallest minimizer.
  auto visit = [&](auto&& self, int site, int remaining) -> void {
    if (site == m - 1) {
      occ[static_cast<std::size_t>(site)] = remaining;
      const double e = fock_energy(occ, eps, U);
      if (e < best_energy) {
        best_energy = e;
        best = occ;
      }
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      occ[static_cast<std::size_t>(site)] = k;
      self(self, site + 1, remaining - k);
    }
  };
  visit(visit, 0, n_atoms);

  return AnnealResult{FockConfig(std::move(best)), best_energy, 0, count};
}

AnnealResult enumerate_ground_state(const LatticeSpec& spec, int n_atoms, std::uint64_t cap) {
  const std::vector<double> eps = site_energies(spec);
  return enumerate_ground_state(eps, spec.U, n_atoms, cap);
}

}  // namespace tofcorr
