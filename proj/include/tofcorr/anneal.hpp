#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "tofcorr/model.hpp"
#include "tofcorr/rng.hpp"

namespace tofcorr {

struct AnnealSchedule {
  double t0 = 0.0;           // initial temperature; <= 0 means auto (max(U,V2,|eps|)*N)
  double cooling = 0.95;     // multiplicative factor per stage, in (0,1)
  int stages = 400;
  int sweeps_per_stage = 20; // one sweep = M proposed moves
  std::uint64_t seed = 0;
  int restarts = 1;          // best of this many independent runs

  void validate() const;
};

struct AnnealResult {
  FockConfig config;
  double energy = 0.0;  // recomputed from scratch, not the incremental value
  std::uint64_t accepted_moves = 0;
  std::uint64_t proposed_moves = 0;
};

// Single-atom transfer: source uniform over occupied sites, target uniform
// over the remaining M-1 sites. Returns 0-based (source, target).
std::pair<int, int> propose_move(std::span<const int> occupations, Rng& rng);

// Energy change of moving one atom src -> dst:
// eps_dst - eps_src + U * (k_dst - k_src + 1). Exact match with the
// difference of full fock_energy evaluations.
double energy_delta(std::span<const int> occupations, std::span<const double> eps, double U,
                    int src, int dst);

// Pure acceptance rule: downhill always, uphill with probability e^{-dE/T}
// decided against the uniform draw u. At T -> 0 every uphill move is rejected.
bool metropolis_accept(double delta_e, double temperature, double u);

// Metropolis simulated annealing at fixed atom number. Starts from the most
// balanced configuration (floor(N/M) everywhere, remainder on the lowest-eps
// sites), tracks the best configuration ever visited, and is deterministic
// for a fixed seed. Restarts use independent streams derived from the seed.
AnnealResult anneal(std::span<const double> eps, double U, int n_atoms,
                    const AnnealSchedule& sched);
AnnealResult anneal(const LatticeSpec& spec, int n_atoms, const AnnealSchedule& sched);

// Exhaustive ground-state search over all compositions of N into M parts.
// Ties resolve to the lexicographically smallest occupation vector. Refuses
// (cap_exceeded, naming the required cap) when the composition count
// exceeds the cap.
AnnealResult enumerate_ground_state(std::span<const double> eps, double U, int n_atoms,
                                    std::uint64_t cap = 5'000'000);
AnnealResult enumerate_ground_state(const LatticeSpec& spec, int n_atoms,
                                    std::uint64_t cap = 5'000'000);

// Number of compositions C(N+M-1, M-1) as a saturating count.
std::uint64_t composition_count(int n_atoms, int sites);

}  // namespace tofcorr
