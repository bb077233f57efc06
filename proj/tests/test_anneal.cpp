#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "tofcorr/anneal.hpp"
#include "tofcorr/errors.hpp"
#include "tofcorr/rng.hpp"

using namespace tofcorr;

TEST_CASE("propose_move draws valid occupied-source transfers") {
  Rng rng(42);
  const std::vector<int> single{3, 0};
  for (int i = 0; i < 20; ++i) {
    const auto [src, dst] = propose_move(single, rng);
    CHECK(src == 0);
    CHECK(dst == 1);
  }

  const std::vector<int> uniform{1, 1, 1};
  int seen[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) {
    const auto [src, dst] = propose_move(uniform, rng);
    CHECK(src != dst);
    CHECK(uniform[static_cast<std::size_t>(src)] > 0);
    ++seen[src];
  }
  for (int count : seen) CHECK(count > 800);  // roughly uniform over sources

  CHECK_THROWS_AS(propose_move(std::vector<int>{0, 0}, rng), input_error);
}

TEST_CASE("energy_delta equals the literal energy difference") {
  const std::vector<double> eps0{0.0, 0.0};
  CHECK(energy_delta(std::vector<int>{2, 0}, eps0, 1.0, 0, 1) == doctest::Approx(-1.0));
  CHECK(energy_delta(std::vector<int>{1, 0}, std::vector<double>{0.0, 5.0}, 0.0, 0, 1) ==
        doctest::Approx(5.0));
  // balanced: moving between equally filled sites always costs U
  CHECK(energy_delta(std::vector<int>{2, 2, 2}, std::vector<double>{0, 0, 0}, 3.7, 0, 2) ==
        doctest::Approx(3.7));
  CHECK_THROWS_AS(energy_delta(std::vector<int>{0, 1}, eps0, 1.0, 0, 1), input_error);
}

TEST_CASE("energy_delta: exact identity on 1000 random integer instances") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_index(6));
    std::vector<int> occ(static_cast<std::size_t>(m));
    std::vector<double> eps(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      occ[static_cast<std::size_t>(j)] = static_cast<int>(rng.next_index(5));
      eps[static_cast<std::size_t>(j)] = static_cast<double>(rng.next_index(9));  // integers: exact fp
    }
    occ[static_cast<std::size_t>(rng.next_index(static_cast<std::uint64_t>(m)))] += 1;
    const double u_int = static_cast<double>(rng.next_index(7));
    Rng mover(trial + 1000u);
    const auto [src, dst] = propose_move(occ, mover);
    const double before = fock_energy(occ, eps, u_int);
    std::vector<int> moved = occ;
    --moved[static_cast<std::size_t>(src)];
    ++moved[static_cast<std::size_t>(dst)];
    const double after = fock_energy(moved, eps, u_int);
    CHECK(energy_delta(occ, eps, u_int, src, dst) == after - before);  // bitwise
  }
}

TEST_CASE("metropolis_accept is greedy in the zero-temperature limit") {
  CHECK(metropolis_accept(-0.5, 1.0, 0.999));
  CHECK(metropolis_accept(0.0, 0.0, 0.999));
  CHECK_FALSE(metropolis_accept(1e-9, 0.0, 0.0));
  CHECK_FALSE(metropolis_accept(0.5, 1e-300, 0.0));
  // finite temperature accepts uphill with the Boltzmann factor
  CHECK(metropolis_accept(1.0, 1.0, 0.3));
  CHECK_FALSE(metropolis_accept(1.0, 1.0, 0.5));
}

namespace {

AnnealSchedule test_schedule(std::uint64_t seed, int restarts = 4) {
  AnnealSchedule s;
  s.stages = 200;
  s.sweeps_per_stage = 20;
  s.restarts = restarts;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("anneal finds the balanced minimum for flat offsets") {
  LatticeSpec spec;
  spec.sites = 4;
  spec.U = 2.0;
  spec.V2 = 0.0;
  spec.kappa_ratio = 0.5;
  const int atoms = 8;
  const AnnealResult res = anneal(spec, atoms, test_schedule(3));
  for (int j = 0; j < 4; ++j) CHECK(res.config[j] == 2);
  // M * U/2 * (N/M)(N/M - 1)
  CHECK(res.energy == doctest::Approx(4.0 * 1.0 * 2.0 * 1.0));
  const AnnealResult oracle = enumerate_ground_state(spec, atoms);
  CHECK(res.energy == doctest::Approx(oracle.energy));
}

TEST_CASE("anneal with U = 0 stacks everything on the lowest offset") {
  const std::vector<double> eps{3.0, 0.25, 1.5, 2.0};
  const AnnealResult res = anneal(eps, 0.0, 7, test_schedule(5));
  CHECK(res.config[1] == 7);
  CHECK(res.energy == doctest::Approx(7 * 0.25));
}

TEST_CASE("anneal matches exhaustive enumeration on a two-site ladder") {
  for (double gap : {0.4, 1.0, 2.5, 7.0}) {
    const std::vector<double> eps{0.0, gap};
    const AnnealResult got = anneal(eps, 1.0, 9, test_schedule(11));
    const AnnealResult want = enumerate_ground_state(eps, 1.0, 9);
    CHECK(got.energy == doctest::Approx(want.energy).epsilon(1e-12));
  }
}

TEST_CASE("anneal respects the atom-number constraint and reproducibility") {
  LatticeSpec spec;
  spec.sites = 11;
  spec.U = 1.3;
  spec.V2 = 4.0;
  const AnnealResult a = anneal(spec, 23, test_schedule(17));
  const AnnealResult b = anneal(spec, 23, test_schedule(17));
  long long total = 0;
  for (int j = 0; j < spec.sites; ++j) {
    CHECK(a.config[j] >= 0);
    total += a.config[j];
  }
  CHECK(total == 23);
  CHECK(a.config.occupations() == b.config.occupations());  // bit-for-bit per seed
  CHECK(a.energy == b.energy);
  CHECK(a.accepted_moves == b.accepted_moves);
  CHECK(a.proposed_moves == b.proposed_moves);

  const AnnealResult c = anneal(spec, 23, test_schedule(18));
  CHECK(c.proposed_moves == a.proposed_moves);

  // stored energy is the from-scratch recomputation
  const auto eps = site_energies(spec);
  CHECK(a.energy == doctest::Approx(fock_energy(a.config, eps, spec.U)).epsilon(1e-12));
}

TEST_CASE("anneal handles degenerate instances") {
  const std::vector<double> one{0.7};
  const AnnealResult single = anneal(one, 2.0, 5, test_schedule(1));
  CHECK(single.config[0] == 5);
  const AnnealResult empty = anneal(std::vector<double>{0.1, 0.2}, 1.0, 0, test_schedule(1));
  CHECK(empty.config.occupations() == std::vector<int>{0, 0});
  CHECK(empty.energy == 0.0);
}

TEST_CASE("anneal matches the convex greedy optimum at desk scale") {
  LatticeSpec spec;
  spec.sites = 130;
  spec.U = 1.0;
  spec.V2 = 9.9;
  AnnealSchedule sched;  // production defaults
  sched.seed = 1;
  sched.restarts = 8;
  const AnnealResult res = anneal(spec, 170, sched);
  const auto eps = site_energies(spec);
  const auto greedy = testsupport::greedy_ground_state(eps, spec.U, 170);
  const double greedy_energy = fock_energy(greedy, eps, spec.U);
  CHECK(res.energy >= greedy_energy - 1e-9);
  CHECK(res.energy == doctest::Approx(greedy_energy).epsilon(1e-9));
}

TEST_CASE("enumerate_ground_state: closed examples and tie-breaking") {
  const AnnealResult two = enumerate_ground_state(std::vector<double>{0.0, 0.0}, 1.0, 2);
  CHECK(two.config.occupations() == std::vector<int>{1, 1});
  CHECK(two.energy == 0.0);

  const AnnealResult one_site = enumerate_ground_state(std::vector<double>{0.4}, 2.0, 6);
  CHECK(one_site.config.occupations() == std::vector<int>{6});

  // 3U = 3 beats the cheapest spread-out option (10 + 1 = 11)
  const AnnealResult stacked =
      enumerate_ground_state(std::vector<double>{0.0, 10.0, 10.0}, 1.0, 3);
  CHECK(stacked.config.occupations() == std::vector<int>{3, 0, 0});
  CHECK(stacked.energy == doctest::Approx(3.0));

  // degenerate flat landscape at U = 0: lexicographically smallest wins
  const AnnealResult tie = enumerate_ground_state(std::vector<double>{0.0, 0.0, 0.0}, 0.0, 2);
  CHECK(tie.config.occupations() == std::vector<int>{0, 0, 2});
}

TEST_CASE("enumerate_ground_state refuses oversized instances, naming the cap") {
  try {
    enumerate_ground_state(std::vector<double>(40, 0.0), 1.0, 40, 1000);
    FAIL("expected cap_exceeded");
  } catch (const cap_exceeded& e) {
    CHECK(e.required_cap == composition_count(40, 40));
    CHECK(std::string(e.what()).find(std::to_string(e.required_cap)) != std::string::npos);
  }
}

TEST_CASE("anneal attains the exhaustive optimum on random small instances") {
  int exact = 0;
  const int trials = 40;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(0xabcdULL, static_cast<std::uint64_t>(i)));
    const int m = 2 + static_cast<int>(rng.next_index(5));
    const int n = 2 + static_cast<int>(rng.next_index(7));
    LatticeSpec spec;
    spec.sites = m;
    spec.U = 10.0 * rng.next_double();
    spec.V2 = 10.0 * rng.next_double();
    const AnnealResult got = anneal(spec, n, test_schedule(1000 + i, 8));
    const AnnealResult want = enumerate_ground_state(spec, n);
    CHECK(got.energy >= want.energy - 1e-9);  // never undercuts the oracle
    if (std::abs(got.energy - want.energy) <= 1e-9) ++exact;
  }
  CHECK(exact >= trials * 95 / 100);
}
