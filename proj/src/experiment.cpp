#include "tofcorr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "tofcorr/errors.hpp"
#include "tofcorr/expansion.hpp"

namespace tofcorr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double PeakReport::max_secondary_height() const {
  double h = 0.0;
  for (const auto& p : secondary_peaks) h = std::max(h, p.height);
  return h;
}

PeakReport find_peaks(const CorrelationCurve& curve, double threshold, int sites) {
  const auto& u = curve.u;
  const auto& v = curve.value;
  if (u.size() != v.size() || u.size() < 3)
    throw input_error("find_peaks: curve needs at least three samples");
  const double step = u[1] - u[0];
  if (!(step > 0.0)) throw input_error("find_peaks: grid must be increasing");
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (std::abs((u[i + 1] - u[i]) - step) > 1e-9 * step)
      throw input_error("find_peaks: grid must be uniform");
  }

  PeakReport report;
  report.threshold = threshold;
  report.grid_points = u.size();
  const double window = std::numbers::pi / sites;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;
    const double height = v[i] - 1.0;
    if (!(height > threshold)) continue;
    const double p = std::round(u[i] / kTwoPi);
    const bool main = p >= 1.0 && std::abs(u[i] - kTwoPi * p) < window;
    (main ? report.main_peaks : report.secondary_peaks).push_back(Peak{u[i], height});
  }
  return report;
}

std::vector<double> default_u_grid(std::size_t points, double u_max) {
  if (points < 3) throw input_error("default_u_grid: too few points");
  std::vector<double> u(points);
  const double h = u_max / static_cast<double>(points);
  for (std::size_t i = 0; i < points; ++i) u[i] = h * static_cast<double>(i + 1);
  return u;
}

Figure1Result run_figure1(const LatticeSpec& spec, int n_atoms, const AnnealSchedule& sched,
                          std::span<const double> u_grid, double threshold) {
  Figure1Result out{anneal(spec, n_atoms, sched), {}, {}, {}, {}};
  out.trace_curve = eval_curve(out.ground.config, u_grid, false);
  out.povm_curve = eval_curve(out.ground.config, u_grid, true);
  out.trace_peaks = find_peaks(out.trace_curve, threshold, spec.sites);
  out.povm_peaks = find_peaks(out.povm_curve, threshold, spec.sites);
  return out;
}

std::vector<SweepRow> sweep_v2(const LatticeSpec& base, std::span<const double> v2_list,
                               int n_atoms, const AnnealSchedule& sched,
                               std::span<const double> u_grid, double threshold,
                               std::uint64_t base_seed, int workers) {
  for (std::size_t i = 1; i < v2_list.size(); ++i) {
    if (!(v2_list[i] > v2_list[i - 1]))
      throw input_error("sweep_v2: v2_list must be ascending");
  }

  std::vector<SweepRow> rows(v2_list.size());
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= v2_list.size()) return;
      SweepRow& row = rows[i];
      row.v2 = v2_list[i];
      row.seed = derive_seed(base_seed, i);
      try {
        LatticeSpec spec = base;
        spec.V2 = v2_list[i];
        AnnealSchedule row_sched = sched;
        row_sched.seed = row.seed;
        row_sched.t0 = 0.0;  // re-derive from this row's energy scale
        Figure1Result fig = run_figure1(spec, n_atoms, row_sched, u_grid, threshold);
        row.secondary_trace = fig.trace_peaks.max_secondary_height();
        row.secondary_povm = fig.povm_peaks.max_secondary_height();
        row.energy = fig.ground.energy;
      } catch (const std::exception& e) {
        row.ok = false;
        row.note = e.what();
      }
    }
  };

  const int n_threads = std::clamp<int>(workers, 1, static_cast<int>(v2_list.size()));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return rows;
}

bool VerifyReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void enumerate_fock_states(int sites, int n_atoms, std::vector<int>& occ,
                           const std::function<void(const std::vector<int>&)>& fn, int site = 0,
                           int left = -1) {
  if (left < 0) left = n_atoms;
  if (site == sites - 1) {
    occ[static_cast<std::size_t>(site)] = left;
    fn(occ);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    occ[static_cast<std::size_t>(site)] = k;
    enumerate_fock_states(sites, n_atoms, occ, fn, site + 1, left - k);
  }
}

VerifyCheck check_completeness_exhaustive(int max_sites, int max_atoms) {
  double worst = 0.0;
  for (int m = 1; m <= max_sites; ++m) {
    for (int n = 0; n <= max_atoms; ++n) {
      std::vector<int> occ(static_cast<std::size_t>(m));
      enumerate_fock_states(m, n, occ, [&](const std::vector<int>& o) {
        worst = std::max(worst, std::abs(completeness_residual(FockConfig(o))));
      });
    }
  }
  const bool pass = worst < 1e-12;
  return {"completeness residual, exhaustive M<=" + std::to_string(max_sites) + " N<=" +
              std::to_string(max_atoms),
          pass, "max |residual| = " + fmt(worst)};
}

VerifyCheck check_completeness_mc(long long samples) {
  const FockConfig k(std::vector<int>{2, 1, 1});
  LatticeSpec spec;
  spec.sites = 3;
  const ExpansionContext ctx = ExpansionContext::for_lattice(spec);
  const McEstimate est = povm_mc_oracle(k, ctx, McObservable::unit, 0.0, samples, 91);
  const double dev = std::abs(est.value - 1.0);
  const bool pass = dev <= 3.0 * est.std_error;
  return {"completeness residual, Monte Carlo M=3 N=4", pass,
          "estimate = " + fmt(est.value) + " +- " + fmt(est.std_error) + ", |dev| = " + fmt(dev)};
}

VerifyCheck check_annealer(int instances) {
  std::uint64_t state = 0x5eedULL;
  int exact = 0;
  bool undercut = false;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(0x5eedULL, static_cast<std::uint64_t>(i)));
    const int m = 2 + static_cast<int>(rng.next_index(5));  // 2..6
    const int n = 2 + static_cast<int>(rng.next_index(7));  // 2..8
    LatticeSpec spec;
    spec.sites = m;
    spec.U = 10.0 * rng.next_double();
    spec.V2 = 10.0 * rng.next_double();
    spec.kappa_ratio = 830.0 / 1076.0;
    AnnealSchedule sched;
    sched.stages = 200;
    sched.restarts = 8;
    sched.seed = splitmix64(state);
    const AnnealResult got = anneal(spec, n, sched);
    const AnnealResult want = enumerate_ground_state(spec, n);
    if (got.energy < want.energy - 1e-9) undercut = true;
    if (std::abs(got.energy - want.energy) <= 1e-9 * std::max(1.0, std::abs(want.energy)))
      ++exact;
  }
  const int required = (instances * 95 + 99) / 100;
  const bool pass = !undercut && exact >= required;
  return {"annealer vs exhaustive minimum, " + std::to_string(instances) + " instances", pass,
          std::to_string(exact) + "/" + std::to_string(instances) + " exact" +
              (undercut ? ", UNDERCUT oracle" : "")};
}

VerifyCheck check_integrated_oracle(bool full) {
  std::vector<FockConfig> ks;
  ks.emplace_back(std::vector<int>{2, 1});
  if (full) ks.emplace_back(std::vector<int>{1, 1, 2});
  double worst = 0.0;
  for (const auto& k : ks) {
    LatticeSpec spec;
    spec.sites = k.sites();
    const ExpansionContext ctx = ExpansionContext::for_lattice(spec);
    const double q = fringe_wavevector(ctx);
    const int n_r = full ? 17 : 9;
    for (int i = 0; i < n_r; ++i) {
      const double r = 4.0 * std::numbers::pi / q * i / (n_r - 1);
      const double got = integrated_oracle_trace(k, ctx, r);
      const double want = corr_closed_trace(k, q * r);
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  const bool pass = worst < 1e-2;
  return {"integrated quadrature vs closed trace form", pass,
          "max rel dev = " + fmt(worst)};
}

struct McCorrSetup {
  FockConfig k{std::vector<int>{2, 2, 1}};
  ExpansionContext ctx;
  McCorrSetup() {
    LatticeSpec spec;
    spec.sites = 3;
    ctx = ExpansionContext::for_lattice(spec);
  }
};

VerifyCheck check_mc_density(long long samples) {
  const McCorrSetup s;
  const double x0 = s.ctx.center();
  double worst_sigmas = 0.0;
  for (const double x : {x0, x0 + 0.8 * s.ctx.sigma, x0 - 1.7 * s.ctx.sigma}) {
    const McEstimate est =
        povm_mc_oracle(s.k, s.ctx, McObservable::density, x, samples, 417);
    const double want = density_fock_povm(s.k, s.ctx, x);
    worst_sigmas = std::max(worst_sigmas, std::abs(est.value - want) / est.std_error);
  }
  const bool pass = worst_sigmas <= 3.0;
  return {"Monte Carlo vs closed coherent-measure density, M=3 N=5", pass,
          "worst deviation = " + fmt(worst_sigmas) + " standard errors"};
}

VerifyCheck check_mc_pair(long long samples) {
  const McCorrSetup s;
  const double q = fringe_wavevector(s.ctx);
  double worst_sigmas = 0.0;
  for (const double u : {0.6, 0.5 * std::numbers::pi, 2.0, kTwoPi}) {
    const McEstimate est =
        povm_mc_oracle(s.k, s.ctx, McObservable::pair_correlation, u / q, samples, 811);
    const double want = corr_closed_povm(s.k, u);
    worst_sigmas = std::max(worst_sigmas, std::abs(est.value - want) / est.std_error);
  }
  const bool pass = worst_sigmas <= 3.0;
  return {"Monte Carlo vs closed coherent-measure correlation, M=3 N=5", pass,
          "worst deviation = " + fmt(worst_sigmas) + " standard errors"};
}

// Corrupted cross-sum normalizations must be rejected by the Monte Carlo
// comparison, otherwise the oracle has no discriminating power.
VerifyCheck check_mutation_sensitivity(long long samples) {
  const McCorrSetup s;
  const double q = fringe_wavevector(s.ctx);
  const double u = kTwoPi;  // main peak, where normalization errors are largest
  const McEstimate est =
      povm_mc_oracle(s.k, s.ctx, McObservable::pair_correlation, u / q, samples, 1313);

  const double n = s.k.n_atoms();
  const double m = s.k.sites();
  const double pref = (n - 1.0) / n;
  const double cross = occupation_cross_sum(s.k, u, true);
  const double wrong_n = pref * (1.0 + cross / (n * (n - 1.0)));
  const double wrong_off = pref * (1.0 + cross / ((n + m) * (n + m - 1.0)));

  const double dev_n = std::abs(wrong_n - est.value) / est.std_error;
  const double dev_off = std::abs(wrong_off - est.value) / est.std_error;
  const bool pass = dev_n > 3.0 && dev_off > 3.0;
  return {"corrupted normalization fixtures rejected by Monte Carlo", pass,
          "N(N-1) fixture off by " + fmt(dev_n) + " sigma, (N+M)(N+M-1) fixture off by " +
              fmt(dev_off) + " sigma"};
}

}  // namespace

VerifyReport verify(VerifyLevel level) {
  const bool full = level == VerifyLevel::full;
  const long long samples = full ? 100'000 : 10'000;
  VerifyReport report;
  report.checks.push_back(check_completeness_exhaustive(full ? 4 : 3, full ? 6 : 4));
  report.checks.push_back(check_completeness_mc(samples));
  report.checks.push_back(check_annealer(full ? 100 : 20));
  report.checks.push_back(check_integrated_oracle(full));
  report.checks.push_back(check_mc_density(samples));
  report.checks.push_back(check_mc_pair(samples));
  report.checks.push_back(check_mutation_sensitivity(samples));
  return report;
}

}  // namespace tofcorr
