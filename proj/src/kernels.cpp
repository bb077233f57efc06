#include "tofcorr/kernels.hpp"

#include <atomic>
#include <optional>

#include "tofcorr/errors.hpp"

namespace tofcorr::kernels {

namespace scalar {

void phasor_poly(const double* cre, const double* cim, std::size_t m,
                 const double* zre, const double* zim, std::size_t n,
                 double* sre, double* sim) {
  for (std::size_t g = 0; g < n; ++g) {
    const double zr = zre[g];
    const double zi = zim[g];
    double ar = 0.0;
    double ai = 0.0;
    // Horner from the highest site index down; the final multiply leaves the
    // polynomial anchored at power 1 (site indices are 1-based).
    for (std::size_t j = m; j-- > 0;) {
      const double tr = ar + cre[j];
      const double ti = ai + (cim ? cim[j] : 0.0);
      ar = tr * zr - ti * zi;
      ai = tr * zi + ti * zr;
    }
    sre[g] = ar;
    sim[g] = ai;
  }
}

void norm_sq(const double* re, const double* im, std::size_t n, double* out) {
  for (std::size_t g = 0; g < n; ++g) out[g] = re[g] * re[g] + im[g] * im[g];
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t g = 0; g < n; ++g) acc += a[g] * b[g];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t g = 0; g < n; ++g) acc += a[g];
  return acc;
}

}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
void phasor_poly(const double* cre, const double* cim, std::size_t m,
                 const double* zre, const double* zim, std::size_t n,
                 double* sre, double* sim);
void norm_sq(const double* re, const double* im, std::size_t n, double* out);
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace avx2
#endif

namespace {

const Table kScalarTable{scalar::phasor_poly, scalar::norm_sq, scalar::dot,
                         scalar::sum, "scalar"};

#if defined(__x86_64__)
const Table kAvx2Table{avx2::phasor_poly, avx2::norm_sq, avx2::dot, avx2::sum,
                       "avx2"};
#endif

std::atomic<const Table*> g_forced{nullptr};

}  // namespace

bool avx2_available() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& table(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return kScalarTable;
    case Backend::avx2:
#if defined(__x86_64__)
      if (avx2_available()) return kAvx2Table;
#endif
      throw input_error("avx2 kernels not available on this CPU");
  }
  throw input_error("unknown kernel backend");
}

const Table& table() {
  if (const Table* forced = g_forced.load(std::memory_order_relaxed)) return *forced;
#if defined(__x86_64__)
  if (avx2_available()) return kAvx2Table;
#endif
  return kScalarTable;
}

void force_backend(Backend backend) {
  g_forced.store(&table(backend), std::memory_order_relaxed);
}

void clear_forced_backend() { g_forced.store(nullptr, std::memory_order_relaxed); }

}  // namespace tofcorr::kernels
