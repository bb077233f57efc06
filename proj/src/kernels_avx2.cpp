// AVX2+FMA variants of the arithmetic kernels. Compiled with -mavx2 -mfma and
// only ever called behind the runtime CPU check in kernels.cpp.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cstddef>

namespace tofcorr::kernels::avx2 {

void phasor_poly(const double* cre, const double* cim, std::size_t m,
                 const double* zre, const double* zim, std::size_t n,
                 double* sre, double* sim) {
  std::size_t g = 0;
  for (; g + 4 <= n; g += 4) {
    const __m256d zr = _mm256_loadu_pd(zre + g);
    const __m256d zi = _mm256_loadu_pd(zim + g);
    __m256d ar = _mm256_setzero_pd();
    __m256d ai = _mm256_setzero_pd();
    for (std::size_t j = m; j-- > 0;) {
      const __m256d tr = _mm256_add_pd(ar, _mm256_set1_pd(cre[j]));
      const __m256d ti = cim ? _mm256_add_pd(ai, _mm256_set1_pd(cim[j])) : ai;
      ar = _mm256_fmsub_pd(tr, zr, _mm256_mul_pd(ti, zi));
      ai = _mm256_fmadd_pd(tr, zi, _mm256_mul_pd(ti, zr));
    }
    _mm256_storeu_pd(sre + g, ar);
    _mm256_storeu_pd(sim + g, ai);
  }
  // scalar tail
  for (; g < n; ++g) {
    const double zr = zre[g];
    const double zi = zim[g];
    double ar = 0.0;
    double ai = 0.0;
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
  std::size_t g = 0;
  for (; g + 4 <= n; g += 4) {
    const __m256d r = _mm256_loadu_pd(re + g);
    const __m256d i = _mm256_loadu_pd(im + g);
    _mm256_storeu_pd(out + g, _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i)));
  }
  for (; g < n; ++g) out[g] = re[g] * re[g] + im[g] * im[g];
}

namespace {
double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t g = 0;
  for (; g + 4 <= n; g += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + g), _mm256_loadu_pd(b + g), acc);
  }
  double tail = 0.0;
  for (; g < n; ++g) tail += a[g] * b[g];
  return hsum(acc) + tail;
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t g = 0;
  for (; g + 4 <= n; g += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + g));
  double tail = 0.0;
  for (; g < n; ++g) tail += a[g];
  return hsum(acc) + tail;
}

}  // namespace tofcorr::kernels::avx2

#endif  // __x86_64__
