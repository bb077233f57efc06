#pragma once

#include <cstddef>

namespace tofcorr::kernels {

// Data-parallel inner loops used by the curve and density evaluators.
// Scalar reference implementations always exist; an AVX2 variant is picked
// at runtime when the CPU supports it. Both variants are equivalence-tested.
struct Table {
  // s[g] = sum_{j=0..m-1} c[j] * z[g]^(j+1), evaluated by Horner's rule in
  // the complex unit phasor z[g]. Split re/im layout.
  void (*phasor_poly)(const double* cre, const double* cim, std::size_t m,
                      const double* zre, const double* zim, std::size_t n,
                      double* sre, double* sim);
  // out[g] = re[g]^2 + im[g]^2
  void (*norm_sq)(const double* re, const double* im, std::size_t n, double* out);
  // sum_g a[g] * b[g]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_g a[g]
  double (*sum)(const double* a, std::size_t n);

  const char* name;
};

enum class Backend { scalar, avx2 };

bool avx2_available();

// Table for an explicit backend; throws input_error if unavailable.
const Table& table(Backend backend);

// Active table: AVX2 when available unless overridden by force_backend().
const Table& table();

// Test hook. Pass avx2 only when avx2_available().
void force_backend(Backend backend);
void clear_forced_backend();

}  // namespace tofcorr::kernels
