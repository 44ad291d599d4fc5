#pragma once

// Data-parallel inner loops shared by the eigensolver, the proximal maps and
// the splitting solvers. Every kernel has a portable scalar reference
// implementation; an AVX2/FMA variant is compiled in a separate translation
// unit and selected at runtime when the CPU supports it.
//
// Set SPCA_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <string_view>

namespace spca::kernels {

struct KernelTable {
  const char* name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(double* x, double* y, std::size_t n, double c, double s);
  // out = sign(in) * max(|in| - t, 0); in and out may alias
  void (*soft_threshold)(const double* in, double* out, std::size_t n, double t);
  // out = a .* b; any pointers may alias
  void (*hadamard)(const double* a, const double* b, double* out, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // sum_i |a[i]|
  double (*sum_abs)(const double* a, std::size_t n);
  // max_i |a[i]|, 0 for n == 0
  double (*max_abs)(const double* a, std::size_t n);
};

const KernelTable& scalar();

// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2();

// Kernel table chosen once per process from the CPU features and the
// SPCA_KERNELS override.
const KernelTable& active();

// Lookup by name ("scalar", "avx2"); nullptr if unavailable.
const KernelTable* by_name(std::string_view name);

}  // namespace spca::kernels
