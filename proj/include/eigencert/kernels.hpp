#pragma once

// Data-parallel inner loops used by the Gram-matrix, residual and eigensolver
// code. Each kernel has a scalar reference implementation plus vectorized
// variants (AVX2+FMA on x86-64, NEON on AArch64). The variant is chosen once at
// runtime from CPU features; EIGENCERT_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace eigencert::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

// Non-owning view of a compressed sparse row matrix (0-based indices).
struct CsrView {
  int rows = 0;
  int cols = 0;
  std::span<const int> row_ptr;  // rows + 1 entries
  std::span<const int> col_idx;
  std::span<const double> values;
};

/// Backend picked for this process (CPU probe + EIGENCERT_SIMD override).
Backend active_backend() noexcept;

/// True when `b` can run on this machine.
bool backend_available(Backend b) noexcept;

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void csr_spmv(const CsrView& a, std::span<const double> x, std::span<double> y);

// Explicit-backend entry points, used by the equivalence tests and benches.
double dot(Backend b, std::span<const double> x, std::span<const double> y);
void axpy(Backend b, double alpha, std::span<const double> x, std::span<double> y);
void csr_spmv(Backend b, const CsrView& a, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace avx2

namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace neon

}  // namespace eigencert::kernels
