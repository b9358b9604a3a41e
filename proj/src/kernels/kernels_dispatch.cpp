#include <cstdlib>
#include <string>

#include "eigencert/error.hpp"
#include "eigencert/kernels.hpp"

namespace eigencert::kernels {

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(EIGENCERT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(EIGENCERT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Backend detect() noexcept {
  if (const char* env = std::getenv("EIGENCERT_SIMD")) {
    if (std::string_view(env) == "scalar") return Backend::scalar;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

void require(Backend b) {
  if (!backend_available(b))
    throw InvalidArgument("SIMD backend '" + std::string(backend_name(b)) + "' is not available");
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("kernel operand length mismatch");
}

}  // namespace

Backend active_backend() noexcept {
  static const Backend b = detect();
  return b;
}

double dot(Backend b, std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size());
  require(b);
  switch (b) {
#if defined(EIGENCERT_HAVE_AVX2)
    case Backend::avx2: return avx2::dot(x.data(), y.data(), x.size());
#endif
#if defined(EIGENCERT_HAVE_NEON)
    case Backend::neon: return neon::dot(x.data(), y.data(), x.size());
#endif
    default: return scalar::dot(x.data(), y.data(), x.size());
  }
}

void axpy(Backend b, double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  require(b);
  switch (b) {
#if defined(EIGENCERT_HAVE_AVX2)
    case Backend::avx2: avx2::axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
#if defined(EIGENCERT_HAVE_NEON)
    case Backend::neon: neon::axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
    default: scalar::axpy(alpha, x.data(), y.data(), x.size()); return;
  }
}

void csr_spmv(Backend b, const CsrView& a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), static_cast<std::size_t>(a.cols));
  check_sizes(y.size(), static_cast<std::size_t>(a.rows));
  if (a.row_ptr.size() != static_cast<std::size_t>(a.rows) + 1)
    throw InvalidArgument("CSR row pointer has wrong length");
  require(b);
  switch (b) {
#if defined(EIGENCERT_HAVE_AVX2)
    case Backend::avx2: avx2::csr_spmv(a, x.data(), y.data()); return;
#endif
#if defined(EIGENCERT_HAVE_NEON)
    case Backend::neon: neon::csr_spmv(a, x.data(), y.data()); return;
#endif
    default: scalar::csr_spmv(a, x.data(), y.data()); return;
  }
}

double dot(std::span<const double> x, std::span<const double> y) { return dot(active_backend(), x, y); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  axpy(active_backend(), alpha, x, y);
}

void csr_spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  csr_spmv(active_backend(), a, x, y);
}

}  // namespace eigencert::kernels
