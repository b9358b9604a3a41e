#include <arm_neon.h>

#include "eigencert/kernels.hpp"

namespace eigencert::kernels::neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void csr_spmv(const CsrView& a, const double* x, double* y) {
  for (int r = 0; r < a.rows; ++r) {
    int k = a.row_ptr[r];
    const int end = a.row_ptr[r + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; k + 2 <= end; k += 2) {
      const double g[2] = {x[a.col_idx[k]], x[a.col_idx[k + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(a.values.data() + k), vld1q_f64(g));
    }
    double s = vaddvq_f64(acc);
    for (; k < end; ++k) s += a.values[k] * x[a.col_idx[k]];
    y[r] = s;
  }
}

}  // namespace eigencert::kernels::neon
