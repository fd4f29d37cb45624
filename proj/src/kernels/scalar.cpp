#include <cmath>

#include "dqlin/kernels.hpp"

namespace dqlin::kernels {

void evaluate_scalar(const PreparedSymbol& s, const double* points, std::size_t count, Complex* out) {
  const int d = s.dim;
  const int stride = s.max_degree + 1;
  std::vector<double> pw(static_cast<std::size_t>(d * stride));
  for (std::size_t n = 0; n < count; ++n) {
    const double* x = points + n * static_cast<std::size_t>(d);
    double q_re = s.c_re, q_im = s.c_im;
    for (int i = 0; i < d; ++i) {
      double row_re = 0.0, row_im = 0.0;
      for (int k = 0; k < d; ++k) {
        row_re += s.m_re[i * d + k] * x[k];
        row_im += s.m_im[i * d + k] * x[k];
      }
      q_re += x[i] * (s.b_re[i] - 0.5 * row_re);
      q_im += x[i] * (s.b_im[i] - 0.5 * row_im);
    }
    for (int i = 0; i < d; ++i) {
      double acc = 1.0;
      for (int e = 0; e < stride; ++e) {
        pw[i * stride + e] = acc;
        acc *= x[i];
      }
    }
    double p_re = 0.0, p_im = 0.0;
    for (std::size_t t = 0; t < s.terms(); ++t) {
      double mono = 1.0;
      for (int i = 0; i < d; ++i) {
        const int e = s.exponents[t * d + i];
        if (e) mono *= pw[i * stride + e];
      }
      p_re += s.coef_re[t] * mono;
      p_im += s.coef_im[t] * mono;
    }
    out[n] = std::exp(Complex(q_re, q_im)) * Complex(p_re, p_im);
  }
}

}  // namespace dqlin::kernels
