#include <immintrin.h>

#include <cmath>

#include "dqlin/kernels.hpp"

namespace dqlin::kernels {

// Four points per iteration; the polynomial and quadratic form are evaluated
// in vector registers, the final complex exponential lane by lane.
void evaluate_avx2(const PreparedSymbol& s, const double* points, std::size_t count, Complex* out) {
  const int d = s.dim;
  const int stride = s.max_degree + 1;
  const std::size_t blocks = count / 4;
  // lane-major scratch: slot k holds four doubles
  std::vector<double> pw_buf(4 * static_cast<std::size_t>(d * stride));
  std::vector<double> xs_buf(4 * static_cast<std::size_t>(d));
  auto pw = [&](int k) { return _mm256_loadu_pd(&pw_buf[4 * k]); };
  auto xs = [&](int k) { return _mm256_loadu_pd(&xs_buf[4 * k]); };
  alignas(32) double qr[4], qi[4], pr[4], pi[4];
  const __m256d half = _mm256_set1_pd(0.5);

  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const double* base = points + blk * 4 * static_cast<std::size_t>(d);
    for (int i = 0; i < d; ++i)
      _mm256_storeu_pd(&xs_buf[4 * i], _mm256_set_pd(base[3 * d + i], base[2 * d + i], base[d + i], base[i]));

    __m256d q_re = _mm256_set1_pd(s.c_re);
    __m256d q_im = _mm256_set1_pd(s.c_im);
    for (int i = 0; i < d; ++i) {
      __m256d row_re = _mm256_setzero_pd(), row_im = _mm256_setzero_pd();
      for (int k = 0; k < d; ++k) {
        row_re = _mm256_fmadd_pd(_mm256_set1_pd(s.m_re[i * d + k]), xs(k), row_re);
        row_im = _mm256_fmadd_pd(_mm256_set1_pd(s.m_im[i * d + k]), xs(k), row_im);
      }
      const __m256d lin_re = _mm256_fnmadd_pd(half, row_re, _mm256_set1_pd(s.b_re[i]));
      const __m256d lin_im = _mm256_fnmadd_pd(half, row_im, _mm256_set1_pd(s.b_im[i]));
      q_re = _mm256_fmadd_pd(xs(i), lin_re, q_re);
      q_im = _mm256_fmadd_pd(xs(i), lin_im, q_im);
    }

    for (int i = 0; i < d; ++i) {
      __m256d acc = _mm256_set1_pd(1.0);
      for (int e = 0; e < stride; ++e) {
        _mm256_storeu_pd(&pw_buf[4 * (i * stride + e)], acc);
        acc = _mm256_mul_pd(acc, xs(i));
      }
    }
    __m256d p_re = _mm256_setzero_pd(), p_im = _mm256_setzero_pd();
    for (std::size_t t = 0; t < s.terms(); ++t) {
      __m256d mono = _mm256_set1_pd(1.0);
      for (int i = 0; i < d; ++i) {
        const int e = s.exponents[t * d + i];
        if (e) mono = _mm256_mul_pd(mono, pw(i * stride + e));
      }
      p_re = _mm256_fmadd_pd(_mm256_set1_pd(s.coef_re[t]), mono, p_re);
      p_im = _mm256_fmadd_pd(_mm256_set1_pd(s.coef_im[t]), mono, p_im);
    }

    _mm256_store_pd(qr, q_re);
    _mm256_store_pd(qi, q_im);
    _mm256_store_pd(pr, p_re);
    _mm256_store_pd(pi, p_im);
    for (int lane = 0; lane < 4; ++lane)
      out[blk * 4 + lane] = std::exp(Complex(qr[lane], qi[lane])) * Complex(pr[lane], pi[lane]);
  }
  const std::size_t done = blocks * 4;
  if (done < count) evaluate_scalar(s, points + done * static_cast<std::size_t>(d), count - done, out + done);
}

}  // namespace dqlin::kernels
