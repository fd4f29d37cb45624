#include <cstdlib>

#include "dqlin/errors.hpp"
#include "dqlin/kernels.hpp"

namespace dqlin::kernels {

PreparedSymbol prepare(const GaussPolySymbol& F) {
  PreparedSymbol s;
  const int d = F.dim();
  s.dim = d;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      s.m_re.push_back(F.quadratic()(i, k).real());
      s.m_im.push_back(F.quadratic()(i, k).imag());
    }
    s.b_re.push_back(F.linear()(i).real());
    s.b_im.push_back(F.linear()(i).imag());
  }
  s.c_re = F.constant().real();
  s.c_im = F.constant().imag();
  for (const auto& [m, c] : F.polynomial().sorted_terms()) {
    for (int i = 0; i < d; ++i) s.exponents.push_back(static_cast<std::uint8_t>(m[i]));
    s.coef_re.push_back(c.real());
    s.coef_im.push_back(c.imag());
    s.max_degree = std::max(s.max_degree, m.degree());
  }
  return s;
}

bool avx2_available() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  if (std::getenv("DQLIN_FORCE_SCALAR") != nullptr) return Isa::Scalar;
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

void evaluate_batch(const GaussPolySymbol& F, std::span<const double> points, std::span<Complex> out, Isa isa) {
  const auto d = static_cast<std::size_t>(F.dim());
  if (points.size() % d != 0) throw DimensionError("point buffer is not a multiple of the dimension");
  const std::size_t count = points.size() / d;
  if (out.size() < count) throw DimensionError("output buffer too small");
  const PreparedSymbol s = prepare(F);
  if (isa == Isa::Avx2 && avx2_available())
    evaluate_avx2(s, points.data(), count, out.data());
  else
    evaluate_scalar(s, points.data(), count, out.data());
}

}  // namespace dqlin::kernels
