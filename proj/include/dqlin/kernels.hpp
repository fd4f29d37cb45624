#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dqlin/symbol.hpp"
#include "dqlin/types.hpp"

namespace dqlin::kernels {

/// Flat copy of a symbol's data for batched evaluation.
struct PreparedSymbol {
  int dim = 0;
  int max_degree = 0;
  std::vector<double> m_re, m_im;  // d*d, row-major
  std::vector<double> b_re, b_im;
  double c_re = 0.0, c_im = 0.0;
  std::vector<std::uint8_t> exponents;  // terms x d
  std::vector<double> coef_re, coef_im;
  std::size_t terms() const { return coef_re.size(); }
};

PreparedSymbol prepare(const GaussPolySymbol& F);

enum class Isa { Scalar, Avx2 };

/// Best instruction set supported by this CPU and build. Setting the
/// environment variable DQLIN_FORCE_SCALAR selects the scalar path.
Isa active_isa();
bool avx2_available();

/// Evaluate at `count` points stored row-major in `points` (count x dim).
void evaluate_scalar(const PreparedSymbol& s, const double* points, std::size_t count, Complex* out);
void evaluate_avx2(const PreparedSymbol& s, const double* points, std::size_t count, Complex* out);

void evaluate_batch(const GaussPolySymbol& F, std::span<const double> points, std::span<Complex> out,
                    Isa isa = active_isa());

}  // namespace dqlin::kernels
