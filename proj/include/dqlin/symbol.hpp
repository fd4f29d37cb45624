#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dqlin/polynomial.hpp"
#include "dqlin/types.hpp"

namespace dqlin {

/// Phase-space function x -> exp(-1/2 x^T M x + b^T x + c) * P(x).
///
/// M is kept exactly symmetric. A symbol with M = 0 and b = 0 is called
/// polynomial; the star product has a terminating series against such symbols.
class GaussPolySymbol {
 public:
  explicit GaussPolySymbol(int dim = 2);
  GaussPolySymbol(CMat M, CVec b, Complex c, Polynomial P);

  int dim() const { return dim_; }
  const CMat& quadratic() const { return M_; }
  const CVec& linear() const { return b_; }
  Complex constant() const { return c_; }
  const Polynomial& polynomial() const { return P_; }

  bool has_trivial_exponent() const;
  bool is_zero() const { return P_.is_zero(); }

  /// Copy with a new polynomial part and the same exponent.
  GaussPolySymbol with_polynomial(Polynomial P) const;
  /// Copy with the constant exponent folded into the polynomial (c = 0).
  GaussPolySymbol normalized_constant() const;

  Complex operator()(std::span<const double> x) const;
  Complex operator()(std::span<const Complex> x) const;

 private:
  int dim_;
  CMat M_;
  CVec b_;
  Complex c_;
  Polynomial P_;
};

using Term = Polynomial::Term;

GaussPolySymbol make_polynomial(int dim, const std::vector<Term>& terms);
GaussPolySymbol make_polynomial(Polynomial P);
GaussPolySymbol make_gaussian(const CMat& M, const CVec& b, Complex c);
GaussPolySymbol make_constant(int dim, Complex c);
/// Coordinate function x_k.
GaussPolySymbol coordinate(int dim, int k);
/// Quadratic polynomial 1/2 x^T S x + g^T x + c0.
GaussPolySymbol quadratic_polynomial(const Mat& S, const Vec& g, double c0 = 0.0);

/// Exponents equal within `tol` (entrywise, constant part ignored).
bool same_exponent(const GaussPolySymbol& F, const GaussPolySymbol& G, double tol = 0.0);

/// Sum of two symbols. The quadratic and linear exponents must agree; differing
/// constants are absorbed into the polynomial part.
GaussPolySymbol add(const GaussPolySymbol& F, const GaussPolySymbol& G);
GaussPolySymbol subtract(const GaussPolySymbol& F, const GaussPolySymbol& G);
GaussPolySymbol scale(const GaussPolySymbol& F, Complex s);
GaussPolySymbol pointwise_product(const GaussPolySymbol& F, const GaussPolySymbol& G);
GaussPolySymbol differentiate(const GaussPolySymbol& F, int direction);
GaussPolySymbol conjugate(const GaussPolySymbol& F);

/// Polynomial part of the derivative in direction k, for the same exponent.
Polynomial exponent_derivative(const GaussPolySymbol& F, const Polynomial& Q, int k);

/// x -> F(S (x - d)) for square S.
GaussPolySymbol affine_pullback(const GaussPolySymbol& F, const Mat& S, const Vec& d);
/// x -> F(S x) for S of shape F.dim() x out_dim.
GaussPolySymbol linear_substitution(const GaussPolySymbol& F, const Mat& S);

/// Coefficient max norm of the symbol data, with exp(c) folded into P.
double symbol_norm(const GaussPolySymbol& F);
/// Largest coefficient of exp(c) P; zero exactly when the symbol is.
double coefficient_norm(const GaussPolySymbol& F);
/// max(|dM|, |db|, max coefficient difference of exp(c) P).
double symbol_distance(const GaussPolySymbol& F, const GaussPolySymbol& G);
/// symbol_distance scaled by max(symbol_norm(G), tiny).
double relative_distance(const GaussPolySymbol& F, const GaussPolySymbol& G);

struct ComplexQuadraticForm {
  CMat matrix;
  CVec shift;
  Complex offset{};
};

/// Integral over R^d of exp(-1/2 x^T M x + b^T x + c) P(x).
Complex gaussian_moment(const ComplexQuadraticForm& Q, const Polynomial& P);
Complex integrate(const GaussPolySymbol& F);

}  // namespace dqlin
