#include "dqlin/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dqlin/errors.hpp"

namespace dqlin {

namespace {

void require_same_dim(const GaussPolySymbol& F, const GaussPolySymbol& G) {
  if (F.dim() != G.dim()) throw DimensionError("symbol dimension mismatch");
}

CMat symmetrize(const CMat& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

GaussPolySymbol::GaussPolySymbol(int dim)
    : dim_(dim), M_(CMat::Zero(dim, dim)), b_(CVec::Zero(dim)), c_(0.0), P_(dim) {
  if (dim <= 0 || dim > kMaxVars / 2) throw DimensionError("unsupported symbol dimension");
}

GaussPolySymbol::GaussPolySymbol(CMat M, CVec b, Complex c, Polynomial P)
    : dim_(static_cast<int>(M.rows())), M_(symmetrize(M)), b_(std::move(b)), c_(c), P_(std::move(P)) {
  if (dim_ <= 0 || dim_ > kMaxVars / 2) throw DimensionError("unsupported symbol dimension");
  if (M_.cols() != dim_ || b_.size() != dim_ || P_.nvars() != dim_)
    throw DimensionError("symbol components disagree on dimension");
}

bool GaussPolySymbol::has_trivial_exponent() const { return M_.isZero(0.0) && b_.isZero(0.0); }

GaussPolySymbol GaussPolySymbol::with_polynomial(Polynomial P) const {
  return GaussPolySymbol(M_, b_, c_, std::move(P));
}

GaussPolySymbol GaussPolySymbol::normalized_constant() const {
  if (c_ == Complex{}) return *this;
  return GaussPolySymbol(M_, b_, 0.0, P_ * std::exp(c_));
}

namespace {

template <class T>
Complex eval_symbol(const GaussPolySymbol& F, std::span<const T> x) {
  const int d = F.dim();
  if (static_cast<int>(x.size()) != d) throw DimensionError("evaluation point has wrong dimension");
  CVec xv(d);
  for (int i = 0; i < d; ++i) xv(i) = Complex(x[static_cast<std::size_t>(i)]);
  const Complex e = -0.5 * (xv.transpose() * F.quadratic() * xv)(0, 0) + (F.linear().transpose() * xv)(0, 0) +
      F.constant();
  return std::exp(e) * F.polynomial().evaluate(x);
}

}  // namespace

Complex GaussPolySymbol::operator()(std::span<const double> x) const { return eval_symbol(*this, x); }
Complex GaussPolySymbol::operator()(std::span<const Complex> x) const { return eval_symbol(*this, x); }

GaussPolySymbol make_polynomial(int dim, const std::vector<Term>& terms) {
  return make_polynomial(Polynomial::from_terms(dim, terms));
}

GaussPolySymbol make_polynomial(Polynomial P) {
  const int d = P.nvars();
  return GaussPolySymbol(CMat::Zero(d, d), CVec::Zero(d), 0.0, std::move(P));
}

GaussPolySymbol make_gaussian(const CMat& M, const CVec& b, Complex c) {
  const int d = static_cast<int>(M.rows());
  return GaussPolySymbol(M, b, c, Polynomial::constant(d, 1.0));
}

GaussPolySymbol make_constant(int dim, Complex c) { return make_polynomial(Polynomial::constant(dim, c)); }

GaussPolySymbol coordinate(int dim, int k) { return make_polynomial(Polynomial::variable(dim, k)); }

GaussPolySymbol quadratic_polynomial(const Mat& S, const Vec& g, double c0) {
  const int d = static_cast<int>(S.rows());
  Polynomial P(d);
  for (int i = 0; i < d; ++i) {
    P.add_term(MultiIndex::unit(i) + MultiIndex::unit(i), 0.5 * S(i, i));
    for (int j = i + 1; j < d; ++j)
      P.add_term(MultiIndex::unit(i) + MultiIndex::unit(j), 0.5 * (S(i, j) + S(j, i)));
    P.add_term(MultiIndex::unit(i), g(i));
  }
  P.add_term(MultiIndex{}, c0);
  return make_polynomial(std::move(P));
}

bool same_exponent(const GaussPolySymbol& F, const GaussPolySymbol& G, double tol) {
  if (F.dim() != G.dim()) return false;
  return (F.quadratic() - G.quadratic()).cwiseAbs().maxCoeff() <= tol &&
         (F.linear() - G.linear()).cwiseAbs().maxCoeff() <= tol;
}

GaussPolySymbol add(const GaussPolySymbol& F, const GaussPolySymbol& G) {
  require_same_dim(F, G);
  if (F.is_zero()) return G;
  if (G.is_zero()) return F;
  if (!same_exponent(F, G)) throw StrategyError("sum of symbols with different Gaussian exponents");
  // keep the constant with the larger real part to avoid overflow in exp
  const Complex c = std::real(F.constant()) >= std::real(G.constant()) ? F.constant() : G.constant();
  Polynomial P = F.polynomial() * std::exp(F.constant() - c);
  P += G.polynomial() * std::exp(G.constant() - c);
  return GaussPolySymbol(F.quadratic(), F.linear(), c, std::move(P));
}

GaussPolySymbol subtract(const GaussPolySymbol& F, const GaussPolySymbol& G) { return add(F, scale(G, -1.0)); }

GaussPolySymbol scale(const GaussPolySymbol& F, Complex s) {
  return F.with_polynomial(F.polynomial() * s);
}

GaussPolySymbol pointwise_product(const GaussPolySymbol& F, const GaussPolySymbol& G) {
  require_same_dim(F, G);
  return GaussPolySymbol(F.quadratic() + G.quadratic(), F.linear() + G.linear(),
                         F.constant() + G.constant(), F.polynomial() * G.polynomial());
}

Polynomial exponent_derivative(const GaussPolySymbol& F, const Polynomial& Q, int k) {
  const int d = F.dim();
  if (k < 0 || k >= d) throw DimensionError("derivative direction out of range");
  // d_k (e^E Q) = e^E ((b_k - (M x)_k) Q + d_k Q)
  CVec a = -F.quadratic().row(k).transpose();
  Polynomial r = multiply_affine(Q, a, F.linear()(k));
  r += Q.derivative(k);
  return r;
}

GaussPolySymbol differentiate(const GaussPolySymbol& F, int direction) {
  return F.with_polynomial(exponent_derivative(F, F.polynomial(), direction));
}

GaussPolySymbol conjugate(const GaussPolySymbol& F) {
  return GaussPolySymbol(F.quadratic().conjugate(), F.linear().conjugate(), std::conj(F.constant()),
                         F.polynomial().conjugate());
}

GaussPolySymbol affine_pullback(const GaussPolySymbol& F, const Mat& S, const Vec& d) {
  const int n = F.dim();
  if (S.rows() != n || S.cols() != n || d.size() != n) throw DimensionError("pullback shape mismatch");
  // y = S x - S d =: S x + s
  const CMat Sc = S.cast<Complex>();
  const CVec s = -(Sc * d.cast<Complex>());
  const CMat& M = F.quadratic();
  const CVec& b = F.linear();
  CMat M2 = Sc.transpose() * M * Sc;
  CVec b2 = Sc.transpose() * (b - M * s);
  Complex c2 = F.constant() - 0.5 * (s.transpose() * M * s)(0, 0) + (b.transpose() * s)(0, 0);
  Polynomial P2 = F.polynomial().compose_affine(Sc, s);
  return GaussPolySymbol(M2, b2, c2, std::move(P2));
}

GaussPolySymbol linear_substitution(const GaussPolySymbol& F, const Mat& S) {
  if (S.rows() != F.dim()) throw DimensionError("substitution shape mismatch");
  const CMat Sc = S.cast<Complex>();
  return GaussPolySymbol(Sc.transpose() * F.quadratic() * Sc, Sc.transpose() * F.linear(), F.constant(),
                         F.polynomial().compose_affine(Sc, CVec::Zero(F.dim())));
}

double symbol_norm(const GaussPolySymbol& F) {
  return std::max({F.quadratic().cwiseAbs().maxCoeff(), F.linear().cwiseAbs().maxCoeff(),
                   F.polynomial().max_abs() * std::exp(std::real(F.constant()))});
}

double coefficient_norm(const GaussPolySymbol& F) {
  return F.polynomial().max_abs() * std::exp(std::real(F.constant()));
}

double symbol_distance(const GaussPolySymbol& F, const GaussPolySymbol& G) {
  require_same_dim(F, G);
  const double dM = (F.quadratic() - G.quadratic()).cwiseAbs().maxCoeff();
  const double db = (F.linear() - G.linear()).cwiseAbs().maxCoeff();
  Polynomial diff = F.polynomial() * std::exp(F.constant());
  diff -= G.polynomial() * std::exp(G.constant());
  return std::max({dM, db, diff.max_abs()});
}

double relative_distance(const GaussPolySymbol& F, const GaussPolySymbol& G) {
  return symbol_distance(F, G) / std::max(symbol_norm(G), 1e-300);
}

Complex gaussian_moment(const ComplexQuadraticForm& Q, const Polynomial& P) {
  const int d = static_cast<int>(Q.matrix.rows());
  if (Q.matrix.cols() != d || Q.shift.size() != d || P.nvars() != d)
    throw DimensionError("moment data has inconsistent dimension");
  if (P.is_zero()) return 0.0;
  const CMat M = symmetrize(Q.matrix);
  const Mat re = M.real();
  Eigen::SelfAdjointEigenSolver<Mat> es(re, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw DivergentIntegral("real part of the quadratic exponent is not positive definite");

  Eigen::PartialPivLU<CMat> lu(M);
  const CMat cov = lu.inverse();
  const CVec mu = lu.solve(Q.shift);

  // det(M)^{-1/2} through the eigenvalues of M; each has positive real part
  // when Re M > 0, so the principal root is the analytic continuation.
  Eigen::ComplexEigenSolver<CMat> ces(M, false);
  Complex root{1.0};
  for (int k = 0; k < d; ++k) root /= std::sqrt(ces.eigenvalues()(k));

  const Complex expo = 0.5 * (Q.shift.transpose() * mu)(0, 0) + Q.offset;
  const Complex wick = P.heat(cov).evaluate(std::span<const Complex>(mu.data(), static_cast<std::size_t>(d)));
  return std::pow(2.0 * std::numbers::pi, 0.5 * d) * root * std::exp(expo) * wick;
}

Complex integrate(const GaussPolySymbol& F) {
  return gaussian_moment({F.quadratic(), F.linear(), F.constant()}, F.polynomial());
}

}  // namespace dqlin
