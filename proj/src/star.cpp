#include "dqlin/star.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "dqlin/errors.hpp"

namespace dqlin {

namespace {

void check_pi(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi, double hbar) {
  if (F.dim() != G.dim() || Pi.rows() != F.dim() || Pi.cols() != F.dim())
    throw DimensionError("star product operands and Poisson tensor disagree on dimension");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InputError("hbar must be positive and finite");
}

// All multi-indices alpha with alpha <= beta for some beta in the support of R.
std::vector<MultiIndex> lower_set(const Polynomial& R) {
  std::set<MultiIndex> seen;
  const int n = R.nvars();
  for (const auto& [beta, c] : R.terms()) {
    MultiIndex cur;
    // odometer over the box [0, beta]
    while (true) {
      seen.insert(cur);
      int k = 0;
      while (k < n) {
        if (cur[k] < beta[k]) {
          cur.set(k, cur[k] + 1);
          break;
        }
        cur.set(k, 0);
        ++k;
      }
      if (k == n) break;
    }
  }
  std::vector<MultiIndex> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const MultiIndex& a, const MultiIndex& b) { return a.degree() < b.degree(); });
  return out;
}

// Terminating series sum_alpha (d^alpha R / alpha!) V^alpha X where
// V_i = (i hbar / 2) sum_j C_ij d_j acts on the symbol X. R is the polynomial
// part of the operand with trivial exponent. Returns the polynomial part of
// the product; the exponent is that of X.
Polynomial series_product(const Polynomial& R, const GaussPolySymbol& X, const Mat& C, double hbar) {
  const int d = X.dim();
  const Complex half_ih(0.0, 0.5 * hbar);
  std::unordered_map<MultiIndex, Polynomial, MultiIndexHash> memo;
  Polynomial out(d);
  for (const MultiIndex& alpha : lower_set(R)) {
    Polynomial va(d);
    if (alpha.degree() == 0) {
      va = X.polynomial();
    } else {
      int i = 0;
      while (alpha[i] == 0) ++i;
      const Polynomial& prev = memo.at(alpha - MultiIndex::unit(i));
      for (int j = 0; j < d; ++j) {
        if (C(i, j) == 0.0) continue;
        va += exponent_derivative(X, prev, j) * (half_ih * C(i, j));
      }
    }
    Polynomial coeff = R.scaled_derivative(alpha);
    if (!coeff.is_zero() && !va.is_zero()) out += coeff * va;
    memo.emplace(alpha, std::move(va));
  }
  return out;
}

GaussPolySymbol star_series(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi, double hbar) {
  if (F.has_trivial_exponent()) {
    Polynomial P = series_product(F.polynomial(), G, Pi, hbar);
    return GaussPolySymbol(G.quadratic(), G.linear(), G.constant() + F.constant(), std::move(P));
  }
  if (G.has_trivial_exponent()) {
    Polynomial P = series_product(G.polynomial(), F, Pi.transpose(), hbar);
    return GaussPolySymbol(F.quadratic(), F.linear(), F.constant() + G.constant(), std::move(P));
  }
  throw StrategyError("series strategy needs an operand without Gaussian factor");
}

// Gaussian composition law. In the doubled variable X = (u, v) the product is
// exp(1/2 d^T K d) applied to F(u) G(v) restricted to u = v = x, with
// K = (i hbar / 2) [[0, Pi], [Pi^T, 0]]. Completing the square gives the new
// exponent; the polynomial factors become a heat operator with kernel
// G = K (1 + M K)^{-1} followed by an affine substitution.
GaussPolySymbol star_gaussian(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi, double hbar) {
  const int d = F.dim();
  const int D = 2 * d;
  const Complex half_ih(0.0, 0.5 * hbar);

  CMat M = CMat::Zero(D, D);
  M.topLeftCorner(d, d) = F.quadratic();
  M.bottomRightCorner(d, d) = G.quadratic();
  CVec beta(D);
  beta << F.linear(), G.linear();
  CMat K = CMat::Zero(D, D);
  K.topRightCorner(d, d) = half_ih * Pi.cast<Complex>();
  K.bottomLeftCorner(d, d) = half_ih * Pi.transpose().cast<Complex>();

  const CMat I = CMat::Identity(D, D);
  Eigen::ComplexEigenSolver<CMat> ces(K * M, false);
  Complex logdet{};
  for (int k = 0; k < D; ++k) {
    const Complex z = 1.0 + ces.eigenvalues()(k);
    if (std::abs(z) < 1e-12) throw StrategyError("singular intermediate matrix in Gaussian composition");
    if (std::abs(z.imag()) <= 1e-14 * std::abs(z) && z.real() < 0.0)
      throw StrategyError("Gaussian composition hits the branch cut of the determinant root");
    logdet += std::log(z);
  }

  const CMat X = I + M * K;
  Eigen::PartialPivLU<CMat> lu(X.transpose());
  CMat Gk = lu.solve(K).transpose();
  Gk = 0.5 * (Gk + Gk.transpose());

  CMat E = CMat::Zero(D, d);
  E.topRows(d) = CMat::Identity(d, d);
  E.bottomRows(d) = CMat::Identity(d, d);

  const CMat MG = M * Gk;
  const CMat Mout = E.transpose() * (M - MG * M) * E;
  const CVec bout = E.transpose() * (beta - MG * beta);
  const CVec Gb = Gk * beta;
  const Complex cout =
      F.constant() + G.constant() + 0.5 * (beta.transpose() * Gb)(0, 0) - 0.5 * logdet;

  Polynomial P(d);
  const Polynomial& P1 = F.polynomial();
  const Polynomial& P2 = G.polynomial();
  if (P1.degree() == 0 && P2.degree() == 0) {
    P = Polynomial::constant(d, P1.coeff(MultiIndex{}) * P2.coeff(MultiIndex{}));
  } else {
    Polynomial joint = P1.embed(D, 0) * P2.embed(D, d);
    const CMat S = (I - Gk * M) * E;
    P = joint.heat(Gk).compose_affine(S, Gb);
  }
  return GaussPolySymbol(Mout, bout, cout, std::move(P));
}

}  // namespace

GaussPolySymbol moyal_star(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi, double hbar,
                           StarStrategy strategy) {
  check_pi(F, G, Pi, hbar);
  if (F.is_zero() || G.is_zero()) {
    // zero times anything; keep the exponent of the other side for later sums
    return F.is_zero() ? F : G;
  }
  switch (strategy) {
    case StarStrategy::Series:
      return star_series(F, G, Pi, hbar);
    case StarStrategy::GaussianLaw:
      return star_gaussian(F, G, Pi, hbar);
    case StarStrategy::Automatic:
      break;
  }
  if (F.has_trivial_exponent() || G.has_trivial_exponent()) return star_series(F, G, Pi, hbar);
  return star_gaussian(F, G, Pi, hbar);
}

GaussPolySymbol star_commutator(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi,
                                double hbar, StarStrategy strategy) {
  const GaussPolySymbol fg = moyal_star(F, G, Pi, hbar, strategy);
  const GaussPolySymbol gf = moyal_star(G, F, Pi, hbar, strategy);
  if (fg.is_zero()) return scale(gf, -1.0);
  if (gf.is_zero()) return fg;
  // both orders give the same exponent analytically; strategy 2 may differ
  // in the last bits, so compare with a tolerance and reuse one exponent
  const double tol = 1e-12 * std::max(1.0, fg.quadratic().cwiseAbs().maxCoeff() + fg.linear().cwiseAbs().maxCoeff());
  if (!same_exponent(fg, gf, tol)) throw StrategyError("star commutator operands produced different exponents");
  Polynomial P = fg.polynomial();
  P -= gf.polynomial() * std::exp(gf.constant() - fg.constant());
  return fg.with_polynomial(std::move(P));
}

Complex trace_at(const GaussPolySymbol& F, double Delta, double hbar) {
  if (!(Delta > 0.0)) throw InputError("trace weight must be positive");
  if (!(hbar > 0.0)) throw InputError("hbar must be positive");
  const int n = F.dim() / 2;
  return Delta * std::pow(2.0 * std::numbers::pi * hbar, -n) * integrate(F);
}

double density_from_poisson(const Mat& Pi) { return 1.0 / std::sqrt(std::abs(Pi.determinant())); }

}  // namespace dqlin
