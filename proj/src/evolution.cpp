#include "dqlin/evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dqlin/errors.hpp"
#include "dqlin/star.hpp"
#include "dqlin/states.hpp"

namespace dqlin {

GaussPolySymbol evolve_state(const GaussPolySymbol& rho0, const FlowSolution& flow, double t) {
  if (rho0.dim() != flow.dim()) throw DimensionError("state and flow dimensions differ");
  const FlowSample s = flow.at(t);
  return affine_pullback(rho0, s.Lambda, s.v);
}

EvolvedState::EvolvedState(GaussPolySymbol rho0, std::shared_ptr<const FlowSolution> flow)
    : rho0_(std::move(rho0)), flow_(std::move(flow)) {
  if (rho0_.dim() != flow_->dim()) throw DimensionError("state and flow dimensions differ");
}

GaussPolySymbol EvolvedState::at(double t) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
  }
  GaussPolySymbol r = evolve_state(rho0_, *flow_, t);
  std::lock_guard lock(mutex_);
  return cache_.try_emplace(t, std::move(r)).first->second;
}

Complex expectation_value(const GaussPolySymbol& F, const EvolvedState& state, double t,
                          const SymplecticStructure& ss, double hbar, ExpectationRoute route) {
  if (F.dim() != ss.dim()) throw DimensionError("observable has wrong dimension");
  switch (route) {
    case ExpectationRoute::Transported: {
      const FlowSample s = state.flow().at(t);
      // F(Gamma y + v) = F(Gamma (y + Lambda v))
      const GaussPolySymbol Ft = affine_pullback(F, s.Gamma, -(s.Lambda * s.v));
      return trace_at(moyal_star(Ft, state.initial(), ss.pi(0.0), hbar), ss.delta(0.0), hbar);
    }
    case ExpectationRoute::Direct:
      return trace_at(moyal_star(F, state.at(t), ss.pi(t), hbar), ss.delta(t), hbar);
    case ExpectationRoute::Pointwise:
      return trace_at(pointwise_product(F, state.at(t)), ss.delta(t), hbar);
  }
  return {};
}

ExpectationSeries expectation_series(const GaussPolySymbol& F, const std::string& name, const EvolvedState& state,
                                     const std::vector<double>& grid, const SymplecticStructure& ss, double hbar,
                                     ExpectationRoute route) {
  ExpectationSeries out;
  out.observable = name;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0 && !(grid[k] > grid[k - 1])) throw InputError("time grid must be strictly increasing");
    out.times.push_back(grid[k]);
    out.values.push_back(expectation_value(F, state, grid[k], ss, hbar, route));
  }
  return out;
}

GaussPolySymbol magnetic_cross_invariant(double B, int which) {
  if (B == 0.0) throw InputError("cross invariants need a nonzero field");
  Vec u(4), w(4), g1(4), g2(4);
  u << 0.0, 1.0, -B / 2, 0.0;
  w << B / 2, 0.0, 0.0, 1.0;
  g1 << 0.0, 1.0, B / 2, 0.0;
  g2 << -B / 2, 0.0, 0.0, 1.0;
  // (a.x)(b.x) = 1/2 x^T (a b^T + b a^T) x
  auto prod = [](const Vec& a, const Vec& b) -> Mat { return a * b.transpose() + b * a.transpose(); };
  Mat S;
  if (which == 1)
    S = (prod(u, g1) + prod(w, g2)) / B;
  else if (which == 2)
    S = (prod(w, g1) - prod(u, g2)) / B;
  else
    throw InputError("cross invariant index must be 1 or 2");
  return quadratic_polynomial(S, Vec::Zero(4));
}

namespace {

// Symmetric matrix S with F = 1/2 x^T S x for a homogeneous quadratic polynomial symbol.
Mat quadratic_matrix(const GaussPolySymbol& F) {
  const int d = F.dim();
  Mat S(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      S(i, j) = (i == j ? 2.0 : 1.0) * std::real(F.polynomial().coeff(MultiIndex::unit(i) + MultiIndex::unit(j)));
  return S;
}

Vec upper_triangle(const Mat& S) {
  const int d = static_cast<int>(S.rows());
  Vec v(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) v(k++) = S(i, j);
  return v;
}

}  // namespace

AngularMomentumSeries angular_momentum_series(const EvolvedState& state, const std::vector<double>& grid,
                                              const SymplecticStructure& ss, double hbar, double B) {
  if (ss.dim() != 4 || state.initial().dim() != 4)
    throw DimensionError("angular momentum series needs the 4-dimensional magnetic model");
  const GaussPolySymbol L = magnetic_angular_momentum();
  const Mat SL = quadratic_matrix(L);
  Mat basis(10, 4);
  basis.col(0) = upper_triangle(SL);
  basis.col(1) = upper_triangle(quadratic_matrix(magnetic_hamiltonian(B)));
  basis.col(2) = upper_triangle(quadratic_matrix(magnetic_cross_invariant(B, 1)));
  basis.col(3) = upper_triangle(quadratic_matrix(magnetic_cross_invariant(B, 2)));
  Eigen::ColPivHouseholderQR<Mat> qr(basis);

  AngularMomentumSeries out;
  out.series = expectation_series(L, "L", state, grid, ss, hbar);
  for (double t : grid) {
    const Mat G = state.flow().at(t).Gamma;
    const Vec target = upper_triangle(G.transpose() * SL * G);
    const Vec c = qr.solve(target);
    out.coefficients.push_back({c(0), c(1), c(2), c(3)});
    out.fit_residual.push_back((basis * c - target).norm());
  }
  return out;
}

double default_stencil_step(double t) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(t));
}

GaussPolySymbol time_derivative(const SymbolFamily& family, double t, double h) {
  if (!(h > 0.0)) throw InputError("stencil step must be positive");
  const GaussPolySymbol F0 = family(t);
  const GaussPolySymbol Fp = family(t + h);
  const GaussPolySymbol Fm = family(t - h);
  const int d = F0.dim();
  if (Fp.dim() != d || Fm.dim() != d) throw DimensionError("family changes dimension");
  const CMat Mdot = (Fp.quadratic() - Fm.quadratic()) / (2.0 * h);
  const CVec bdot = (Fp.linear() - Fm.linear()) / (2.0 * h);
  // measure the polynomial parts against the constant of F0 so the split
  // between c and P may vary along the family
  Polynomial Pdot = Fp.polynomial() * std::exp(Fp.constant() - F0.constant());
  Pdot -= Fm.polynomial() * std::exp(Fm.constant() - F0.constant());
  Pdot *= 1.0 / (2.0 * h);
  // (-1/2 x^T Mdot x + bdot^T x) P0
  const Polynomial& P0 = F0.polynomial();
  Polynomial expo(d);
  for (int i = 0; i < d; ++i) {
    expo.add_term(MultiIndex::unit(i), bdot(i));
    expo.add_term(MultiIndex::unit(i) + MultiIndex::unit(i), -0.5 * Mdot(i, i));
    for (int j = i + 1; j < d; ++j) expo.add_term(MultiIndex::unit(i) + MultiIndex::unit(j), -Mdot(i, j));
  }
  Polynomial P = expo * P0;
  P += Pdot;
  return F0.with_polynomial(std::move(P));
}

GaussPolySymbol extended_time_derivative(const SymbolFamily& family, double t, const SymplecticStructure& ss,
                                         double hbar, DerivativeForm form, double h) {
  if (h == 0.0) h = default_stencil_step(t);
  const double lo = t - h, hi = t + h;
  if (lo < -1e-14 * std::max(1.0, ss.flow().t_max()) || hi > ss.flow().t_max() * (1.0 + 1e-14))
    throw RangeError("stencil reaches outside the flow range");
  const GaussPolySymbol dF = time_derivative(family, t, h);
  const GaussPolySymbol F = family(t);
  const int d = F.dim();
  const Mat Wdot = ss.omega_dot(t);

  if (form == DerivativeForm::Bracket) {
    // -1/2 x^T (Omegadot Pi) grad F
    const Mat W = Wdot * ss.pi(t);
    Polynomial corr(d);
    for (int j = 0; j < d; ++j) {
      const Polynomial dj = exponent_derivative(F, F.polynomial(), j);
      if (dj.is_zero()) continue;
      corr += multiply_affine(dj, W.col(j).cast<Complex>(), 0.0);
    }
    corr *= -0.5;
    return add(dF, F.with_polynomial(std::move(corr)));
  }

  // -(1 / (4 i hbar)) Omegadot_ij (x^i * [x^j, F] + [x^j, F] * x^i)
  const Mat Pi = ss.pi(t);
  Polynomial corr(d);
  for (int j = 0; j < d; ++j) {
    const GaussPolySymbol cj = star_commutator(coordinate(d, j), F, Pi, hbar);
    for (int i = 0; i < d; ++i) {
      if (Wdot(i, j) == 0.0) continue;
      const GaussPolySymbol xi = coordinate(d, i);
      GaussPolySymbol s = add(moyal_star(xi, cj, Pi, hbar), moyal_star(cj, xi, Pi, hbar));
      corr += s.normalized_constant().polynomial() * std::exp(-F.constant()) * Complex(Wdot(i, j));
    }
  }
  corr *= -1.0 / Complex(0.0, 4.0 * hbar);
  return add(dF, F.with_polynomial(std::move(corr)));
}

double quantum_liouville_residual(const SymbolFamily& rho, double t, const SymplecticStructure& ss, double hbar,
                                  double h) {
  const GaussPolySymbol D = extended_time_derivative(rho, t, ss, hbar, DerivativeForm::Bracket, h);
  const GaussPolySymbol r = rho(t);
  const GaussPolySymbol H = pseudo_hamiltonian_symbol(hamiltonian_coefficients(ss, t));
  const GaussPolySymbol comm = star_commutator(r, H, ss.pi(t), hbar);
  const GaussPolySymbol res = add(scale(D, Complex(0.0, hbar)), comm);
  const double scale_r = r.polynomial().max_abs() * std::exp(std::real(r.constant()));
  return res.polynomial().max_abs() * std::exp(std::real(res.constant())) / std::max(scale_r, 1e-300);
}

GaussPolySymbol classical_transport(const GaussPolySymbol& rho_cl0, const FlowSolution& flow, double t) {
  return evolve_state(rho_cl0, flow, t);
}

double normalization_check(const GaussPolySymbol& rho_cl0, const SymplecticStructure& ss, double t) {
  const GaussPolySymbol r = classical_transport(rho_cl0, ss.flow(), t);
  return std::real(ss.delta(t) * integrate(r));
}

AttractorMoments attractor_moments(const EvolvedState& state, const std::vector<double>& grid,
                                   const SymplecticStructure& ss, double hbar) {
  AttractorMoments out;
  const LinearSystem& sys = ss.system();
  if (!sys.homogeneous()) {
    out.stable = false;
    out.warning = "system is inhomogeneous; the origin is not a fixed point";
  } else if (sys.autonomous()) {
    Eigen::EigenSolver<Mat> es(sys.A(0.0), false);
    if (es.eigenvalues().real().maxCoeff() >= 0.0) {
      out.stable = false;
      out.warning = "generator has eigenvalues with non-negative real part; no convergence claim";
    }
  } else {
    const FlowSample end = state.flow().at(state.flow().t_max());
    if (end.Gamma.norm() >= 1.0) {
      out.stable = false;
      out.warning = "fundamental matrix does not contract over the covered range; no convergence claim";
    }
  }
  const int d = ss.dim();
  for (double t : grid) {
    const GaussPolySymbol r = state.at(t);
    const double Delta = ss.delta(t);
    Mat S(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Polynomial xx(d);
        xx.add_term(MultiIndex::unit(i) + MultiIndex::unit(j), 1.0);
        S(i, j) = S(j, i) = std::real(trace_at(pointwise_product(make_polynomial(xx), r), Delta, hbar));
      }
    out.times.push_back(t);
    out.second_moments.push_back(S);
    out.mass.push_back(std::real(trace_at(r, Delta, hbar)));
  }
  return out;
}

}  // namespace dqlin
