#include "dqlin/states.hpp"

#include <cmath>
#include <string>

#include "dqlin/errors.hpp"
#include "dqlin/star.hpp"
#include "dqlin/symplectic.hpp"

namespace dqlin {

namespace {

constexpr double kConstructionTol = 1e-9;

// exp(-kappa H) * sum_k a_k (s H)^k for a quadratic polynomial symbol H = 1/2 x^T S x.
GaussPolySymbol radial_symbol(const GaussPolySymbol& H, double kappa, const Polynomial& profile, double s,
                              double prefactor) {
  const int d = H.dim();
  CMat M(d, d);
  // Hessian of H read off the quadratic coefficients
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const MultiIndex m = MultiIndex::unit(i) + MultiIndex::unit(j);
      M(i, j) = (i == j ? 2.0 : 1.0) * H.polynomial().coeff(m);
    }
  Polynomial P = Polynomial::constant(d, 0.0);
  Polynomial power = Polynomial::constant(d, 1.0);
  const Polynomial sH = H.polynomial() * Complex(s);
  for (int k = 0; k <= profile.degree(); ++k) {
    if (k > 0) power = power * sH;
    MultiIndex mk;
    mk.set(0, k);
    const Complex a = profile.coeff(mk);
    if (a != Complex{}) P += power * a;
  }
  return GaussPolySymbol(kappa * M, CVec::Zero(d), 0.0, P * Complex(prefactor));
}

// Coefficient of the polynomial part of H * exp(-kappa H) along H itself.
double quadratic_ratio(const GaussPolySymbol& H, double kappa, const Mat& Pi, double hbar, double* constant) {
  const GaussPolySymbol g = radial_symbol(H, kappa, Polynomial::constant(1, 1.0), 1.0, 1.0);
  const GaussPolySymbol hg = moyal_star(H, g, Pi, hbar);
  // pick the largest quadratic coefficient of H as reference
  MultiIndex ref;
  double best = -1.0;
  for (const auto& [m, c] : H.polynomial().terms())
    if (m.degree() == 2 && std::abs(c) > best) {
      best = std::abs(c);
      ref = m;
    }
  if (constant) *constant = std::real(hg.polynomial().coeff(MultiIndex{}));
  return std::real(hg.polynomial().coeff(ref) / H.polynomial().coeff(ref));
}

double frequency_of(const GaussPolySymbol& H) {
  // for 1/2 (a p^2 + b x^2 + 2 c x p) the frequency is sqrt(ab - c^2)
  const Complex xx = 2.0 * H.polynomial().coeff(MultiIndex{2, 0});
  const Complex pp = 2.0 * H.polynomial().coeff(MultiIndex{0, 2});
  const Complex xp = H.polynomial().coeff(MultiIndex{1, 1});
  return std::sqrt(std::real(xx * pp - xp * xp));
}

}  // namespace

double laguerre(int n, double y) {
  if (n < 0) throw InputError("Laguerre degree must be non-negative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 - y;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

Polynomial laguerre_polynomial(int n) {
  if (n < 0) throw InputError("Laguerre degree must be non-negative");
  const Polynomial y = Polynomial::variable(1, 0);
  Polynomial prev = Polynomial::constant(1, 1.0);
  if (n == 0) return prev;
  Polynomial cur = Polynomial::constant(1, 1.0) - y;
  for (int k = 1; k < n; ++k) {
    Polynomial next = (Polynomial::constant(1, 2.0 * k + 1.0) - y) * cur;
    next -= prev * Complex(k);
    next *= 1.0 / (k + 1.0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

GaussPolySymbol oscillator_hamiltonian(double omega) {
  Mat S(2, 2);
  S << omega * omega, 0.0, 0.0, 1.0;
  return quadratic_polynomial(S, Vec::Zero(2));
}

OscillatorState oscillator_state(const OscillatorSpec& spec) {
  if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) throw InputError("oscillator frequency must be positive");
  if (!(spec.hbar > 0.0) || !std::isfinite(spec.hbar)) throw InputError("hbar must be positive");
  if (spec.n < 0) throw InputError("level must be non-negative");
  const GaussPolySymbol H = oscillator_hamiltonian(spec.omega);
  const Mat Pi = canonical_omega0(2).inverse();
  const double omega = frequency_of(H);

  // The ratio is a quadratic polynomial in kappa: sample it at three points
  // and take the positive root where the H-proportional part disappears.
  const double s = 1.0 / (spec.hbar * omega);
  const double r0 = quadratic_ratio(H, 0.0, Pi, spec.hbar, nullptr);
  const double r1 = quadratic_ratio(H, s, Pi, spec.hbar, nullptr);
  const double r2 = quadratic_ratio(H, 2.0 * s, Pi, spec.hbar, nullptr);
  const double c2 = (r2 - 2.0 * r1 + r0) / (2.0 * s * s);
  const double c1 = (r1 - r0) / s - c2 * s;
  const double c0 = r0;
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (!(c2 != 0.0) || disc < 0.0) throw ConstructionError("no real Gaussian scale solves the eigen-equation");
  const double ra = (-c1 + std::sqrt(disc)) / (2.0 * c2);
  const double rb = (-c1 - std::sqrt(disc)) / (2.0 * c2);
  const double kappa = std::max(ra, rb);
  if (!(kappa > 0.0)) throw ConstructionError("Gaussian scale is not positive");

  const Polynomial profile = laguerre_polynomial(spec.n);
  const GaussPolySymbol raw = radial_symbol(H, kappa, profile, 2.0 * kappa, 1.0);
  const Complex tr = trace_at(raw, density_from_poisson(Pi), spec.hbar);
  const double norm = 1.0 / std::real(tr);

  OscillatorState out;
  out.rho = radial_symbol(H, kappa, profile, 2.0 * kappa, norm);
  out.kappa = kappa;
  out.normalization = norm;
  out.energy = spec.hbar * omega * (spec.n + 0.5);
  const ResidualParts r = eigenstate_residual_parts(out.rho, H, out.energy, Pi, spec.hbar, false);
  out.residual = (r.left + r.right) / symbol_norm(out.rho) + r.trace;
  if (!(out.residual < kConstructionTol * std::max(1.0, 1.0 + spec.n)))
    throw ConstructionError("oscillator state n=" + std::to_string(spec.n) +
                            " fails its eigen-equation (residual " + std::to_string(out.residual) + ")");
  return out;
}

GaussPolySymbol oscillator_eigenstate(const OscillatorSpec& spec) { return oscillator_state(spec).rho; }

GaussPolySymbol magnetic_hamiltonian(double B) { return magnetic_oscillator_energy(B, 1); }

GaussPolySymbol magnetic_angular_momentum() {
  Mat S = Mat::Zero(4, 4);
  S(1, 2) = S(2, 1) = 1.0;   // p y
  S(0, 3) = S(3, 0) = -1.0;  // -q x
  return quadratic_polynomial(S, Vec::Zero(4));
}

GaussPolySymbol magnetic_oscillator_energy(double B, int which) {
  if (which != 1 && which != 2) throw InputError("oscillator index must be 1 or 2");
  const double sgn = which == 1 ? 1.0 : -1.0;
  Vec u(4), w(4);
  u << 0.0, 1.0, -sgn * B / 2, 0.0;  // p -+ B y / 2
  w << sgn * B / 2, 0.0, 0.0, 1.0;   // q +- B x / 2
  return quadratic_polynomial(u * u.transpose() + w * w.transpose(), Vec::Zero(4));
}

MagneticState magnetic_state(const MagneticStateSpec& spec) {
  if (!(spec.field > 0.0) || !std::isfinite(spec.field)) throw InputError("effective field must be positive");
  if (spec.n < 0 || spec.l < 0) throw InputError("levels must be non-negative");
  const double B = spec.field;
  const GaussPolySymbol r1 = oscillator_eigenstate({B, spec.hbar, spec.n});
  const GaussPolySymbol r2 = oscillator_eigenstate({B, spec.hbar, spec.l});
  // oscillator coordinates (X_k, P_k) with h_k = 1/2 (P_k^2 + B^2 X_k^2)
  Mat S1(2, 4), S2(2, 4);
  S1 << 0.5, 0.0, 0.0, 1.0 / B, 0.0, 1.0, -B / 2, 0.0;
  S2 << -0.5, 0.0, 0.0, 1.0 / B, 0.0, 1.0, B / 2, 0.0;
  MagneticState out;
  out.rho = pointwise_product(linear_substitution(r1, S1), linear_substitution(r2, S2));
  out.energy = spec.hbar * B * (spec.n + 0.5);
  out.angular_momentum = spec.hbar * (spec.l - spec.n);

  const Mat Pi = canonical_omega0(4).inverse();
  const ResidualParts rh = eigenstate_residual_parts(out.rho, magnetic_hamiltonian(B), out.energy, Pi, spec.hbar, false);
  const ResidualParts rl =
      eigenstate_residual_parts(out.rho, magnetic_angular_momentum(), out.angular_momentum, Pi, spec.hbar, false);
  const double scale = symbol_norm(out.rho);
  out.residual = (rh.left + rh.right + rl.left + rl.right) / scale + rh.trace;
  if (!(out.residual < 1e-8))
    throw ConstructionError("magnetic state fails its eigen-equations (residual " + std::to_string(out.residual) + ")");
  return out;
}

GaussPolySymbol magnetic_eigenstate(const MagneticStateSpec& spec) { return magnetic_state(spec).rho; }

ResidualParts eigenstate_residual_parts(const GaussPolySymbol& rho, const GaussPolySymbol& H, double E,
                                        const Mat& Pi, double hbar, bool with_idempotency) {
  ResidualParts r;
  const GaussPolySymbol Erho = scale(rho, E);
  r.left = symbol_distance(moyal_star(H, rho, Pi, hbar), Erho);
  r.right = symbol_distance(moyal_star(rho, H, Pi, hbar), Erho);
  if (with_idempotency) r.idempotency = symbol_distance(moyal_star(rho, rho, Pi, hbar), rho);
  r.trace = std::abs(trace_at(rho, density_from_poisson(Pi), hbar) - 1.0);
  return r;
}

double eigenstate_residual(const GaussPolySymbol& rho, const GaussPolySymbol& H, double E, const Mat& Pi,
                           double hbar) {
  return eigenstate_residual_parts(rho, H, E, Pi, hbar, true).total();
}

}  // namespace dqlin
