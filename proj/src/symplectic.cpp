#include "dqlin/symplectic.hpp"

#include <cmath>

#include "dqlin/errors.hpp"

namespace dqlin {

Mat canonical_omega0(int dim) {
  if (dim < 2 || dim % 2 != 0) throw InputError("phase-space dimension must be even");
  Mat W = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; k += 2) {
    W(k, k + 1) = 1.0;
    W(k + 1, k) = -1.0;
  }
  return W;
}

SymplecticStructure::SymplecticStructure(std::shared_ptr<const LinearSystem> sys,
                                         std::shared_ptr<const FlowSolution> flow, const Mat& omega0)
    : sys_(std::move(sys)), flow_(std::move(flow)), omega0_(omega0) {
  const int n = flow_->dim();
  if (sys_->dim() != n) throw DimensionError("system and flow dimensions differ");
  if (omega0.rows() != n || omega0.cols() != n) throw DimensionError("seed form has wrong shape");
  if ((omega0 + omega0.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, omega0.cwiseAbs().maxCoeff()))
    throw InputError("seed form is not antisymmetric");
  const double det = omega0.determinant();
  if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) throw InputError("seed form is degenerate");
  omega0_ = 0.5 * (omega0 - omega0.transpose());
  pi0_ = omega0_.inverse();
  pi0_ = 0.5 * (pi0_ - pi0_.transpose());
  delta0_ = std::sqrt(std::abs(det));
  for (const auto& s : flow_->samples()) {
    Mat W = s.Lambda.transpose() * omega0_ * s.Lambda;
    omega_cache_.push_back(0.5 * (W - W.transpose()));
    Mat P = s.Gamma * pi0_ * s.Gamma.transpose();
    pi_cache_.push_back(0.5 * (P - P.transpose()));
  }
}

Mat SymplecticStructure::omega(double t) const {
  const FlowSample s = flow_->at(t);
  Mat W = s.Lambda.transpose() * omega0_ * s.Lambda;
  return 0.5 * (W - W.transpose());
}

Mat SymplecticStructure::pi(double t) const {
  const FlowSample s = flow_->at(t);
  Mat P = s.Gamma * pi0_ * s.Gamma.transpose();
  return 0.5 * (P - P.transpose());
}

Mat SymplecticStructure::omega_dot(double t) const {
  const Mat W = omega(t);
  const Mat A = sys_->A(t);
  Mat D = -(W * A + A.transpose() * W);
  return 0.5 * (D - D.transpose());
}

double SymplecticStructure::delta(double t) const {
  // sqrt(det Omega) = |det Lambda| sqrt(det Omega0)
  const FlowSample s = flow_->at(t);
  return delta0_ / std::abs(s.Gamma.determinant());
}

Mat omega_at(const SymplecticStructure& ss, double t) { return ss.omega(t); }

HamiltonianSample hamiltonian_coefficients(const SymplecticStructure& ss, double t) {
  const Mat W = ss.omega(t);
  const Mat A = ss.system().A(t);
  HamiltonianSample h;
  h.t = t;
  Mat B = 0.5 * (W * A - A.transpose() * W);
  h.B = 0.5 * (B + B.transpose());
  h.C = W * ss.system().J(t);
  h.delta = ss.delta(t);
  return h;
}

GaussPolySymbol pseudo_hamiltonian_symbol(const HamiltonianSample& h) { return quadratic_polynomial(h.B, h.C); }

GaussPolySymbol poisson_bracket(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi) {
  const int d = F.dim();
  if (G.dim() != d || Pi.rows() != d || Pi.cols() != d)
    throw DimensionError("bracket operands and Poisson tensor disagree on dimension");
  std::vector<Polynomial> dF, dG;
  for (int k = 0; k < d; ++k) {
    dF.push_back(exponent_derivative(F, F.polynomial(), k));
    dG.push_back(exponent_derivative(G, G.polynomial(), k));
  }
  Polynomial P(d);
  for (int i = 0; i < d; ++i) {
    Polynomial row(d);
    for (int j = 0; j < d; ++j)
      if (Pi(i, j) != 0.0) row += dG[j] * Complex(Pi(i, j));
    if (!row.is_zero() && !dF[i].is_zero()) P += dF[i] * row;
  }
  return GaussPolySymbol(F.quadratic() + G.quadratic(), F.linear() + G.linear(), F.constant() + G.constant(),
                         std::move(P));
}

double evaluate_action(const std::vector<Vec>& path, double t0, double dt, const PseudoHamiltonianData& data) {
  const std::size_t N = path.size();
  if (N < 3) throw InputError("action needs at least 3 path samples");
  if (!(dt > 0.0)) throw InputError("sample spacing must be positive");
  const int d = data.structure().dim();
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    if (path[k].size() != d) throw DimensionError("path sample has wrong dimension");
    Vec xdot;
    if (k == 0)
      xdot = (-3.0 * path[0] + 4.0 * path[1] - path[2]) / (2.0 * dt);
    else if (k == N - 1)
      xdot = (3.0 * path[N - 1] - 4.0 * path[N - 2] + path[N - 3]) / (2.0 * dt);
    else
      xdot = (path[k + 1] - path[k - 1]) / (2.0 * dt);
    const double t = t0 + static_cast<double>(k) * dt;
    const HamiltonianSample h = hamiltonian_coefficients(data.structure(), t);
    const Mat W = data.structure().omega(t);
    const Vec& x = path[k];
    const double lagr = 0.5 * (x.dot(W * xdot) - x.dot(h.B * x) - 2.0 * h.C.dot(x));
    const double w = (k == 0 || k == N - 1) ? 0.5 : 1.0;
    sum += w * lagr;
  }
  return sum * dt;
}

double liouville_density(const SymplecticStructure& ss, double t) { return ss.delta(t); }

}  // namespace dqlin
