#pragma once

#include <memory>
#include <vector>

#include "dqlin/linsys.hpp"
#include "dqlin/symbol.hpp"
#include "dqlin/types.hpp"

namespace dqlin {

/// Block-diagonal seed with blocks [[0, 1], [-1, 0]] on (x_k, p_k) pairs.
/// Its inverse gives {p, x} = 1.
Mat canonical_omega0(int dim);

/// Time-dependent symplectic form Omega(t) = Lambda^T Omega0 Lambda built on a flow.
class SymplecticStructure {
 public:
  SymplecticStructure(std::shared_ptr<const LinearSystem> sys, std::shared_ptr<const FlowSolution> flow,
                      const Mat& omega0);

  int dim() const { return flow_->dim(); }
  const Mat& omega0() const { return omega0_; }
  const LinearSystem& system() const { return *sys_; }
  const FlowSolution& flow() const { return *flow_; }
  std::shared_ptr<const FlowSolution> flow_ptr() const { return flow_; }
  std::shared_ptr<const LinearSystem> system_ptr() const { return sys_; }

  Mat omega(double t) const;
  /// Poisson tensor Omega(t)^{-1} = Gamma Omega0^{-1} Gamma^T.
  Mat pi(double t) const;
  /// -(Omega A + A^T Omega).
  Mat omega_dot(double t) const;
  /// sqrt(det Omega(t)), positive branch.
  double delta(double t) const;

  /// Omega and Pi at the flow's stored samples, computed at construction.
  const std::vector<Mat>& omega_samples() const { return omega_cache_; }
  const std::vector<Mat>& pi_samples() const { return pi_cache_; }

 private:
  std::shared_ptr<const LinearSystem> sys_;
  std::shared_ptr<const FlowSolution> flow_;
  Mat omega0_;
  Mat pi0_;
  double delta0_;
  std::vector<Mat> omega_cache_;
  std::vector<Mat> pi_cache_;
};

Mat omega_at(const SymplecticStructure& ss, double t);

struct HamiltonianSample {
  double t = 0.0;
  Mat B;         ///< symmetric quadratic coefficient
  Vec C;         ///< linear coefficient
  double delta;  ///< Liouville density
};

/// B = 1/2 (Omega A - A^T Omega), C = Omega J at time t.
HamiltonianSample hamiltonian_coefficients(const SymplecticStructure& ss, double t);

/// Time-indexed access to B, C and Delta.
class PseudoHamiltonianData {
 public:
  explicit PseudoHamiltonianData(const SymplecticStructure& ss) : ss_(&ss) {}
  Mat B(double t) const { return hamiltonian_coefficients(*ss_, t).B; }
  Vec C(double t) const { return hamiltonian_coefficients(*ss_, t).C; }
  double Delta(double t) const { return ss_->delta(t); }
  const SymplecticStructure& structure() const { return *ss_; }

 private:
  const SymplecticStructure* ss_;
};

/// 1/2 x^T B x + C^T x.
GaussPolySymbol pseudo_hamiltonian_symbol(const HamiltonianSample& h);

/// Pi^{ij} d_i F d_j G.
GaussPolySymbol poisson_bracket(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi);

/// 1/2 integral of (x^T Omega xdot - x^T B x - 2 C^T x) over a path sampled
/// at t0, t0 + dt, ...; derivatives by second-order differences, trapezoidal rule.
double evaluate_action(const std::vector<Vec>& path, double t0, double dt, const PseudoHamiltonianData& data);

double liouville_density(const SymplecticStructure& ss, double t);

}  // namespace dqlin
