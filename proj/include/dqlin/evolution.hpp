#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dqlin/linsys.hpp"
#include "dqlin/symbol.hpp"
#include "dqlin/symplectic.hpp"
#include "dqlin/types.hpp"

namespace dqlin {

/// rho(t, x) = rho0(Lambda(t) (x - v(t))).
GaussPolySymbol evolve_state(const GaussPolySymbol& rho0, const FlowSolution& flow, double t);

/// Initial symbol plus flow, with a per-time cache of the transported symbol.
class EvolvedState {
 public:
  EvolvedState(GaussPolySymbol rho0, std::shared_ptr<const FlowSolution> flow);

  const GaussPolySymbol& initial() const { return rho0_; }
  const FlowSolution& flow() const { return *flow_; }
  GaussPolySymbol at(double t) const;

 private:
  GaussPolySymbol rho0_;
  std::shared_ptr<const FlowSolution> flow_;
  mutable std::mutex mutex_;
  mutable std::map<double, GaussPolySymbol> cache_;
};

enum class ExpectationRoute {
  /// Tr_0((F o Phi_t) *_0 rho0) with Phi_t(y) = Gamma y + v. Identical to
  /// Tr_t(F *_t rho(t)) and free of the monomial-basis cancellations that
  /// strongly anisotropic flows cause in the transported symbol.
  Transported,
  /// Tr_t(F *_t rho(t)) with rho(t) formed explicitly.
  Direct,
  /// Tr_t(F . rho(t)), the pointwise product.
  Pointwise,
};

Complex expectation_value(const GaussPolySymbol& F, const EvolvedState& state, double t,
                          const SymplecticStructure& ss, double hbar,
                          ExpectationRoute route = ExpectationRoute::Transported);

struct ExpectationSeries {
  std::vector<double> times;
  std::vector<Complex> values;
  std::string observable;
  std::map<std::string, std::string> metadata;
};

ExpectationSeries expectation_series(const GaussPolySymbol& F, const std::string& name, const EvolvedState& state,
                                     const std::vector<double>& grid, const SymplecticStructure& ss, double hbar,
                                     ExpectationRoute route = ExpectationRoute::Transported);

/// Rotation-invariant quadratic forms of the magnetic model: the pair built
/// from the two oscillator amplitudes, Re and Im of (u + i w) conj(g1 + i g2) / B.
GaussPolySymbol magnetic_cross_invariant(double B, int which);

struct AngularMomentumSeries {
  ExpectationSeries series;
  /// Coefficients of L o Gamma(t) on the basis {L, H, K, N}.
  std::vector<std::array<double, 4>> coefficients;
  /// Least-squares residual of that decomposition.
  std::vector<double> fit_residual;
};

/// <L>(t) for the 4-dim magnetic model with cyclotron frequency B.
AngularMomentumSeries angular_momentum_series(const EvolvedState& state, const std::vector<double>& grid,
                                              const SymplecticStructure& ss, double hbar, double B);

using SymbolFamily = std::function<GaussPolySymbol(double)>;

/// Central-difference time derivative of a symbol family, expressed with the
/// exponent of family(t).
GaussPolySymbol time_derivative(const SymbolFamily& family, double t, double h);

enum class DerivativeForm { Bracket, Star };

/// Step used when none is given: cube root of machine epsilon, scaled by max(1, |t|).
double default_stencil_step(double t);

/// d/dt F - 1/2 x^i Omegadot_ik {x^k, F}, or the equivalent symmetrized star-commutator form.
GaussPolySymbol extended_time_derivative(const SymbolFamily& family, double t, const SymplecticStructure& ss,
                                         double hbar, DerivativeForm form, double h = 0.0);

/// Norm of i hbar D_t rho + [rho, H]_t relative to the norm of rho(t), where
/// H(t) is the pseudo-Hamiltonian symbol of the structure.
double quantum_liouville_residual(const SymbolFamily& rho, double t, const SymplecticStructure& ss, double hbar,
                                  double h = 0.0);

/// Classical density transport; the same pullback as the quantum case.
GaussPolySymbol classical_transport(const GaussPolySymbol& rho_cl0, const FlowSolution& flow, double t);
/// Integral of rho_cl(t) against the Liouville measure Delta(t) dx.
double normalization_check(const GaussPolySymbol& rho_cl0, const SymplecticStructure& ss, double t);

struct AttractorMoments {
  std::vector<double> times;
  std::vector<Mat> second_moments;  ///< raw moments of phi_t
  std::vector<double> mass;         ///< integral of phi_t
  bool stable = true;
  std::string warning;
};

AttractorMoments attractor_moments(const EvolvedState& state, const std::vector<double>& grid,
                                   const SymplecticStructure& ss, double hbar);

}  // namespace dqlin
