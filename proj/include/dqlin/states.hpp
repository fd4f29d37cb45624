#pragma once

#include "dqlin/symbol.hpp"
#include "dqlin/types.hpp"

namespace dqlin {

struct OscillatorSpec {
  double omega = 1.0;
  double hbar = 1.0;
  int n = 0;
};

struct MagneticStateSpec {
  double field = 1.0;  ///< effective cyclotron frequency B > 0
  double hbar = 1.0;
  int n = 0;
  int l = 0;
};

/// L_n(y) by the three-term recurrence.
double laguerre(int n, double y);
/// Coefficients of L_n as a polynomial in one variable.
Polynomial laguerre_polynomial(int n);

/// 1/2 (p^2 + omega^2 x^2) on (x, p).
GaussPolySymbol oscillator_hamiltonian(double omega);

struct OscillatorState {
  GaussPolySymbol rho;
  double energy = 0.0;         ///< hbar omega (n + 1/2)
  double kappa = 0.0;          ///< Gaussian scale: rho ~ exp(-kappa H) L_n(2 kappa H)
  double normalization = 0.0;  ///< constant prefactor
  double residual = 0.0;       ///< eigen-equation residual relative to |rho|
};

/// Wigner function of the n-th oscillator level. The Gaussian scale is found
/// by requiring that H * exp(-kappa H) is proportional to exp(-kappa H), and
/// the prefactor by unit trace; the result is checked against
/// H * rho = hbar omega (n + 1/2) rho on both sides.
OscillatorState oscillator_state(const OscillatorSpec& spec);
GaussPolySymbol oscillator_eigenstate(const OscillatorSpec& spec);

/// Magnetic-model observables on (x, p, y, q).
GaussPolySymbol magnetic_hamiltonian(double B);
GaussPolySymbol magnetic_angular_momentum();
/// The two commuting oscillator energies: h1 = H, h2 = H + B L.
GaussPolySymbol magnetic_oscillator_energy(double B, int which);

struct MagneticState {
  GaussPolySymbol rho{4};
  double energy = 0.0;            ///< hbar B (n + 1/2)
  double angular_momentum = 0.0;  ///< hbar (l - n)
  double residual = 0.0;
};

/// Product state rho_n(h1) rho_l(h2) in the original variables.
MagneticState magnetic_state(const MagneticStateSpec& spec);
GaussPolySymbol magnetic_eigenstate(const MagneticStateSpec& spec);

struct ResidualParts {
  double left = 0.0;         ///< |H * rho - E rho|
  double right = 0.0;        ///< |rho * H - E rho|
  double idempotency = 0.0;  ///< |rho * rho - rho|
  double trace = 0.0;        ///< |Tr rho - 1|
  double total() const { return left + right + idempotency + trace; }
};

ResidualParts eigenstate_residual_parts(const GaussPolySymbol& rho, const GaussPolySymbol& H, double E,
                                        const Mat& Pi, double hbar, bool with_idempotency = true);
/// Sum of the four parts above (coefficient max norms).
double eigenstate_residual(const GaussPolySymbol& rho, const GaussPolySymbol& H, double E, const Mat& Pi,
                           double hbar);

}  // namespace dqlin
