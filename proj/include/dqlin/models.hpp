#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dqlin/linsys.hpp"
#include "dqlin/symbol.hpp"
#include "dqlin/types.hpp"

namespace dqlin {

enum class ModelKind { DampedOscillator, MagneticCharge, Generic };

enum class OscillatorVariant {
  Attractor,  ///< constant generator, friction shrinks phase-space volume
  Canonical,  ///< time-dependent generator with constant canonical form
};

struct ModelDefinition {
  std::string name;
  ModelKind kind = ModelKind::Generic;
  std::shared_ptr<const LinearSystem> system;
  Mat omega0;
  std::map<std::string, GaussPolySymbol> observables;
  std::map<std::string, double> parameters;
  double hbar = 1.0;
};

/// Oscillator xddot + 2 alpha xdot + omega^2 x = 0 in first-order form, on (x, p).
/// Attractor: xdot = s p - alpha x, pdot = -omega^2 s x - alpha p with s = sqrt(1 - alpha^2/omega^2).
/// Canonical: xdot = e^{-2 alpha t} p, pdot = -omega^2 e^{2 alpha t} x.
ModelDefinition build_damped_oscillator(double omega, double alpha, double hbar, OscillatorVariant variant);

/// Charge in a magnetic field with radiation friction, on (x, p, y, q).
ModelDefinition build_magnetic_charge(double e, double field, double hbar);
/// Same model from the reduced friction rate A and cyclotron frequency B.
ModelDefinition build_magnetic_charge_coefficients(double A, double B, double hbar);

ModelDefinition build_generic(const Mat& A, const Vec& J, const Mat& omega0, double hbar);

/// Generator with entries drawn from N(0, 1/dim), shifted so every eigenvalue
/// has real part <= -margin. Deterministic in `seed`.
Mat random_stable_generator(int dim, unsigned long long seed, double margin = 0.05);

struct ModelParameterDoc {
  std::string name;
  std::string meaning;
  std::string default_value;
};

struct ModelInfo {
  std::string name;
  std::string summary;
  std::vector<ModelParameterDoc> parameters;
  std::vector<std::string> observables;
};

std::vector<ModelInfo> model_catalogue();

}  // namespace dqlin
