#pragma once

#include "dqlin/symbol.hpp"
#include "dqlin/types.hpp"

namespace dqlin {

enum class StarStrategy {
  Automatic,     ///< series if either side is polynomial, otherwise Gaussian composition
  Series,        ///< terminating bidifferential series
  GaussianLaw,   ///< closed-form Gaussian composition with polynomial prefactors
};

/// Weyl-Moyal product exp((i hbar/2) Pi^{ij} d_i (x) d_j) applied to F G.
GaussPolySymbol moyal_star(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi, double hbar,
                           StarStrategy strategy = StarStrategy::Automatic);

/// F * G - G * F.
GaussPolySymbol star_commutator(const GaussPolySymbol& F, const GaussPolySymbol& G, const Mat& Pi,
                                double hbar, StarStrategy strategy = StarStrategy::Automatic);

/// (2 pi hbar)^{-n} Delta * integral of F, with n = dim/2.
Complex trace_at(const GaussPolySymbol& F, double Delta, double hbar);

/// sqrt(det Omega) for Omega = Pi^{-1}.
double density_from_poisson(const Mat& Pi);

}  // namespace dqlin
