#include "dqlin/models.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "dqlin/errors.hpp"
#include "dqlin/evolution.hpp"
#include "dqlin/states.hpp"
#include "dqlin/symplectic.hpp"

namespace dqlin {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InputError(std::string(name) + " must be finite");
}

void add_coordinates(ModelDefinition& m, const std::vector<std::string>& names) {
  for (std::size_t k = 0; k < names.size(); ++k)
    m.observables.emplace(names[k], coordinate(static_cast<int>(names.size()), static_cast<int>(k)));
}

}  // namespace

ModelDefinition build_damped_oscillator(double omega, double alpha, double hbar, OscillatorVariant variant) {
  require_finite(omega, "omega");
  require_finite(alpha, "alpha");
  if (!(omega > 0.0)) throw InputError("omega must be positive");
  if (alpha < 0.0) throw InputError("alpha must be non-negative");
  if (alpha >= omega) throw InputError("alpha >= omega (aperiodic damping) is not supported");
  if (!(hbar > 0.0)) throw InputError("hbar must be positive");

  ModelDefinition m;
  m.kind = ModelKind::DampedOscillator;
  m.hbar = hbar;
  m.omega0 = canonical_omega0(2);
  m.parameters = {{"omega", omega}, {"alpha", alpha}, {"hbar", hbar}};
  if (variant == OscillatorVariant::Attractor) {
    m.name = "damped_oscillator";
    const double s = std::sqrt(1.0 - alpha * alpha / (omega * omega));
    Mat A(2, 2);
    A << -alpha, s, -omega * omega * s, -alpha;
    m.system = std::make_shared<LinearSystem>(LinearSystem::constant(A));
  } else {
    m.name = "damped_oscillator_canonical";
    if (alpha == 0.0) {
      Mat A(2, 2);
      A << 0.0, 1.0, -omega * omega, 0.0;
      m.system = std::make_shared<LinearSystem>(LinearSystem::constant(A));
    } else {
      const double w2 = omega * omega;
      m.system = std::make_shared<LinearSystem>(LinearSystem::time_dependent(
          2,
          [alpha, w2](double t) {
            Mat A(2, 2);
            A << 0.0, std::exp(-2.0 * alpha * t), -w2 * std::exp(2.0 * alpha * t), 0.0;
            return A;
          },
          nullptr));
    }
  }
  m.observables.emplace("H", oscillator_hamiltonian(omega));
  add_coordinates(m, {"x", "p"});
  return m;
}

ModelDefinition build_magnetic_charge(double e, double field, double hbar) {
  require_finite(e, "e");
  require_finite(field, "H_field");
  if (!(hbar > 0.0)) throw InputError("hbar must be positive");
  const LorentzCoefficients lc = reduced_lorentz_coefficients(e, field);
  ModelDefinition m = build_magnetic_charge_coefficients(lc.friction, lc.frequency, hbar);
  m.parameters["e"] = e;
  m.parameters["H_field"] = field;
  return m;
}

ModelDefinition build_magnetic_charge_coefficients(double A, double B, double hbar) {
  require_finite(A, "A");
  require_finite(B, "B");
  if (!(hbar > 0.0)) throw InputError("hbar must be positive");

  // u = p - B y / 2 and w = q + B x / 2 are the velocities
  Mat G(4, 4);
  G << 0.0, 1.0, -B / 2, 0.0,                                  //
      -B * B / 4, A, -A * B / 2, -B / 2,                        //
      B / 2, 0.0, 0.0, 1.0,                                     //
      A * B / 2, B / 2, -B * B / 4, A;
  ModelDefinition m;
  m.name = "magnetic_charge";
  m.kind = ModelKind::MagneticCharge;
  m.hbar = hbar;
  m.system = std::make_shared<LinearSystem>(LinearSystem::constant(G));
  m.omega0 = canonical_omega0(4);
  m.parameters = {{"hbar", hbar}, {"A", A}, {"B", B}};
  m.observables.emplace("H", magnetic_hamiltonian(B));
  m.observables.emplace("L", magnetic_angular_momentum());
  if (B != 0.0) {
    m.observables.emplace("K", magnetic_cross_invariant(B, 1));
    m.observables.emplace("N", magnetic_cross_invariant(B, 2));
  }
  add_coordinates(m, {"x", "p", "y", "q"});
  return m;
}

ModelDefinition build_generic(const Mat& A, const Vec& J, const Mat& omega0, double hbar) {
  const int d = static_cast<int>(A.rows());
  if (d < 2 || d % 2 != 0) throw InputError("generic model needs an even dimension");
  if (omega0.rows() != d || omega0.cols() != d) throw InputError("seed form has wrong shape");
  if ((omega0 + omega0.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, omega0.cwiseAbs().maxCoeff()))
    throw InputError("seed form must be antisymmetric");
  if (std::abs(omega0.determinant()) < 1e-300) throw InputError("seed form is degenerate");
  if (!(hbar > 0.0)) throw InputError("hbar must be positive");
  ModelDefinition m;
  m.name = "generic";
  m.kind = ModelKind::Generic;
  m.hbar = hbar;
  m.system = std::make_shared<LinearSystem>(LinearSystem::constant(A, J));
  m.omega0 = omega0;
  m.parameters = {{"hbar", hbar}, {"dim", static_cast<double>(d)}};
  for (int k = 0; k < d; ++k) m.observables.emplace("x" + std::to_string(k + 1), coordinate(d, k));
  return m;
}

Mat random_stable_generator(int dim, unsigned long long seed, double margin) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = nd(rng);
  Eigen::EigenSolver<Mat> es(A, false);
  const double top = es.eigenvalues().real().maxCoeff();
  if (top > -margin) A -= (top + margin) * Mat::Identity(dim, dim);
  return A;
}

std::vector<ModelInfo> model_catalogue() {
  return {
      {"damped_oscillator",
       "oscillator with friction, constant generator; the origin attracts all trajectories",
       {{"omega", "frequency, > 0", "1"}, {"alpha", "friction coefficient, 0 <= alpha < omega", "0.1"},
        {"hbar", "Planck constant", "1"}},
       {"H", "x", "p"}},
      {"damped_oscillator_canonical",
       "same oscillator with time-dependent generator and constant canonical form",
       {{"omega", "frequency, > 0", "1"}, {"alpha", "friction coefficient, 0 <= alpha < omega", "0.1"},
        {"hbar", "Planck constant", "1"}},
       {"H", "x", "p"}},
      {"magnetic_charge",
       "charge in a uniform magnetic field with radiation friction (reduced equation)",
       {{"e", "charge", "1"}, {"H_field", "field strength", "1"}, {"hbar", "Planck constant", "1"},
        {"A", "friction rate; with B, replaces e and H_field", "derived"},
        {"B", "cyclotron frequency; with A, replaces e and H_field", "derived"}},
       {"H", "L", "K", "N", "x", "p", "y", "q"}},
      {"generic",
       "user-supplied constant generator A and inhomogeneity J",
       {{"A", "square matrix of even size", "required"}, {"J", "vector, defaults to zero", "0"},
        {"hbar", "Planck constant", "1"}},
       {"x1", "x2", "..."}},
  };
}

}  // namespace dqlin
