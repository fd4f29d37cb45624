#include "doctest.h"

#include "../support/gen.hpp"
#include "dqlin/models.hpp"
#include "dqlin/states.hpp"
#include "dqlin/star.hpp"
#include "dqlin/symplectic.hpp"

using namespace dqlin;

namespace {
struct Setup {
  ModelDefinition m;
  std::shared_ptr<const FlowSolution> flow;
  std::shared_ptr<SymplecticStructure> ss;
};
Setup make(ModelDefinition m, double t_max) {
  Setup s{std::move(m), nullptr, nullptr};
  s.flow = std::make_shared<FlowSolution>(fundamental_matrix(*s.m.system, t_max));
  s.ss = std::make_shared<SymplecticStructure>(s.m.system, s.flow, s.m.omega0);
  return s;
}
}  // namespace

TEST_CASE("canonical seed gives {p, x} = 1") {
  const Mat Pi = canonical_omega0(4).inverse();
  CHECK(Pi(1, 0) == 1.0);   // {p, x}
  CHECK(Pi(0, 1) == -1.0);  // {x, p}
  CHECK(Pi(3, 2) == 1.0);   // {q, y}
  CHECK(Pi(0, 2) == 0.0);
}

TEST_CASE("structure equation and basic identities") {
  for (auto s : {make(build_damped_oscillator(1.3, 0.2, 1.0, OscillatorVariant::Attractor), 5.0),
                 make(build_magnetic_charge(1.0, 1.0, 1.0), 5.0)}) {
    CHECK((s.ss->omega(0.0) - s.m.omega0).norm() == 0.0);
    for (double t : {0.3, 1.7, 4.0}) {
      const Mat W = s.ss->omega(t);
      CHECK((W + W.transpose()).norm() == 0.0);
      CHECK((W * s.ss->pi(t) - Mat::Identity(W.rows(), W.rows())).norm() < 1e-10);
      const double h = 1e-4;
      const Mat fd = (s.ss->omega(t + h) - s.ss->omega(t - h)) / (2 * h);
      CHECK((fd - s.ss->omega_dot(t)).norm() < 1e-6 * std::max(1.0, W.norm()));
      CHECK(s.ss->delta(t) == doctest::Approx(std::sqrt(W.determinant())).epsilon(1e-10));
      // Liouville: Delta(t) = Delta0 exp(-tr A t) for constant A
      CHECK(s.ss->delta(t) == doctest::Approx(std::exp(-s.m.system->A(0).trace() * t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("oscillator pseudo-Hamiltonian at t = 0") {
  const double w = 1.7, a = 0.3;
  const auto s = make(build_damped_oscillator(w, a, 1.0, OscillatorVariant::Attractor), 1.0);
  const auto h = hamiltonian_coefficients(*s.ss, 0.0);
  const double sq = std::sqrt(1 - a * a / (w * w));
  CHECK(h.B(0, 0) == doctest::Approx(-sq * w * w));
  CHECK(h.B(1, 1) == doctest::Approx(-sq));
  CHECK(std::abs(h.B(0, 1)) < 1e-15);
  CHECK(h.C.norm() == 0.0);
}

TEST_CASE("equations of motion are recovered from B, C and Omega") {
  // Omega xdot + 1/2 Omegadot x = B x + C along every trajectory
  for (int trial = 0; trial < 5; ++trial) {
    const Mat A = random_stable_generator(4, 40 + trial);
    Vec J = gen::random_matrix(4, 1);
    auto m = build_generic(A, J, canonical_omega0(4), 1.0);
    const auto s = make(m, 3.0);
    const Vec x = gen::random_matrix(4, 1);
    for (double t : {0.0, 1.1, 2.9}) {
      const auto h = hamiltonian_coefficients(*s.ss, t);
      const Vec xdot = A * x + J;
      const Vec lhs = s.ss->omega(t) * xdot + 0.5 * s.ss->omega_dot(t) * x;
      CHECK((lhs - (h.B * x + h.C)).norm() < 1e-10 * std::max(1.0, lhs.norm()));
      CHECK((h.B - h.B.transpose()).norm() == 0.0);
    }
  }
}

TEST_CASE("Poisson bracket of the magnetic oscillator energies vanishes") {
  const double B = 0.8;
  const Mat Pi = canonical_omega0(4).inverse();
  const auto h1 = magnetic_oscillator_energy(B, 1), h2 = magnetic_oscillator_energy(B, 2);
  CHECK(symbol_norm(poisson_bracket(h1, h2, Pi)) < 1e-15);
  CHECK(symbol_norm(poisson_bracket(magnetic_hamiltonian(B), magnetic_angular_momentum(), Pi)) < 1e-15);
  const auto xp = poisson_bracket(coordinate(4, 1), coordinate(4, 0), Pi);
  CHECK(std::abs(xp.polynomial().coeff(MultiIndex{}) - 1.0) < 1e-15);
}

TEST_CASE("action is stationary on classical paths") {
  const auto s = make(build_damped_oscillator(1.0, 0.1, 1.0, OscillatorVariant::Attractor), 4.0);
  PseudoHamiltonianData data(*s.ss);
  const int n = 401;
  const double dt = 4.0 / (n - 1);
  Vec x0(2);
  x0 << 1.0, 0.0;
  std::vector<Vec> path, bump;
  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    path.push_back(classical_trajectory(*s.flow, x0, t));
    Vec e(2);
    e << std::sin(M_PI * t / 4.0), std::sin(2 * M_PI * t / 4.0);
    bump.push_back(e);
  }
  auto shifted = [&](double eps) {
    std::vector<Vec> p = path;
    for (int k = 0; k < n; ++k) p[k] += eps * bump[k];
    return evaluate_action(p, 0.0, dt, data);
  };
  const double eps = 1e-3;
  const double first = (shifted(eps) - shifted(-eps)) / (2 * eps);
  const double second = (shifted(eps) - 2 * shifted(0.0) + shifted(-eps)) / (eps * eps);
  CHECK(std::abs(first) < 1e-3);
  CHECK(std::abs(second) > 1e-2);  // the variation direction is not degenerate
  CHECK_THROWS(evaluate_action({path[0], path[1]}, 0.0, dt, data));
}
