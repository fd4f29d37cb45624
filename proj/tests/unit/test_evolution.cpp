#include "doctest.h"

#include "../support/gen.hpp"
#include "dqlin/errors.hpp"
#include "dqlin/evolution.hpp"
#include "dqlin/models.hpp"
#include "dqlin/star.hpp"
#include "dqlin/states.hpp"

using namespace dqlin;

namespace {
struct Run {
  ModelDefinition m;
  std::shared_ptr<const FlowSolution> flow;
  std::shared_ptr<SymplecticStructure> ss;
  std::shared_ptr<EvolvedState> state;
};
Run run(ModelDefinition m, const GaussPolySymbol& rho0, double t_max) {
  Run r{std::move(m), nullptr, nullptr, nullptr};
  r.flow = std::make_shared<FlowSolution>(fundamental_matrix(*r.m.system, t_max));
  r.ss = std::make_shared<SymplecticStructure>(r.m.system, r.flow, r.m.omega0);
  r.state = std::make_shared<EvolvedState>(rho0, r.flow);
  return r;
}
Run oscillator(int n, double t_max = 10.0) {
  return run(build_damped_oscillator(1.0, 0.1, 1.0, OscillatorVariant::Attractor), oscillator_eigenstate({1.0, 1.0, n}),
             t_max);
}
// family t -> symbol with slowly varying data
SymbolFamily random_family(int d) {
  const auto base = gen::gaussian_symbol(d, 2, 0.1);
  const Mat dM = 0.2 * gen::symmetric(d);
  const Vec db = 0.3 * gen::random_matrix(d, 1);
  const auto dP = gen::polynomial(d, 2, 3);
  return [=](double t) {
    Polynomial P = base.polynomial() + dP * Complex(std::sin(t), 0.0);
    return GaussPolySymbol(base.quadratic() + (t * t * dM).cast<Complex>(), base.linear() + (t * db).cast<Complex>(),
                           base.constant() + 0.1 * t, P);
  };
}
}  // namespace

TEST_CASE("evolved state is the pullback along the inverse flow") {
  auto r = oscillator(2);
  const Vec x = gen::random_matrix(2, 1);
  for (double t : {0.0, 1.5, 7.25}) {
    const auto s = r.flow->at(t);
    const Vec y = s.Lambda * (x - s.v);
    const auto rt = r.state->at(t);
    CHECK(std::abs(rt(std::span<const double>(x.data(), 2)) - r.state->initial()(std::span<const double>(y.data(), 2))) <
          1e-12);
  }
}

TEST_CASE("oscillator mean energy decays like the classical energy") {
  auto r = oscillator(1);
  const auto H = r.m.observables.at("H");
  Vec xi(2);
  xi << 0.3, -1.1;
  const double h0 = 0.5 * (xi(1) * xi(1) + xi(0) * xi(0));
  for (double t = 0.0; t <= 10.0; t += 0.5) {
    const Vec g = r.flow->at(t).Gamma * xi;
    const double classical = 0.5 * (g(1) * g(1) + g(0) * g(0)) / h0;
    const Complex q = expectation_value(H, *r.state, t, *r.ss, 1.0);
    CHECK(std::abs(q.real() / 1.5 - classical) < 1e-12);
    CHECK(std::abs(q.imag()) < 1e-14);
  }
}

TEST_CASE("expectation routes agree where the explicit symbol is well conditioned") {
  auto r = run(build_magnetic_charge(1.0, 1.0, 1.0), magnetic_eigenstate({reduced_lorentz_coefficients(1, 1).frequency, 1.0, 1, 1}), 3.0);
  for (const auto& name : {"H", "L", "x", "q"}) {
    const auto& F = r.m.observables.at(name);
    for (double t : {0.0, 1.0, 3.0}) {
      const Complex a = expectation_value(F, *r.state, t, *r.ss, 1.0, ExpectationRoute::Transported);
      const Complex b = expectation_value(F, *r.state, t, *r.ss, 1.0, ExpectationRoute::Direct);
      const Complex c = expectation_value(F, *r.state, t, *r.ss, 1.0, ExpectationRoute::Pointwise);
      CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
      CHECK(std::abs(a - c) < 1e-9 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("magnetic model: zero means and <L>(0) = M") {
  const double B = reduced_lorentz_coefficients(1, 1).frequency;
  auto r = run(build_magnetic_charge(1.0, 1.0, 1.0), magnetic_eigenstate({B, 1.0, 2, 1}), 10.0);
  for (const auto& name : {"x", "p", "y", "q"})
    for (double t : {0.0, 2.0, 10.0})
      CHECK(std::abs(expectation_value(r.m.observables.at(name), *r.state, t, *r.ss, 1.0)) < 1e-10);
  // K and N vanish in the eigenstate itself, not along the evolution
  for (const auto& name : {"K", "N"})
    CHECK(std::abs(expectation_value(r.m.observables.at(name), *r.state, 0.0, *r.ss, 1.0)) < 1e-12);
  CHECK(std::abs(expectation_value(r.m.observables.at("L"), *r.state, 0.0, *r.ss, 1.0) - (-1.0)) < 1e-12);
}

TEST_CASE("angular momentum decomposition reproduces the series") {
  const auto lc = reduced_lorentz_coefficients(1, 1);
  auto r = run(build_magnetic_charge(1.0, 1.0, 1.0), magnetic_eigenstate({lc.frequency, 1.0, 1, 2}), 8.0);
  std::vector<double> grid{0.0, 0.5, 2.0, 8.0};
  const auto s = angular_momentum_series(*r.state, grid, *r.ss, 1.0, lc.frequency);
  REQUIRE(s.coefficients.size() == grid.size());
  CHECK(s.coefficients[0][0] == doctest::Approx(1.0));
  CHECK(std::abs(s.coefficients[0][1]) < 1e-12);
  const double E = lc.frequency * 1.5, M = 1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(s.fit_residual[k] < 1e-10);
    // <L> = c_L M + c_H E since <K> = <N> = 0
    CHECK(s.series.values[k].real() ==
          doctest::Approx(s.coefficients[k][0] * M + s.coefficients[k][1] * E).epsilon(1e-10));
    // closed-form coefficient of H
    const double A = lc.friction, Bf = lc.frequency, t = grid[k];
    const double alpha = (2 * A * A + Bf * Bf - 2 * A * A * std::exp(A * t) * std::cos(Bf * t) -
                          Bf * Bf * std::exp(2 * A * t)) /
                         (Bf * (A * A + Bf * Bf));
    CHECK(s.coefficients[k][1] == doctest::Approx(alpha).epsilon(1e-9));
  }
}

TEST_CASE("quantum Liouville equation: second-order residual and a frozen control") {
  auto r = oscillator(2);
  const SymbolFamily fam = [&](double t) { return r.state->at(t); };
  const double t = 3.0;
  const double coarse = quantum_liouville_residual(fam, t, *r.ss, 1.0, 0.1);
  const double fine = quantum_liouville_residual(fam, t, *r.ss, 1.0, 0.05);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
  const SymbolFamily frozen = [&](double) { return r.state->at(t); };
  CHECK(quantum_liouville_residual(frozen, t, *r.ss, 1.0) > 1e3 * quantum_liouville_residual(fam, t, *r.ss, 1.0));
}

TEST_CASE("bracket and star forms of the extended derivative agree") {
  auto r = run(build_magnetic_charge(1.0, 1.0, 1.0), magnetic_eigenstate({reduced_lorentz_coefficients(1, 1).frequency, 1.0, 0, 0}), 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fam = random_family(4);
    const double t = 0.5 + 0.3 * trial;
    const auto a = extended_time_derivative(fam, t, *r.ss, 1.0, DerivativeForm::Bracket, 1e-3);
    const auto b = extended_time_derivative(fam, t, *r.ss, 1.0, DerivativeForm::Star, 1e-3);
    CHECK(relative_distance(a, b) < 1e-12);
  }
  CHECK_THROWS_AS(extended_time_derivative(random_family(4), 3.9999, *r.ss, 1.0, DerivativeForm::Bracket, 1e-3),
                  RangeError);
}

TEST_CASE("classical transport conserves the Liouville mass") {
  auto r = oscillator(0);
  CMat M = CMat::Identity(2, 2) * 3.0;
  const auto rho = scale(make_gaussian(M, CVec::Zero(2), 0.0), 3.0 / (2 * M_PI));
  for (double t : {0.0, 4.0, 10.0}) CHECK(normalization_check(rho, *r.ss, t) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("attractor: moments shrink, mass stays one") {
  auto r = oscillator(1, 100.0);
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(10.0 * k);
  const auto am = attractor_moments(*r.state, grid, *r.ss, 1.0);
  CHECK(am.stable);
  for (double m : am.mass) CHECK(std::abs(m - 1.0) < 1e-8);
  CHECK(am.second_moments.back().norm() < 1e-6 * am.second_moments.front().norm());
}

TEST_CASE("attractor: unstable generators carry a warning") {
  Mat A(2, 2);
  A << 0.1, 1.0, -1.0, 0.1;
  auto r = run(build_generic(A, Vec::Zero(2), canonical_omega0(2), 1.0), oscillator_eigenstate({1.0, 1.0, 0}), 2.0);
  const auto am = attractor_moments(*r.state, {0.0, 1.0, 2.0}, *r.ss, 1.0);
  CHECK_FALSE(am.stable);
  CHECK_FALSE(am.warning.empty());
}
