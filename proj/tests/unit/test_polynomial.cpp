#include "doctest.h"

#include "../support/gen.hpp"
#include "../support/oracles.hpp"
#include "dqlin/errors.hpp"
#include "dqlin/polynomial.hpp"

using namespace dqlin;

namespace {
CVec random_point(int d) {
  CVec x(d);
  for (int i = 0; i < d; ++i) x(i) = {gen::uniform(), gen::uniform()};
  return x;
}
Complex eval(const Polynomial& P, const CVec& x) { return P.evaluate(std::span<const Complex>(x.data(), x.size())); }
}  // namespace

TEST_CASE("multi-index arithmetic") {
  const MultiIndex a{1, 2, 0}, b{0, 1, 3};
  CHECK((a + b) == MultiIndex{1, 3, 3});
  CHECK(((a + b) - b) == a);
  CHECK(a.degree() == 3);
  CHECK(MultiIndex{0, 1}.divides(MultiIndex{1, 2}));
  CHECK_FALSE(MultiIndex{2, 0}.divides(MultiIndex{1, 2}));
  CHECK(MultiIndex{1, 2}.shifted(2) == MultiIndex{0, 0, 1, 2});
  CHECK(MultiIndex::unit(3)[3] == 1);
}

TEST_CASE("square of a binomial") {
  const auto x = Polynomial::variable(2, 0), p = Polynomial::variable(2, 1);
  const auto s = (x + p) * (x + p);
  CHECK(s.coeff(MultiIndex{2, 0}) == Complex(1.0));
  CHECK(s.coeff(MultiIndex{1, 1}) == Complex(2.0));
  CHECK(s.coeff(MultiIndex{0, 2}) == Complex(1.0));
  CHECK(s.size() == 3);
  CHECK((s - s).is_zero());
}

TEST_CASE("product is a ring homomorphism under evaluation") {
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 4;
    const auto A = gen::polynomial(d, 4, 5), B = gen::polynomial(d, 4, 5);
    const CVec x = random_point(d);
    CHECK(std::abs(eval(A * B, x) - eval(A, x) * eval(B, x)) < 1e-12 * (1 + std::abs(eval(A * B, x))));
    CHECK(std::abs(eval(A + B, x) - eval(A, x) - eval(B, x)) < 1e-13);
  }
}

TEST_CASE("derivative matches a difference quotient") {
  const auto P = gen::polynomial(3, 5, 6);
  CVec x = random_point(3);
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    CVec xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Complex fd = (eval(P, xp) - eval(P, xm)) / (2 * h);
    CHECK(std::abs(fd - eval(P.derivative(k), x)) < 1e-7);
  }
}

TEST_CASE("scaled derivative divides by alpha factorial") {
  const auto P = Polynomial::from_terms(2, {{MultiIndex{3, 2}, 1.0}});
  const auto D = P.scaled_derivative(MultiIndex{2, 1});
  // (1/2!1!) d^2_x d_p x^3 p^2 = (6 x * 2 p) / 2 = 6 x p
  CHECK(std::abs(D.coeff(MultiIndex{1, 1}) - 6.0) < 1e-15);
}

TEST_CASE("affine composition agrees with evaluation") {
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3, m = 1 + trial % 4;
    const auto P = gen::polynomial(d, 4, 6);
    CMat S(d, m);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < m; ++k) S(i, k) = {gen::uniform(), gen::uniform()};
    const CVec shift = random_point(d);
    const auto Q = P.compose_affine(S, shift);
    CHECK(Q.nvars() == m);
    const CVec y = random_point(m);
    const CVec x = S * y + shift;
    CHECK(std::abs(eval(Q, y) - eval(P, x)) < 1e-11 * (1 + std::abs(eval(P, x))));
  }
}

TEST_CASE("heat operator equals the Gaussian average (quadrature oracle)") {
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 3;
    const auto P = gen::polynomial(d, 6, 6);
    const Mat W = gen::spd(d, 0.3);
    const Vec mu = gen::random_matrix(d, 1);
    const auto H = P.heat(W.cast<Complex>());
    // E[P(mu + Z)], Z ~ N(0, W): density exp(-1/2 z^T W^-1 z)/sqrt((2pi)^d det W)
    const Mat Winv = W.inverse();
    const Complex avg = oracle::gaussian_cubature(
                            Winv,
                            [&](const Vec& z) {
                              std::vector<double> pt(d);
                              for (int i = 0; i < d; ++i) pt[i] = mu(i) + z(i);
                              return P.evaluate(std::span<const double>(pt));
                            },
                            8) /
                        std::sqrt(std::pow(2 * M_PI, d) * W.determinant());
    std::vector<double> m(mu.data(), mu.data() + d);
    CHECK(std::abs(H.evaluate(std::span<const double>(m)) - avg) < 1e-10 * (1 + std::abs(avg)));
  }
}

TEST_CASE("degree cap is enforced") {
  const int old = degree_cap();
  set_degree_cap(6);
  const auto x = Polynomial::variable(1, 0);
  auto p = x * x * x;
  CHECK_THROWS_AS(p * p * x, DegreeOverflow);
  set_degree_cap(old);
  CHECK_NOTHROW(p * p * x);
}

TEST_CASE("embedding and conjugation") {
  const auto P = Polynomial::from_terms(2, {{MultiIndex{1, 1}, Complex(1.0, 2.0)}});
  const auto E = P.embed(4, 2);
  CHECK(E.coeff(MultiIndex{0, 0, 1, 1}) == Complex(1.0, 2.0));
  CHECK(P.conjugate().coeff(MultiIndex{1, 1}) == Complex(1.0, -2.0));
  CHECK(P.pruned(10.0).is_zero());
}

TEST_CASE("multiply by an affine form") {
  const auto P = gen::polynomial(3, 3, 4);
  CVec a(3);
  a << Complex(1, 0), Complex(0, 1), Complex(-2, 0.5);
  const Complex a0(0.3, -0.1);
  const auto Q = multiply_affine(P, a, a0);
  const CVec x = random_point(3);
  CHECK(std::abs(eval(Q, x) - eval(P, x) * ((a.transpose() * x)(0) + a0)) <
        1e-12 * (1 + std::abs(eval(Q, x))));
}
