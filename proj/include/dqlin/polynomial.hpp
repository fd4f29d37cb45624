#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dqlin/types.hpp"

namespace dqlin {

/// Largest number of variables a polynomial may carry. Star products of
/// d-dimensional symbols work with 2d variables internally, so this allows
/// phase spaces up to dimension 8.
inline constexpr int kMaxVars = 16;

/// Process-wide cap on total degree (default 64, at most 255).
int degree_cap();
void set_degree_cap(int cap);

class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> exps);

  static MultiIndex unit(int var);

  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  void set(int i, int e);
  int degree() const;

  MultiIndex operator+(const MultiIndex& o) const;
  /// Componentwise difference; caller guarantees `o <= *this` componentwise.
  MultiIndex operator-(const MultiIndex& o) const;
  bool divides(const MultiIndex& o) const;

  /// Shift all exponents up by `offset` variables (for tensor embeddings).
  MultiIndex shifted(int offset) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  std::size_t hash() const;

 private:
  std::array<std::uint8_t, kMaxVars> e_{};
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const { return m.hash(); }
};

/// Sparse multivariate polynomial with complex coefficients.
class Polynomial {
 public:
  using TermMap = std::unordered_map<MultiIndex, Complex, MultiIndexHash>;
  using Term = std::pair<MultiIndex, Complex>;

  explicit Polynomial(int nvars = 0);

  static Polynomial constant(int nvars, Complex c);
  static Polynomial variable(int nvars, int k);
  static Polynomial from_terms(int nvars, const std::vector<Term>& terms);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex coeff(const MultiIndex& m) const;
  void add_term(const MultiIndex& m, Complex c);
  const TermMap& terms() const { return terms_; }
  /// Terms ordered by multi-index, the canonical form used for output and comparison.
  std::vector<Term> sorted_terms() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(Complex s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial derivative(int k) const;
  /// (1/alpha!) d^alpha P, computed termwise with binomial coefficients.
  Polynomial scaled_derivative(const MultiIndex& alpha) const;
  Polynomial conjugate() const;

  Complex evaluate(std::span<const Complex> x) const;
  Complex evaluate(std::span<const double> x) const;

  /// y -> P(S y + shift) where S is nvars x out_vars.
  Polynomial compose_affine(const CMat& S, const CVec& shift) const;

  /// exp(1/2 d^T W d) P for symmetric W (nvars x nvars). Equals E[P(x + Z)]
  /// with Z ~ N(0, W) when W is a covariance.
  Polynomial heat(const CMat& W) const;

  /// Re-index into `total_vars` variables starting at `offset`.
  Polynomial embed(int total_vars, int offset) const;

  /// Drop terms with |c| <= tol.
  Polynomial pruned(double tol) const;
  double max_abs() const;

 private:
  int nvars_;
  TermMap terms_;
};

/// Product of a polynomial with an affine form sum_k a_k x_k + a0.
Polynomial multiply_affine(const Polynomial& p, const CVec& a, Complex a0);

}  // namespace dqlin
