#include "dqlin/polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <string>

#include "dqlin/errors.hpp"

namespace dqlin {

namespace {

std::atomic<int> g_degree_cap{64};

void check_degree(int deg) {
  if (deg > g_degree_cap.load(std::memory_order_relaxed)) {
    throw DegreeOverflow("polynomial degree " + std::to_string(deg) + " exceeds cap " +
                         std::to_string(g_degree_cap.load()));
  }
}

// n (n-1) ... (n-k+1)
double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

int degree_cap() { return g_degree_cap.load(); }

void set_degree_cap(int cap) {
  if (cap < 1 || cap > 255) throw InputError("degree cap must lie in [1, 255]");
  g_degree_cap.store(cap);
}

MultiIndex::MultiIndex(std::initializer_list<int> exps) {
  if (exps.size() > static_cast<std::size_t>(kMaxVars)) throw DimensionError("too many variables");
  int i = 0;
  for (int e : exps) set(i++, e);
}

MultiIndex MultiIndex::unit(int var) {
  MultiIndex m;
  m.set(var, 1);
  return m;
}

void MultiIndex::set(int i, int e) {
  if (i < 0 || i >= kMaxVars) throw DimensionError("multi-index variable out of range");
  if (e < 0 || e > 255) throw DegreeOverflow("exponent out of range");
  e_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
}

int MultiIndex::degree() const {
  int d = 0;
  for (auto v : e_) d += v;
  return d;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    int s = e_[i] + o.e_[i];
    if (s > 255) throw DegreeOverflow("exponent overflow");
    r.e_[i] = static_cast<std::uint8_t>(s);
  }
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  MultiIndex r;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = static_cast<std::uint8_t>(e_[i] - o.e_[i]);
  return r;
}

bool MultiIndex::divides(const MultiIndex& o) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

MultiIndex MultiIndex::shifted(int offset) const {
  MultiIndex r;
  for (int i = 0; i < kMaxVars; ++i) {
    if (e_[static_cast<std::size_t>(i)] == 0) continue;
    r.set(i + offset, e_[static_cast<std::size_t>(i)]);
  }
  return r;
}

std::size_t MultiIndex::hash() const {
  // FNV-1a over the exponent bytes
  std::size_t h = 1469598103934665603ull;
  for (auto v : e_) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return h;
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxVars) throw DimensionError("unsupported number of variables");
}

Polynomial Polynomial::constant(int nvars, Complex c) {
  Polynomial p(nvars);
  p.add_term(MultiIndex{}, c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int k) {
  if (k < 0 || k >= nvars) throw DimensionError("variable index out of range");
  Polynomial p(nvars);
  p.add_term(MultiIndex::unit(k), 1.0);
  return p;
}

Polynomial Polynomial::from_terms(int nvars, const std::vector<Term>& terms) {
  Polynomial p(nvars);
  for (const auto& [m, c] : terms) p.add_term(m, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

Complex Polynomial::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

void Polynomial::add_term(const MultiIndex& m, Complex c) {
  if (c == Complex{}) return;
  for (int i = nvars_; i < kMaxVars; ++i)
    if (m[i] != 0) throw DimensionError("multi-index uses variable beyond polynomial dimension");
  check_degree(m.degree());
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

std::vector<Polynomial::Term> Polynomial::sorted_terms() const {
  std::vector<Term> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionError("polynomial dimension mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionError("polynomial dimension mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionError("polynomial dimension mismatch");
  Polynomial r(a.nvars_);
  if (a.is_zero() || b.is_zero()) return r;
  check_degree(a.degree() + b.degree());
  r.terms_.reserve(a.size() * b.size());
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.terms_[ma + mb] += ca * cb;
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second == Complex{}; });
  return r;
}

Polynomial Polynomial::derivative(int k) const {
  if (k < 0 || k >= nvars_) throw DimensionError("derivative direction out of range");
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    int e = m[k];
    if (e == 0) continue;
    MultiIndex m2 = m;
    m2.set(k, e - 1);
    r.add_term(m2, c * static_cast<double>(e));
  }
  return r;
}

Polynomial Polynomial::scaled_derivative(const MultiIndex& alpha) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (!alpha.divides(m)) continue;
    double w = 1.0;
    for (int i = 0; i < nvars_; ++i) w *= binomial(m[i], alpha[i]);
    r.add_term(m - alpha, c * w);
  }
  return r;
}

Polynomial Polynomial::conjugate() const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, std::conj(c));
  return r;
}

namespace {

template <class T>
Complex evaluate_impl(const Polynomial& p, std::span<const T> x) {
  const int n = p.nvars();
  if (static_cast<int>(x.size()) != n) throw DimensionError("evaluation point has wrong dimension");
  const int deg = p.degree();
  std::vector<Complex> pw(static_cast<std::size_t>(n * (deg + 1)));
  for (int i = 0; i < n; ++i) {
    Complex acc = 1.0;
    for (int e = 0; e <= deg; ++e) {
      pw[static_cast<std::size_t>(i * (deg + 1) + e)] = acc;
      acc *= Complex(x[static_cast<std::size_t>(i)]);
    }
  }
  Complex sum{};
  for (const auto& [m, c] : p.terms()) {
    Complex v = c;
    for (int i = 0; i < n; ++i)
      if (m[i]) v *= pw[static_cast<std::size_t>(i * (deg + 1) + m[i])];
    sum += v;
  }
  return sum;
}

}  // namespace

Complex Polynomial::evaluate(std::span<const Complex> x) const { return evaluate_impl(*this, x); }
Complex Polynomial::evaluate(std::span<const double> x) const { return evaluate_impl(*this, x); }

Polynomial Polynomial::compose_affine(const CMat& S, const CVec& shift) const {
  if (S.rows() != nvars_ || shift.size() != nvars_)
    throw DimensionError("affine substitution has wrong shape");
  const int m = static_cast<int>(S.cols());
  if (is_zero()) return Polynomial(m);

  // forms[k] = sum_j S(k,j) y_j + shift_k, with cached powers
  std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(nvars_));
  std::vector<int> max_exp(static_cast<std::size_t>(nvars_), 0);
  for (const auto& [mi, c] : terms_)
    for (int k = 0; k < nvars_; ++k) max_exp[k] = std::max(max_exp[k], mi[k]);
  for (int k = 0; k < nvars_; ++k) {
    Polynomial form(m);
    for (int j = 0; j < m; ++j) form.add_term(MultiIndex::unit(j), S(k, j));
    form.add_term(MultiIndex{}, shift(k));
    auto& pk = powers[k];
    pk.push_back(Polynomial::constant(m, 1.0));
    for (int e = 1; e <= max_exp[k]; ++e) pk.push_back(pk.back() * form);
  }

  // Horner-style elimination one variable at a time: group terms by the
  // exponent of variable k, recurse on the rest, then multiply by form_k^e.
  std::vector<Term> all(terms_.begin(), terms_.end());
  auto rec = [&](auto&& self, std::vector<Term>& ts, int k) -> Polynomial {
    if (k == nvars_) {
      Complex s{};
      for (const auto& t : ts) s += t.second;
      return Polynomial::constant(m, s);
    }
    std::map<int, std::vector<Term>> groups;
    for (auto& t : ts) {
      int e = t.first[k];
      MultiIndex rest = t.first;
      rest.set(k, 0);
      groups[e].emplace_back(rest, t.second);
    }
    Polynomial out(m);
    for (auto& [e, sub] : groups) {
      Polynomial inner = self(self, sub, k + 1);
      if (e == 0)
        out += inner;
      else
        out += powers[k][static_cast<std::size_t>(e)] * inner;
    }
    return out;
  };
  return rec(rec, all, 0);
}

Polynomial Polynomial::heat(const CMat& W) const {
  if (W.rows() != nvars_ || W.cols() != nvars_) throw DimensionError("heat kernel has wrong shape");
  Polynomial cur = *this;
  for (int i = 0; i < nvars_; ++i) {
    const Complex a = 0.5 * W(i, i);
    if (a == Complex{}) continue;
    Polynomial next(nvars_);
    for (const auto& [m, c] : cur.terms_) {
      const int e = m[i];
      Complex ak = 1.0;
      double kfact = 1.0;
      for (int k = 0; 2 * k <= e; ++k) {
        if (k > 0) {
          ak *= a;
          kfact *= k;
        }
        MultiIndex m2 = m;
        m2.set(i, e - 2 * k);
        next.add_term(m2, c * ak * (falling(e, 2 * k) / kfact));
      }
    }
    cur = std::move(next);
  }
  for (int i = 0; i < nvars_; ++i) {
    for (int j = i + 1; j < nvars_; ++j) {
      const Complex w = 0.5 * (W(i, j) + W(j, i));
      if (w == Complex{}) continue;
      Polynomial next(nvars_);
      for (const auto& [m, c] : cur.terms_) {
        const int ei = m[i], ej = m[j];
        Complex wk = 1.0;
        double kfact = 1.0;
        for (int k = 0; k <= std::min(ei, ej); ++k) {
          if (k > 0) {
            wk *= w;
            kfact *= k;
          }
          MultiIndex m2 = m;
          m2.set(i, ei - k);
          m2.set(j, ej - k);
          next.add_term(m2, c * wk * (falling(ei, k) * falling(ej, k) / kfact));
        }
      }
      cur = std::move(next);
    }
  }
  return cur;
}

Polynomial Polynomial::embed(int total_vars, int offset) const {
  if (offset < 0 || offset + nvars_ > total_vars) throw DimensionError("embedding out of range");
  Polynomial r(total_vars);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m.shifted(offset), c);
  return r;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) r.terms_.emplace(m, c);
  return r;
}

double Polynomial::max_abs() const {
  double r = 0.0;
  for (const auto& [m, c] : terms_) r = std::max(r, std::abs(c));
  return r;
}

Polynomial multiply_affine(const Polynomial& p, const CVec& a, Complex a0) {
  const int n = p.nvars();
  if (a.size() != n) throw DimensionError("affine form has wrong dimension");
  Polynomial r(n);
  for (const auto& [m, c] : p.terms()) {
    r.add_term(m, c * a0);
    for (int k = 0; k < n; ++k)
      if (a(k) != Complex{}) r.add_term(m + MultiIndex::unit(k), c * a(k));
  }
  return r;
}

}  // namespace dqlin
