#pragma once
// Reference computations that share no code with the library: quadrature,
// dense 2-d Moyal series, eigen-decomposition matrix exponentials, pairings.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Rule {
  std::vector<double> nodes, weights;
};

// Golub-Welsch for the weight exp(-x^2/2); weights sum to sqrt(2 pi).
inline Rule gauss_hermite(int n) {
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Rule r;
  for (int k = 0; k < n; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    r.weights.push_back(std::sqrt(2.0 * M_PI) * v * v);
  }
  return r;
}

// Integral over R^d of exp(-1/2 x^T M x) g(x) for real SPD M, by tensor
// Gauss-Hermite in the Cholesky frame x = L^{-T} y.
inline cd gaussian_cubature(const Mat& M, const std::function<cd(const Vec&)>& g, int n) {
  const int d = static_cast<int>(M.rows());
  Eigen::LLT<Mat> llt(M);
  const Mat L = llt.matrixL();
  const Mat T = L.transpose().inverse();
  const Rule r = gauss_hermite(n);
  std::vector<int> idx(d, 0);
  cd sum = 0.0;
  Vec y(d);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      y(i) = r.nodes[idx[i]];
      w *= r.weights[idx[i]];
    }
    sum += w * g(T * y);
    int k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
  return sum / L.diagonal().prod();
}

// e^{A t} from the complex eigen-decomposition (A diagonalizable).
inline Mat expm_eig(const Mat& A, double t) {
  Eigen::EigenSolver<Mat> es(A);
  const Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::VectorXcd lam = es.eigenvalues();
  for (int k = 0; k < lam.size(); ++k) lam(k) = std::exp(lam(k) * t);
  return (V * lam.asDiagonal() * V.inverse()).real();
}

// Dense polynomial in (x, p): coefficient of x^a p^b.
using Poly2 = std::map<std::pair<int, int>, cd>;

inline Poly2 deriv2(const Poly2& f, int dx, int dp) {
  Poly2 out;
  for (const auto& [e, c] : f) {
    if (e.first < dx || e.second < dp) continue;
    double k = 1.0;
    for (int i = 0; i < dx; ++i) k *= e.first - i;
    for (int i = 0; i < dp; ++i) k *= e.second - i;
    out[{e.first - dx, e.second - dp}] += c * k;
  }
  return out;
}

inline Poly2 mul2(const Poly2& f, const Poly2& g) {
  Poly2 out;
  for (const auto& [a, c] : f)
    for (const auto& [b, d] : g) out[{a.first + b.first, a.second + b.second}] += c * d;
  return out;
}

// Moyal product with {p, x} = 1:
// f * g = sum_k (i hbar / 2)^k / k! sum_j C(k, j) (-1)^(k-j) d_x^(k-j) d_p^j f  d_p^(k-j) d_x^j g
inline Poly2 moyal2(const Poly2& f, const Poly2& g, double hbar) {
  int deg = 0;
  for (const auto& [e, c] : f) deg = std::max(deg, e.first + e.second);
  Poly2 out;
  cd pref = 1.0;
  for (int k = 0; k <= deg; ++k) {
    if (k > 0) pref *= cd(0.0, hbar / 2.0) / static_cast<double>(k);
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * (k - j + 1) / j;
      const double sign = ((k - j) % 2) ? -1.0 : 1.0;
      for (const auto& [e, c] : mul2(deriv2(f, k - j, j), deriv2(g, j, k - j))) out[e] += pref * binom * sign * c;
    }
  }
  return out;
}

// Isserlis: E[prod x_{idx}] for a centred Gaussian with covariance C.
inline double isserlis(const std::vector<int>& idx, const Mat& C) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2) return 0.0;
  double s = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    std::vector<int> rest;
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (m != k) rest.push_back(idx[m]);
    s += C(idx[0], idx[k]) * isserlis(rest, C);
  }
  return s;
}

}  // namespace oracle
