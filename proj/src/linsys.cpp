#include "dqlin/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "dqlin/errors.hpp"

namespace dqlin {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

void check_dim(int dim) {
  if (dim < 2 || dim % 2 != 0) throw InputError("phase-space dimension must be even and at least 2");
}

// State layout: Gamma column-major (dim*dim entries), then v.
void pack(const Mat& G, const Vec& v, State& y) {
  const auto n = static_cast<std::size_t>(G.rows());
  y.resize(n * n + n);
  std::copy(G.data(), G.data() + n * n, y.begin());
  std::copy(v.data(), v.data() + n, y.begin() + static_cast<long>(n * n));
}

void unpack(const State& y, int dim, Mat& G, Vec& v) {
  const auto n = static_cast<std::size_t>(dim);
  G = Eigen::Map<const Mat>(y.data(), dim, dim);
  v = Eigen::Map<const Vec>(y.data() + n * n, dim);
}

struct Rhs {
  const LinearSystem* sys;
  void operator()(const State& y, State& dy, double t) const {
    const int n = sys->dim();
    Mat G;
    Vec v;
    unpack(y, n, G, v);
    const Mat A = sys->A(t);
    pack(A * G, A * v + sys->J(t), dy);
  }
};

Mat invert(const Mat& G) {
  Eigen::PartialPivLU<Mat> lu(G);
  return lu.solve(Mat::Identity(G.rows(), G.cols()));
}

std::vector<double> checkpoints(double t_max, const FlowOptions& opt) {
  std::vector<double> pts = opt.output_times;
  pts.push_back(t_max);
  std::erase_if(pts, [&](double t) { return !(t > 0.0) || t > t_max; });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Gamma(t) and v(t) from one exponential of the augmented generator
// [[A, J], [0, 0]].
void closed_form_at(const Mat& A, const Vec& J, double t, Mat& G, Vec& v) {
  const int n = static_cast<int>(A.rows());
  Mat aug = Mat::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = A * t;
  aug.topRightCorner(n, 1) = J * t;
  const Mat e = aug.exp();
  G = e.topLeftCorner(n, n);
  v = e.topRightCorner(n, 1);
}

}  // namespace

LinearSystem LinearSystem::constant(const Mat& A, const Vec& J) {
  check_dim(static_cast<int>(A.rows()));
  if (A.cols() != A.rows() || J.size() != A.rows()) throw InputError("generator and inhomogeneity shapes differ");
  if (!A.allFinite() || !J.allFinite()) throw InputError("non-finite entries in system data");
  LinearSystem s;
  s.dim_ = static_cast<int>(A.rows());
  s.autonomous_ = true;
  s.homogeneous_ = J.isZero(0.0);
  s.A_ = [A](double) { return A; };
  s.J_ = [J](double) { return J; };
  return s;
}

LinearSystem LinearSystem::constant(const Mat& A) { return constant(A, Vec::Zero(A.rows())); }

LinearSystem LinearSystem::time_dependent(int dim, MatrixFn A, VectorFn J) {
  check_dim(dim);
  LinearSystem s;
  s.dim_ = dim;
  s.autonomous_ = false;
  s.homogeneous_ = !J;
  s.A_ = std::move(A);
  s.J_ = J ? std::move(J) : VectorFn([dim](double) { return Vec(Vec::Zero(dim)); });
  return s;
}

Mat LinearSystem::A(double t) const {
  Mat a = A_(t);
  if (a.rows() != dim_ || a.cols() != dim_) throw InputError("generator has wrong shape");
  if (!a.allFinite()) throw InputError("non-finite generator at t = " + std::to_string(t));
  return a;
}

Vec LinearSystem::J(double t) const {
  Vec j = J_(t);
  if (j.size() != dim_) throw InputError("inhomogeneity has wrong shape");
  if (!j.allFinite()) throw InputError("non-finite inhomogeneity at t = " + std::to_string(t));
  return j;
}

std::vector<double> FlowSolution::t_grid() const {
  std::vector<double> t;
  t.reserve(samples_.size());
  for (const auto& s : samples_) t.push_back(s.t);
  return t;
}

FlowSample FlowSolution::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, t_max_);
  if (!(t >= -slack && t <= t_max_ + slack))
    throw RangeError("time " + std::to_string(t) + " outside flow range [0, " + std::to_string(t_max_) + "]");
  t = std::clamp(t, 0.0, t_max_);
  FlowSample out;
  out.t = t;
  if (closed_form_) {
    closed_form_at(A_, J_, t, out.Gamma, out.v);
    out.Lambda = invert(out.Gamma);
    return out;
  }
  auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const FlowSample& s, double x) { return s.t < x; });
  if (it != samples_.end() && it->t == t) return *it;
  const auto k1 = static_cast<std::size_t>(it - samples_.begin());
  const std::size_t k0 = k1 - 1;
  const FlowSample& a = samples_[k0];
  const FlowSample& b = samples_[k1];
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = (2 * s - 3) * s * s + 1;
  const double h10 = ((s - 2) * s + 1) * s;
  const double h01 = (3 - 2 * s) * s * s;
  const double h11 = (s - 1) * s * s;
  out.Gamma = h00 * a.Gamma + h10 * h * dGamma_[k0] + h01 * b.Gamma + h11 * h * dGamma_[k1];
  out.v = h00 * a.v + h10 * h * dv_[k0] + h01 * b.v + h11 * h * dv_[k1];
  out.Lambda = invert(out.Gamma);
  return out;
}

FlowSolution fundamental_matrix(const LinearSystem& sys, double t_max, const FlowOptions& opt) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InputError("t_max must be finite and non-negative");
  if (!(opt.tolerance > 0.0)) throw InputError("integration tolerance must be positive");
  const int n = sys.dim();

  FlowSolution flow;
  flow.dim_ = n;
  flow.t_max_ = t_max;

  FlowMethod method = opt.method;
  if (method == FlowMethod::Automatic)
    method = sys.autonomous() ? FlowMethod::MatrixExponential : FlowMethod::Adaptive;
  if (method == FlowMethod::MatrixExponential && !sys.autonomous())
    throw InputError("matrix exponential path requires an autonomous system");

  const std::vector<double> pts = checkpoints(t_max, opt);

  if (method == FlowMethod::MatrixExponential) {
    flow.closed_form_ = true;
    flow.A_ = sys.A(0.0);
    flow.J_ = sys.J(0.0);
    flow.samples_.push_back({0.0, Mat::Identity(n, n), Mat::Identity(n, n), Vec::Zero(n)});
    for (double t : pts) flow.samples_.push_back(flow.at(t));
    return flow;
  }

  Rhs rhs{&sys};
  State y;
  pack(Mat::Identity(n, n), Vec::Zero(n), y);
  auto record = [&](double t, const State& state) {
    FlowSample s;
    s.t = t;
    unpack(state, n, s.Gamma, s.v);
    s.Lambda = invert(s.Gamma);
    const Mat A = sys.A(t);
    flow.dGamma_.push_back(A * s.Gamma);
    flow.dv_.push_back(A * s.v + sys.J(t));
    flow.samples_.push_back(std::move(s));
  };
  record(0.0, y);
  if (pts.empty()) return flow;  // t_max = 0

  double t = 0.0;
  if (method == FlowMethod::FixedStep) {
    if (!(opt.fixed_step > 0.0)) throw InputError("fixed step must be positive");
    odeint::runge_kutta4<State> stepper;
    for (double target : pts) {
      const auto steps = static_cast<long>(std::ceil((target - t) / opt.fixed_step - 1e-9));
      const double h = (target - t) / static_cast<double>(std::max(1L, steps));
      for (long k = 0; k < std::max(1L, steps); ++k) {
        stepper.do_step(rhs, y, t, h);
        t = (k + 1 == std::max(1L, steps)) ? target : t + h;
        record(t, y);
      }
    }
    return flow;
  }

  auto stepper = odeint::make_controlled(opt.tolerance, opt.tolerance, odeint::runge_kutta_dopri5<State>());
  double dt = std::min(1e-3, pts.front());
  for (double target : pts) {
    while (t < target) {
      double step = std::min(dt, target - t);
      const bool lands = step >= target - t;
      if (step < opt.min_step * std::max(1.0, std::abs(t)))
        throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
      const double clipped = step;
      // on success odeint advances t and proposes the next step in `step`
      if (stepper.try_step(rhs, y, t, step) == odeint::success) {
        if (lands) t = target;
        record(t, y);
        dt = lands ? std::max(dt, step) : step;
      } else {
        dt = std::min(step, 0.5 * clipped);
      }
      for (double v : y)
        if (!std::isfinite(v)) throw IntegrationError("non-finite state at t = " + std::to_string(t), t);
    }
  }
  return flow;
}

Vec classical_trajectory(const FlowSolution& flow, const Vec& x0, double t) {
  if (x0.size() != flow.dim()) throw DimensionError("initial point has wrong dimension");
  const FlowSample s = flow.at(t);
  return s.Gamma * x0 + s.v;
}

LorentzCoefficients reduced_lorentz_coefficients(double e, double H) {
  if (!std::isfinite(e) || !std::isfinite(H)) throw InputError("charge and field must be finite");
  // Rationalized form of (6 - sqrt(6) sqrt(3 + r)) / (8 e^2) with r = sqrt(9 + 64 e^6 H^2);
  // it has no cancellation for small e and is exactly 0 at e = 0.
  const long double el = e, hl = H;
  const long double s = 64.0L * el * el * el * el * el * el * hl * hl;
  const long double r = std::sqrt(9.0L + s);
  const long double a = -48.0L * el * el * el * el * hl * hl / ((3.0L + r) * (6.0L + std::sqrt(18.0L + 6.0L * r)));
  const long double b = el * hl * std::sqrt(6.0L) / std::sqrt(3.0L + r);
  return {static_cast<double>(a), static_cast<double>(b)};
}

}  // namespace dqlin
