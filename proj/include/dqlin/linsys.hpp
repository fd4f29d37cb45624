#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dqlin/types.hpp"

namespace dqlin {

/// First-order system xdot = A(t) x + J(t) on a 2n-dimensional phase space.
class LinearSystem {
 public:
  using MatrixFn = std::function<Mat(double)>;
  using VectorFn = std::function<Vec(double)>;

  static LinearSystem constant(const Mat& A, const Vec& J);
  static LinearSystem constant(const Mat& A);
  static LinearSystem time_dependent(int dim, MatrixFn A, VectorFn J);

  int dim() const { return dim_; }
  bool autonomous() const { return autonomous_; }

  /// Generator at time t; throws InputError on non-finite entries.
  Mat A(double t) const;
  Vec J(double t) const;
  bool homogeneous() const { return homogeneous_; }

 private:
  LinearSystem() = default;
  int dim_ = 0;
  bool autonomous_ = false;
  bool homogeneous_ = false;
  MatrixFn A_;
  VectorFn J_;
};

enum class FlowMethod {
  Automatic,         ///< matrix exponential for autonomous systems, adaptive otherwise
  MatrixExponential,
  Adaptive,          ///< embedded Dormand-Prince 5(4) with error control
  FixedStep,         ///< classical fourth-order Runge-Kutta with step `fixed_step`
};

struct FlowOptions {
  double tolerance = 1e-10;
  FlowMethod method = FlowMethod::Automatic;
  double fixed_step = 0.01;
  /// Times the integrator must land on exactly. Empty: only 0 and t_max.
  std::vector<double> output_times;
  /// Relative step size below which the adaptive integrator gives up.
  double min_step = 1e-13;
};

struct FlowSample {
  double t = 0.0;
  Mat Gamma;
  Mat Lambda;
  Vec v;
};

/// Fundamental solution Gamma(t), its inverse Lambda(t) and the particular
/// solution v(t) with v(0) = 0, on [0, t_max].
class FlowSolution {
 public:
  int dim() const { return dim_; }
  double t_max() const { return t_max_; }
  bool closed_form() const { return closed_form_; }
  int interp_order() const { return closed_form_ ? 0 : 3; }

  /// Stored samples (integrator steps or requested output times).
  const std::vector<FlowSample>& samples() const { return samples_; }
  std::vector<double> t_grid() const;

  /// Flow at arbitrary t in [0, t_max]: exact for the matrix-exponential path,
  /// cubic Hermite between integrator steps otherwise.
  FlowSample at(double t) const;

 private:
  friend FlowSolution fundamental_matrix(const LinearSystem&, double, const FlowOptions&);
  int dim_ = 0;
  double t_max_ = 0.0;
  bool closed_form_ = false;
  Mat A_;       // constant generator (closed form only)
  Vec J_;
  std::vector<FlowSample> samples_;
  std::vector<Mat> dGamma_;  // time derivatives at samples, for Hermite interpolation
  std::vector<Vec> dv_;
};

FlowSolution fundamental_matrix(const LinearSystem& sys, double t_max, const FlowOptions& options = {});

/// Gamma(t) x0 + v(t).
Vec classical_trajectory(const FlowSolution& flow, const Vec& x0, double t);

struct LorentzCoefficients {
  double friction;   ///< A
  double frequency;  ///< B
};

/// Friction and effective cyclotron frequency of the reduced Lorentz equation
/// for charge e in field strength H (units m = c = 1).
LorentzCoefficients reduced_lorentz_coefficients(double e, double H);

}  // namespace dqlin
