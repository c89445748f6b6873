// Core value types shared across the library.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvinst {

using complex = std::complex<double>;

// Status codes shared with the C API and the CLI exit codes.
enum class status : int {
  ok = 0,
  invalid_argument = 2,
  domain_error = 3,
  pole_error = 4,
  blow_up = 5,
  step_underflow = 6,
  degenerate_branch = 7,
  division_by_zero = 8,
  sign_inconsistency = 9,
  non_convergence = 10,
  bracket_failure = 11,
  insufficient_window = 12,
  extrapolation_unstable = 13,
  io_error = 14,
};

const char* status_name(status s);

// Library error: carries a status code plus a human-readable detail message.
class error : public std::runtime_error {
 public:
  error(status code, const std::string& what) : std::runtime_error(what), code_(code) {}
  status code() const { return code_; }

 private:
  status code_;
};

[[noreturn]] void fail(status code, const std::string& what);

// State of the reduced instanton system at one parameter value.
struct InstantonState {
  double t;
  double a1, a2, a3;

  InstantonState(double t_, double a1_, double a2_, double a3_);
};

// Square root branch selector for theta.
enum class theta_branch {
  positive_real,
  negative_real,
  positive_imaginary,
  negative_imaginary,
};

// theta^2 (the conserved quantity) plus the chosen root branch.
struct ThetaData {
  double theta_squared = 0.0;
  theta_branch branch = theta_branch::positive_real;

  ThetaData() = default;
  ThetaData(double theta_squared_, theta_branch branch_);
  // Build from theta^2 and a sign hint (+1/-1); real vs imaginary follows sign(theta^2).
  static ThetaData from_squared(double theta_squared_, int sign_hint);

  complex theta() const;
  bool is_real() const { return theta_squared >= 0.0; }
};

// One dense-output node: state plus its derivative (for cubic Hermite evaluation).
struct TrajectoryNode {
  double t;
  double a[3];
  double da[3];
};

enum class direction { increasing, decreasing };

// Dense, monotone-in-t solution of the reduced system with interpolation support.
class Trajectory {
 public:
  Trajectory(std::vector<TrajectoryNode> nodes, double tol_used);

  const std::vector<TrajectoryNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double tol_used() const { return tol_used_; }
  direction dir() const { return dir_; }
  double t_front() const { return nodes_.front().t; }
  double t_back() const { return nodes_.back().t; }
  double t_min() const;
  double t_max() const;

  // Cubic Hermite interpolation of (a1,a2,a3) at t inside the covered range.
  InstantonState eval(double t) const;

 private:
  std::vector<TrajectoryNode> nodes_;
  double tol_used_;
  direction dir_;
};

// One sample of a Painlevé VI solution branch, tagged with the t that produced it.
struct PviSample {
  double t_source = 0.0;
  double x = 0.0;
  complex y{};
  complex dy_dx{};
  complex d2y_dx2{};
  bool has_d2 = false;
};

// The four PVI parameters for real theta, plus the theta-vector form.
struct PviParameters {
  double alpha, beta, gamma, delta;
  double theta_vector[4];
  int sign_choice;  // the sign in alpha = (theta +/- 2)^2 / 8
};

}  // namespace pvinst
