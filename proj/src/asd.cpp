// Reduced instanton system: coefficients, vector field, first integral,
// reference solutions, and the adaptive Dormand-Prince 5(4) integrator.
#include "pvinst/asd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace pvinst {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_open_interval(double t, const char* who) {
  if (!(t > 0.0 && t < 1.0)) {
    fail(status::domain_error, std::string(who) + ": t=" + fmt(t) + " outside (0,1)");
  }
}

}  // namespace

const char* status_name(status s) {
  switch (s) {
    case status::ok: return "ok";
    case status::invalid_argument: return "invalid-argument";
    case status::domain_error: return "domain-error";
    case status::pole_error: return "pole-error";
    case status::blow_up: return "blow-up";
    case status::step_underflow: return "step-underflow";
    case status::degenerate_branch: return "degenerate-branch";
    case status::division_by_zero: return "division-by-zero";
    case status::sign_inconsistency: return "sign-inconsistency";
    case status::non_convergence: return "non-convergence";
    case status::bracket_failure: return "bracket-failure";
    case status::insufficient_window: return "insufficient-window";
    case status::extrapolation_unstable: return "extrapolation-unstable";
    case status::io_error: return "io-error";
  }
  return "unknown";
}

void fail(status code, const std::string& what) { throw error(code, what); }

InstantonState::InstantonState(double t_, double a1_, double a2_, double a3_)
    : t(t_), a1(a1_), a2(a2_), a3(a3_) {
  require_open_interval(t_, "InstantonState");
  if (!(std::isfinite(a1_) && std::isfinite(a2_) && std::isfinite(a3_))) {
    fail(status::invalid_argument, "InstantonState: non-finite coefficient");
  }
}

ThetaData::ThetaData(double theta_squared_, theta_branch branch_)
    : theta_squared(theta_squared_), branch(branch_) {
  const bool imag =
      branch_ == theta_branch::positive_imaginary || branch_ == theta_branch::negative_imaginary;
  if (imag != (theta_squared_ < 0.0)) {
    fail(status::invalid_argument, "ThetaData: branch does not match sign of theta^2");
  }
}

ThetaData ThetaData::from_squared(double theta_squared_, int sign_hint) {
  const bool pos = sign_hint >= 0;
  if (theta_squared_ < 0.0) {
    return ThetaData(theta_squared_,
                     pos ? theta_branch::positive_imaginary : theta_branch::negative_imaginary);
  }
  return ThetaData(theta_squared_, pos ? theta_branch::positive_real : theta_branch::negative_real);
}

complex ThetaData::theta() const {
  const double root = std::sqrt(std::fabs(theta_squared));
  switch (branch) {
    case theta_branch::positive_real: return complex(root, 0.0);
    case theta_branch::negative_real: return complex(-root, 0.0);
    case theta_branch::positive_imaginary: return complex(0.0, root);
    case theta_branch::negative_imaginary: return complex(0.0, -root);
  }
  return complex(root, 0.0);
}

std::array<double, 3> metric_coefficients(double t) {
  require_open_interval(t, "metric_coefficients");
  const double k1 = (t * t - 1.0) * (t * t - 9.0) / (4.0 * t);
  const double k2 = 4.0 * t * (t - 3.0) * (t + 1.0) / ((t + 3.0) * (t - 1.0));
  const double k3 = 4.0 * t * (t + 3.0) * (t - 1.0) / ((t - 3.0) * (t + 1.0));
  return {k1, k2, k3};
}

std::array<double, 3> asd_vector_field(const InstantonState& s) {
  const auto k = metric_coefficients(s.t);
  return {2.0 * (s.a1 - s.a2 * s.a3) / k[0], 2.0 * (s.a2 - s.a3 * s.a1) / k[1],
          2.0 * (s.a3 - s.a1 * s.a2) / k[2]};
}

double conserved_quantity(const InstantonState& s) {
  const double t = s.t;
  return ((1.0 - t * t) / (9.0 - t * t)) * s.a1 * s.a1 +
         ((1.0 + t) / (t * (3.0 - t))) * s.a2 * s.a2 -
         ((1.0 - t) / (t * (3.0 + t))) * s.a3 * s.a3;
}

std::array<double, 3> residue_weights(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    fail(status::domain_error, "residue_weights: t=" + fmt(t) + " outside (0,1]");
  }
  const double w1 = -(t * t - 1.0) / (16.0 * (t * t - 9.0));
  const double w2 = -(t + 1.0) / (16.0 * t * (3.0 - t));
  const double w3 = (1.0 - t) / (16.0 * t * (t + 3.0));
  return {w1, w2, w3};
}

namespace {

// Dormand-Prince 5(4) pair, FSAL (row 7 equals the 5th-order weights).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                           -5103.0 / 18656};
constexpr double kB5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
// b5 - b4: error-estimator weights.
constexpr double kE[7] = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

using vec3 = std::array<double, 3>;

vec3 rhs(double t, const vec3& a) {
  const auto k = metric_coefficients(t);
  return {2.0 * (a[0] - a[1] * a[2]) / k[0], 2.0 * (a[1] - a[2] * a[0]) / k[1],
          2.0 * (a[2] - a[0] * a[1]) / k[2]};
}

}  // namespace

Trajectory::Trajectory(std::vector<TrajectoryNode> nodes, double tol_used)
    : nodes_(std::move(nodes)), tol_used_(tol_used) {
  if (nodes_.size() < 2) {
    fail(status::invalid_argument, "Trajectory: needs at least two nodes");
  }
  const bool inc = nodes_.back().t > nodes_.front().t;
  dir_ = inc ? direction::increasing : direction::decreasing;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const bool ok = inc ? nodes_[i].t > nodes_[i - 1].t : nodes_[i].t < nodes_[i - 1].t;
    if (!ok) fail(status::invalid_argument, "Trajectory: node t values not strictly monotone");
  }
}

double Trajectory::t_min() const { return std::min(t_front(), t_back()); }
double Trajectory::t_max() const { return std::max(t_front(), t_back()); }

InstantonState Trajectory::eval(double t) const {
  const double lo = t_min(), hi = t_max();
  if (!(t >= lo && t <= hi)) {
    fail(status::domain_error,
         "Trajectory::eval: t=" + fmt(t) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  // Locate the bracketing node pair in integration order.
  std::size_t lo_i = 0, hi_i = nodes_.size() - 1;
  const bool inc = dir_ == direction::increasing;
  while (hi_i - lo_i > 1) {
    const std::size_t mid = (lo_i + hi_i) / 2;
    const bool left = inc ? t >= nodes_[mid].t : t <= nodes_[mid].t;
    (left ? lo_i : hi_i) = mid;
  }
  const TrajectoryNode& n0 = nodes_[lo_i];
  const TrajectoryNode& n1 = nodes_[hi_i];
  const double h = n1.t - n0.t;
  const double s = (t - n0.t) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  double a[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = h00 * n0.a[i] + h * h10 * n0.da[i] + h01 * n1.a[i] + h * h11 * n1.da[i];
  }
  return InstantonState(t, a[0], a[1], a[2]);
}

Trajectory integrate_asd(const InstantonState& s0, double t_end, double tol,
                         const IntegrateOptions& opts) {
  if (!(tol > 0.0)) fail(status::invalid_argument, "integrate_asd: tol must be > 0");
  if (!(t_end > 0.0 && t_end < 1.0)) {
    fail(status::domain_error, "integrate_asd: t_end=" + fmt(t_end) + " outside (0,1)");
  }
  const double clamp_lo = opts.endpoint_clamp;
  const double clamp_hi = 1.0 - opts.endpoint_clamp;
  const double target = std::clamp(t_end, clamp_lo, clamp_hi);
  if (target == s0.t) fail(status::invalid_argument, "integrate_asd: t_end equals start t");

  const double dir = target > s0.t ? 1.0 : -1.0;
  // Accepted-step cap keeps the cubic Hermite dense output within tol.
  const double h_max = std::clamp(2.0 * std::pow(tol, 0.25), 1e-4, 0.02);

  double t = s0.t;
  vec3 a = {s0.a1, s0.a2, s0.a3};
  vec3 k[7];
  k[0] = rhs(t, a);

  std::vector<TrajectoryNode> nodes;
  nodes.push_back(TrajectoryNode{t, {a[0], a[1], a[2]}, {k[0][0], k[0][1], k[0][2]}});

  for (int i = 0; i < 3; ++i) {
    if (std::fabs(a[i]) > opts.overflow_bound) {
      fail(status::blow_up, "integrate_asd: initial |a" + std::to_string(i + 1) + "| exceeds " +
                                fmt(opts.overflow_bound));
    }
  }

  double h = dir * std::min(h_max, std::fabs(target - t) / 2.0);
  double err_prev = 1.0;
  const long max_steps = 5000000;
  bool is_last = false;

  for (long step = 0; step < max_steps; ++step) {
    if (t == target) break;
    if (std::fabs(h) >= std::fabs(target - t)) {
      h = target - t;
      is_last = true;
    }
    if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(t))) {
      fail(status::step_underflow, "integrate_asd: step underflow at t=" + fmt(t));
    }

    auto stage = [&](const double* row, int n, double cfrac) {
      vec3 y;
      for (int i = 0; i < 3; ++i) {
        double acc = a[i];
        for (int j = 0; j < n; ++j) acc += h * row[j] * k[j][i];
        y[i] = acc;
      }
      return rhs(t + cfrac * h, y);
    };
    k[1] = stage(kA2, 1, kC[1]);
    k[2] = stage(kA3, 2, kC[2]);
    k[3] = stage(kA4, 3, kC[3]);
    k[4] = stage(kA5, 4, kC[4]);
    k[5] = stage(kA6, 5, kC[5]);
    vec3 a_new;
    for (int i = 0; i < 3; ++i) {
      double acc = a[i];
      for (int j = 0; j < 6; ++j) acc += h * kB5[j] * k[j][i];
      a_new[i] = acc;
    }
    k[6] = rhs(t + h, a_new);

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      double e = 0.0;
      for (int j = 0; j < 7; ++j) e += h * kE[j] * k[j][i];
      const double scale = tol + tol * std::max(std::fabs(a[i]), std::fabs(a_new[i]));
      const double r = e / scale;
      err += r * r;
    }
    err = std::sqrt(err / 3.0);

    if (err <= 1.0) {
      t = is_last ? target : t + h;
      a = a_new;
      k[0] = k[6];  // FSAL
      nodes.push_back(TrajectoryNode{t, {a[0], a[1], a[2]}, {k[0][0], k[0][1], k[0][2]}});
      for (int i = 0; i < 3; ++i) {
        if (std::fabs(a[i]) > opts.overflow_bound) {
          fail(status::blow_up, "integrate_asd: |a" + std::to_string(i + 1) + "| exceeded " +
                                    fmt(opts.overflow_bound) + " at t=" + fmt(t));
        }
      }
      const double err_c = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(err_c, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      h *= fac;
      if (std::fabs(h) > h_max) h = dir * h_max;
      err_prev = err_c;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      err_prev = 1.0;
      is_last = false;
    }
  }
  if (t != target) {
    fail(status::non_convergence, "integrate_asd: step budget exhausted before t_end");
  }
  return Trajectory(std::move(nodes), tol);
}

InstantonState closed_form_solution(preset_kind kind, double t, double theta) {
  require_open_interval(t, "closed_form_solution");
  switch (kind) {
    case preset_kind::octahedral:
      return InstantonState(t, 1.0, 1.0, 1.0);
    case preset_kind::hopf: {
      const double d = t * t + 3.0;
      return InstantonState(t, 3.0 * (1.0 - t * t) / d, 6.0 * (t + 1.0) / d, 6.0 * (1.0 - t) / d);
    }
    case preset_kind::degenerate_a1:
      return InstantonState(t, theta * std::sqrt((9.0 - t * t) / (1.0 - t * t)), 0.0, 0.0);
    case preset_kind::degenerate_a2: {
      // No printed closed form; solve the decoupled linear equation
      // da2/dt = 2 a2 / K2 numerically, anchored at the t->1 limit theta.
      const double eps0 = 1e-6;
      const double t0 = 1.0 - eps0;
      const double a2_0 = theta * (1.0 - eps0 * eps0 / 4.0);
      if (theta == 0.0) return InstantonState(t, 0.0, 0.0, 0.0);
      if (t >= t0) {
        const double eps = 1.0 - t;
        return InstantonState(t, 0.0, theta * (1.0 - eps * eps / 4.0), 0.0);
      }
      const Trajectory traj = integrate_asd(InstantonState(t0, 0.0, a2_0, 0.0), t, 1e-12);
      return traj.eval(t);
    }
  }
  fail(status::invalid_argument, "closed_form_solution: unknown kind");
}

}  // namespace pvinst
