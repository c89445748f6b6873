// Instanton-to-Painlevé-VI correspondence: cross ratio, parameter map, the
// explicit solution formula and its inverse relations, residual evaluation,
// and the Okamoto transformation.
#include "pvinst/painleve.hpp"

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

void check_sign_choice(int sign_choice, const char* who) {
  if (sign_choice != 1 && sign_choice != -1) {
    fail(status::invalid_argument, std::string(who) + ": sign_choice must be +1 or -1");
  }
}

double cabs(const complex& z) { return std::abs(z); }

}  // namespace

double cross_ratio(double t) {
  if (t == 1.0 || t == -3.0) {
    fail(status::pole_error, "cross_ratio: pole at t=" + fmt(t));
  }
  const double n = (t + 1.0) * (t - 3.0) * (t - 3.0) * (t - 3.0);
  const double d = (t - 1.0) * (t + 3.0) * (t + 3.0) * (t + 3.0);
  return n / d;
}

double cross_ratio_derivative(double t) {
  if (t == 1.0 || t == -3.0) {
    fail(status::pole_error, "cross_ratio_derivative: pole at t=" + fmt(t));
  }
  const double tm3 = t - 3.0, tm1 = t - 1.0, tp3 = t + 3.0;
  return 16.0 * t * t * tm3 * tm3 / (tm1 * tm1 * tp3 * tp3 * tp3 * tp3);
}

ThetaData theta_from_state(const InstantonState& s, int sign_hint) {
  return ThetaData::from_squared(conserved_quantity(s), sign_hint);
}

PviParameters pvi_parameters(const ThetaData& theta, int sign_choice) {
  check_sign_choice(sign_choice, "pvi_parameters");
  if (!theta.is_real()) {
    fail(status::domain_error,
         "pvi_parameters: theta is imaginary (theta^2 < 0); the real parameter "
         "record is undefined, use the residual path instead");
  }
  const double th = theta.theta().real();
  const double th2 = theta.theta_squared;
  PviParameters p{};
  p.alpha = (th + 2.0 * sign_choice) * (th + 2.0 * sign_choice) / 8.0;
  p.beta = -th2 / 8.0;
  p.gamma = th2 / 8.0;
  p.delta = -(th2 - 4.0) / 8.0;
  for (double& v : p.theta_vector) v = th / 2.0;
  p.sign_choice = sign_choice;
  return p;
}

std::array<complex, 3> w_functions(double x, complex y, complex dy_dx, complex theta) {
  if (x == 0.0 || x == 1.0) {
    fail(status::domain_error, "w_functions: x=" + fmt(x) + " is a critical point");
  }
  const double base = x * (x - 1.0);
  const complex th = theta;
  const complex y2 = y * y;
  const complex w1 = 2.0 * dy_dx + ((th - 2.0) * y2 - 2.0 * th * x * y + 2.0 * y + th * x) / base;
  const complex w2 = 2.0 * dy_dx + ((th - 2.0) * y2 + 2.0 * (1.0 - th) * y + th * x) / base;
  const complex w3 = 2.0 * dy_dx + ((th - 2.0) * y2 + 2.0 * y - th * x) / base;
  return {w1, w2, w3};
}

double pole_distance(double x, complex y) {
  return std::min({cabs(y), cabs(y - 1.0), cabs(y - x)});
}

namespace {

void check_solution_poles(double x, complex y, const char* who) {
  const double floor = 1e-14 * std::max(1.0, std::fabs(x));
  if (pole_distance(x, y) < floor) {
    fail(status::pole_error, std::string(who) + ": y hits a pole of the equation");
  }
}

}  // namespace

std::array<complex, 3> squares_from_solution(double t, double x, complex y, complex dy_dx,
                                             const ThetaData& theta, int sign_choice) {
  check_sign_choice(sign_choice, "squares_from_solution");
  check_solution_poles(x, y, "squares_from_solution");
  // The inverse relations hold with the branch-adjusted theta.
  const complex theta_eff = -static_cast<double>(sign_choice) * theta.theta();
  const auto w = w_functions(x, y, dy_dx, theta_eff);
  const complex ym1 = y - 1.0, ymx = y - x;
  const double xm1 = x - 1.0;
  const complex a1sq =
      (t * t - 9.0) * x * xm1 * xm1 * w[0] * w[1] / (4.0 * (t * t - 1.0) * ym1 * ymx);
  const complex a2sq = t * (3.0 - t) * x * xm1 * w[1] * w[2] / (4.0 * (t + 1.0) * y * ym1);
  const complex a3sq = t * (t + 3.0) * x * x * xm1 * w[0] * w[2] / (4.0 * (1.0 - t) * y * ymx);
  return {a1sq, a2sq, a3sq};
}

complex derivative_from_squares(double t, double x, complex y,
                                const std::array<complex, 3>& squares, complex theta_eff) {
  check_solution_poles(x, y, "derivative_from_squares");
  if (cabs(theta_eff) < 1e-13) {
    fail(status::invalid_argument, "derivative_from_squares: theta must be nonzero");
  }
  for (const complex& sq : squares) {
    if (cabs(sq) == 0.0) {
      fail(status::invalid_argument, "derivative_from_squares: squares must be nonzero");
    }
  }
  const complex ym1 = y - 1.0, ymx = y - x;
  const double xm1 = x - 1.0;
  // Pairwise products of the w-functions, read off the inverse relations.
  const complex p12 = 4.0 * (t * t - 1.0) * ym1 * ymx * squares[0] / ((t * t - 9.0) * x * xm1 * xm1);
  const complex p23 = 4.0 * (t + 1.0) * y * ym1 * squares[1] / (t * (3.0 - t) * x * xm1);
  const complex p13 = 4.0 * (1.0 - t) * y * ymx * squares[2] / (t * (t + 3.0) * x * x * xm1);
  const complex w1sq = p12 * p13 / p23;
  const complex w1_root = std::sqrt(w1sq);

  const complex d21 = 2.0 * theta_eff * y / x;                        // w2 - w1
  const complex d23 = 2.0 * theta_eff * (x - y) / (x * xm1);          // w2 - w3
  double best_metric = 0.0;
  complex best_w1{};
  bool have = false;
  for (const double s : {1.0, -1.0}) {
    const complex w1 = s * w1_root;
    const complex w2 = p12 / w1;
    const complex w3 = p13 / w1;
    const double scale =
        std::max({cabs(w1), cabs(w2), cabs(w3), cabs(d21), cabs(d23), 1e-30});
    const double metric = (cabs(w2 - w1 - d21) + cabs(w2 - w3 - d23)) / scale;
    if (!have || metric < best_metric) {
      have = true;
      best_metric = metric;
      best_w1 = w1;
    }
  }
  if (best_metric > 1e-7) {
    fail(status::sign_inconsistency,
         "derivative_from_squares: neither root sign is consistent with y "
         "(relative mismatch " +
             fmt(best_metric) + ")");
  }
  const complex th = theta_eff;
  const complex numer1 = (th - 2.0) * y * y - 2.0 * th * x * y + 2.0 * y + th * x;
  return (best_w1 - numer1 / (x * xm1)) / 2.0;
}

namespace {

// y = N/D of the explicit correspondence; theta_eff = -sign_choice * theta.
complex map_y_value(const InstantonState& s, double x, complex theta_eff,
                    double denominator_floor) {
  const double t = s.t;
  const double q2 = (t + 1.0) * (t + 3.0) * s.a2 * s.a2;
  const double q3 = (1.0 - t) * (3.0 - t) * s.a3 * s.a3;
  const complex cross = theta_eff * (9.0 - t * t) * (x - 1.0) * s.a2 * s.a3 / (x * s.a1);
  const complex n = complex(q2 - q3);
  const complex d = complex(q2 - q3 / x) + cross;
  const double dscale = std::fabs(q2) + std::fabs(q3 / x) + cabs(cross);
  const double dmag = cabs(d);
  if (std::isnan(dmag) || dmag < denominator_floor * std::max(dscale, 1e-30)) {
    fail(status::division_by_zero,
         "map: solution-formula denominator vanishes at t=" + fmt(t));
  }
  return n / d;
}

void check_not_degenerate(const InstantonState& s, const char* who) {
  const double scale = std::max({1.0, std::fabs(s.a1), std::fabs(s.a2), std::fabs(s.a3)});
  int zeros = 0;
  for (const double v : {s.a1, s.a2, s.a3}) {
    if (std::fabs(v) < 1e-12 * scale) ++zeros;
  }
  if (zeros >= 2) {
    fail(status::degenerate_branch,
         std::string(who) + ": two of the coefficients vanish at t=" + fmt(s.t) +
             "; y is not defined on degenerate branches");
  }
}

// First-derivative weights at tau of the degree-4 Lagrange interpolant
// through five nodes.
std::array<double, 5> stencil_weights(const std::array<double, 5>& nodes, double tau) {
  std::array<double, 5> w{};
  for (int j = 0; j < 5; ++j) {
    double denom = 1.0;
    for (int k = 0; k < 5; ++k) {
      if (k != j) denom *= nodes[j] - nodes[k];
    }
    double acc = 0.0;
    for (int m = 0; m < 5; ++m) {
      if (m == j) continue;
      double prod = 1.0;
      for (int k = 0; k < 5; ++k) {
        if (k != j && k != m) prod *= tau - nodes[k];
      }
      acc += prod;
    }
    w[j] = acc / denom;
  }
  return w;
}

}  // namespace

complex map_y(const InstantonState& s, const ThetaData& theta, int sign_choice,
              double denominator_floor) {
  check_sign_choice(sign_choice, "map_y");
  check_not_degenerate(s, "map_y");
  const complex theta_eff = -static_cast<double>(sign_choice) * theta.theta();
  return map_y_value(s, cross_ratio(s.t), theta_eff, denominator_floor);
}

PviSample map_state(const InstantonState& s, const ThetaData& theta, int sign_choice) {
  check_sign_choice(sign_choice, "map_state");
  check_not_degenerate(s, "map_state");
  const complex theta_eff = -static_cast<double>(sign_choice) * theta.theta();
  const double x = cross_ratio(s.t);
  const complex y = map_y_value(s, x, theta_eff, 1e-14);
  PviSample sample;
  sample.t_source = s.t;
  sample.x = x;
  sample.y = y;
  const std::array<complex, 3> squares = {complex(s.a1 * s.a1), complex(s.a2 * s.a2),
                                          complex(s.a3 * s.a3)};
  sample.dy_dx = derivative_from_squares(s.t, x, y, squares, theta_eff);
  sample.has_d2 = false;
  return sample;
}

std::vector<PviSample> map_to_pvi(const Trajectory& traj, const ThetaData& theta,
                                  int sign_choice, const MapOptions& opts) {
  check_sign_choice(sign_choice, "map_to_pvi");
  // Degeneracy is a property of the whole branch: a coefficient is treated as
  // identically zero only if it vanishes along the entire trajectory.
  double scale = 1.0;
  for (const TrajectoryNode& n : traj.nodes()) {
    for (double v : n.a) scale = std::max(scale, std::fabs(v));
  }
  int zeros = 0;
  for (int i = 0; i < 3; ++i) {
    double m = 0.0;
    for (const TrajectoryNode& n : traj.nodes()) m = std::max(m, std::fabs(n.a[i]));
    if (m < 1e-12 * scale) ++zeros;
  }
  if (zeros >= 2) {
    fail(status::degenerate_branch,
         "map_to_pvi: two coefficients vanish identically; y is not defined "
         "on degenerate branches");
  }

  const complex theta_eff = -static_cast<double>(sign_choice) * theta.theta();
  const double t_lo = traj.t_min(), t_hi = traj.t_max();

  auto y_at = [&](double tt) {
    const InstantonState s = traj.eval(tt);
    return map_y_value(s, cross_ratio(tt), theta_eff, opts.denominator_floor);
  };
  auto dy_at = [&](double tt) {
    const InstantonState s = traj.eval(tt);
    const double x = cross_ratio(tt);
    const complex y = map_y_value(s, x, theta_eff, opts.denominator_floor);
    const std::array<complex, 3> squares = {complex(s.a1 * s.a1), complex(s.a2 * s.a2),
                                            complex(s.a3 * s.a3)};
    try {
      return derivative_from_squares(tt, x, y, squares, theta_eff);
    } catch (const error&) {
      // Isolated zero of some a_i (or theta == 0): fall back to numerical
      // differentiation of y along t plus the chain rule.
      double h = std::min(opts.stencil_h, (t_hi - t_lo) / 4.0);
      std::array<double, 5> nodes{};
      double start = std::clamp(tt - 2.0 * h, t_lo, t_hi - 4.0 * h);
      for (int i = 0; i < 5; ++i) nodes[i] = start + i * h;
      const auto w = stencil_weights(nodes, tt);
      complex dy_dt{};
      for (int i = 0; i < 5; ++i) dy_dt += w[i] * y_at(nodes[i]);
      return dy_dt / cross_ratio_derivative(tt);
    }
  };

  std::vector<PviSample> out;
  out.reserve(traj.size());
  for (const TrajectoryNode& node : traj.nodes()) {
    const double tt = node.t;
    PviSample sample;
    sample.t_source = tt;
    sample.x = cross_ratio(tt);
    sample.y = y_at(tt);
    sample.dy_dx = dy_at(tt);
    if (opts.with_second_derivative) {
      double h = std::min(opts.stencil_h, (t_hi - t_lo) / 4.0);
      if (h >= 1e-12) {
        std::array<double, 5> nodes{};
        double start = std::clamp(tt - 2.0 * h, t_lo, t_hi - 4.0 * h);
        for (int i = 0; i < 5; ++i) nodes[i] = start + i * h;
        const auto w = stencil_weights(nodes, tt);
        complex ddy_dt{};
        for (int i = 0; i < 5; ++i) ddy_dt += w[i] * dy_at(nodes[i]);
        sample.d2y_dx2 = ddy_dt / cross_ratio_derivative(tt);
        sample.has_d2 = true;
      }
    }
    out.push_back(sample);
  }
  return out;
}

double pvi_residual(const PviSample& sample, const ThetaData& theta, int sign_choice) {
  check_sign_choice(sign_choice, "pvi_residual");
  if (!sample.has_d2) {
    fail(status::invalid_argument, "pvi_residual: sample lacks d2y_dx2");
  }
  const double x = sample.x;
  const complex y = sample.y, dy = sample.dy_dx, d2y = sample.d2y_dx2;
  if (pole_distance(x, y) < 1e-8) {
    fail(status::pole_error,
         "pvi_residual: sample at t=" + fmt(sample.t_source) + " is within 1e-8 of a pole");
  }
  const complex thc = theta.theta();
  const double th2 = theta.theta_squared;
  const double sc = sign_choice;
  const complex alpha = (complex(th2 + 4.0) + 4.0 * sc * thc) / 8.0;
  const complex beta = complex(-th2 / 8.0);
  const complex gamma = complex(th2 / 8.0);
  const complex delta = complex(-(th2 - 4.0) / 8.0);
  const complex ym1 = y - 1.0, ymx = y - x;
  const double xm1 = x - 1.0;
  const complex lhs = d2y;
  const complex rhs =
      0.5 * (1.0 / y + 1.0 / ym1 + 1.0 / ymx) * dy * dy -
      (1.0 / x + 1.0 / xm1 + 1.0 / ymx) * dy +
      y * ym1 * ymx / (x * x * xm1 * xm1) *
          (alpha + beta * x / (y * y) + gamma * xm1 / (ym1 * ym1) +
           delta * x * xm1 / (ymx * ymx));
  return cabs(lhs - rhs);
}

OkamotoResult okamoto_transform(double x, complex y, complex dy_dx,
                                const std::array<double, 4>& theta_vector) {
  const double delta =
      0.5 * (theta_vector[0] + theta_vector[1] + theta_vector[2] + theta_vector[3]);
  if (delta == 0.0) {
    return OkamotoResult{y, theta_vector};  // exact fixed point
  }
  check_solution_poles(x, y, "okamoto_transform");
  const complex two_q = ((x - 1.0) * dy_dx - theta_vector[0]) / y +
                        (dy_dx - 1.0 - theta_vector[1]) / (y - x) -
                        (x * dy_dx + theta_vector[2]) / (y - 1.0);
  const complex q = 0.5 * two_q;
  if (cabs(q) == 0.0) {
    fail(status::division_by_zero, "okamoto_transform: q vanishes");
  }
  OkamotoResult out;
  out.y_new = y + delta / q;
  for (int i = 0; i < 4; ++i) out.theta_vector_new[i] = theta_vector[i] - delta;
  return out;
}

}  // namespace pvinst
