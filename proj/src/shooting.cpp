// Singular boundary-value problem: series seed at t=1, shooting toward t=0,
// Richardson extraction of the t->0 limit of a1, target inversion on the
// monotone c -> r_plus map, and holonomy parameter data.
#include "pvinst/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace pvinst {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void validate_config(const ShootingConfig& cfg) {
  if (!(cfg.c >= 0.0)) fail(status::invalid_argument, "shoot: c must be >= 0");
  if (!(cfg.r_minus >= 1.0)) fail(status::invalid_argument, "shoot: r_minus must be >= 1");
  if (!(cfg.tol > 0.0)) fail(status::invalid_argument, "shoot: tol must be > 0");
  if (!(cfg.eps_start > 0.0 && cfg.eps_end > 0.0 &&
        cfg.eps_end < 1.0 - cfg.eps_start)) {
    fail(status::invalid_argument, "shoot: need 0 < eps_end < 1 - eps_start < 1");
  }
  if (!(cfg.eps_end >= 1e-6)) {
    fail(status::invalid_argument, "shoot: eps_end below the integrator endpoint clamp");
  }
  if (!(4.0 * cfg.eps_end < 1.0 - cfg.eps_start)) {
    fail(status::invalid_argument,
         "shoot: limit extraction needs 4*eps_end inside the integration range");
  }
}

}  // namespace

InstantonState boundary_series(double c, double r_minus, double one_minus_t) {
  if (!(one_minus_t > 0.0 && one_minus_t < 1.0)) {
    fail(status::domain_error,
         "boundary_series: one_minus_t=" + fmt(one_minus_t) + " outside (0,1)");
  }
  if (!(c >= 0.0)) fail(status::invalid_argument, "boundary_series: c must be >= 0");
  if (!(r_minus >= 1.0)) fail(status::invalid_argument, "boundary_series: r_minus must be >= 1");
  const double eps = one_minus_t;
  const double p = (r_minus - 1.0) / 2.0;
  const double amp = c * std::pow(eps, p);
  // a2 = r - (r/4) eps^2 + c^2/(4(p+1)) eps^(2p+2): the decaying-mode family
  // of the boundary expansion (the a1 = a3 pairing is forced; the opposite
  // pairing activates the eps^(-(r+1)/2) mode and leaves the solution space).
  const double a2 = r_minus - 0.25 * r_minus * eps * eps +
                    c * c / (4.0 * (p + 1.0)) * std::pow(eps, 2.0 * p + 2.0);
  return InstantonState(1.0 - eps, amp, a2, amp);
}

ShootingResult shoot(const ShootingConfig& config) {
  validate_config(config);
  const InstantonState seed = boundary_series(config.c, config.r_minus, config.eps_start);
  const ThetaData theta = ThetaData::from_squared(conserved_quantity(seed), +1);
  Trajectory traj = integrate_asd(seed, config.eps_end, config.tol);

  // a1(t) = r_plus + C1 t^2 + C2 t^(3 - r_plus) + ...: one Richardson level
  // eliminates t^2, a second (with the fitted follow-up exponent) trims the
  // fractional tail; their difference is the error estimate.
  const double e = config.eps_end;
  const double f1 = traj.eval(e).a1;
  const double f2 = traj.eval(2.0 * e).a1;
  const double f4 = traj.eval(4.0 * e).a1;
  const double r1 = (4.0 * f1 - f2) / 3.0;
  const double r1b = (4.0 * f2 - f4) / 3.0;
  const double q = 3.0 - std::clamp(r1, 0.0, 1.0);
  const double pow_q = std::pow(2.0, q);
  const double r2 = (pow_q * r1 - r1b) / (pow_q - 1.0);
  const double err = std::fabs(r2 - r1);

  ShootingResult out{config, std::move(traj), r2, err, theta};
  return out;
}

SolveResult solve_for_target(double r_plus_target, double r_minus, double tol,
                             const ShootingConfig& base, const SolveOptions& opts) {
  if (!(r_plus_target >= 0.0 && r_plus_target <= 1.0)) {
    fail(status::invalid_argument, "solve_for_target: target must lie in [0,1]");
  }
  if (!(tol > 0.0)) fail(status::invalid_argument, "solve_for_target: tol must be > 0");

  ShootingConfig cfg = base;
  cfg.r_minus = r_minus;

  // r_plus(c) is increasing; blow-up before eps_end counts as "above target"
  // (the admissible-c range is bounded and the map exits [0,1] beyond it).
  auto eval = [&cfg](double c) -> double {
    cfg.c = c;
    try {
      return shoot(cfg).r_plus;
    } catch (const error& e) {
      if (e.code() == status::blow_up) return std::numeric_limits<double>::infinity();
      throw;
    }
  };

  if (r_plus_target == 0.0) {
    cfg.c = 0.0;
    return SolveResult{0.0, shoot(cfg)};  // a1 = a3 = 0 is invariant, so r_plus = 0
  }

  double lo = 0.0;  // r_plus(0) = 0 < target
  double hi = opts.c_seed;
  double f_hi = eval(hi) - r_plus_target;
  while (f_hi < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > opts.c_cap) {
      fail(status::bracket_failure,
           "solve_for_target: no c <= " + fmt(opts.c_cap) + " reaches r_plus=" +
               fmt(r_plus_target));
    }
    f_hi = eval(hi) - r_plus_target;
  }

  for (int i = 0; i < opts.max_bisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    cfg.c = mid;
    bool blew_up = false;
    double f_mid = 0.0;
    try {
      ShootingResult res = shoot(cfg);
      f_mid = res.r_plus - r_plus_target;
      if (std::fabs(f_mid) <= tol) {
        return SolveResult{mid, std::move(res)};
      }
    } catch (const error& e) {
      if (e.code() != status::blow_up) throw;
      blew_up = true;
    }
    if (blew_up || f_mid > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  fail(status::non_convergence,
       "solve_for_target: bisection did not reach |r_plus - target| <= " + fmt(tol));
}

HolonomyData holonomy_data(double r_minus, int n) {
  if (((n % 4) + 4) % 4 != 1) {
    fail(status::domain_error, "holonomy_data: n must be congruent to 1 mod 4");
  }
  if (!(r_minus >= 1.0)) {
    fail(status::invalid_argument, "holonomy_data: r_minus must be >= 1");
  }
  const double ratio = (r_minus - 1.0) / 4.0;
  const double a = ratio - std::floor(ratio);
  HolonomyData out{};
  out.n = n;
  out.a_holonomy = a;
  out.theta = 4.0 * a + n;
  out.trivial = (a == 0.0);
  out.pvi_params = pvi_parameters(ThetaData::from_squared(out.theta * out.theta, +1), -1);
  return out;
}

}  // namespace pvinst
