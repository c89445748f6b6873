// Singular boundary-value solver: series data at t=1, shooting toward t=0,
// extraction of the t->0 limit r_plus, target inversion, and holonomy data.
#pragma once

#include "pvinst/asd.hpp"
#include "pvinst/painleve.hpp"
#include "pvinst/types.hpp"

namespace pvinst {

struct ShootingConfig {
  double c = 0.0;          // boundary amplitude, >= 0
  double r_minus = 1.0;    // a2 boundary value at t=1, >= 1
  double eps_start = 1e-5; // series handoff offset: integration starts at t = 1 - eps_start
  double eps_end = 1e-3;   // smallest t reached
  double tol = 1e-10;      // integrator tolerance
};

struct ShootingResult {
  ShootingConfig config;
  Trajectory trajectory;
  double r_plus = 0.0;
  double r_plus_error_estimate = 0.0;
  ThetaData theta;
};

// Boundary data at t = 1 - one_minus_t: a1 = a3 = c*(1-t)^((r-1)/2),
// a2 = r - (r/4)(1-t)^2 (the decaying-mode family).
InstantonState boundary_series(double c, double r_minus, double one_minus_t);

// Integrate the boundary family from t = 1-eps_start down to eps_end and
// Richardson-extrapolate a1 to t=0.
ShootingResult shoot(const ShootingConfig& config);

struct SolveResult {
  double c;
  ShootingResult result;
};

struct SolveOptions {
  double c_seed = 1.0;  // bracket search starts here
  double c_cap = 64.0;  // give up beyond this amplitude
  int max_bisections = 200;
};

// Find c with |r_plus(c) - target| <= tol by bracketing plus bisection on the
// monotone map c -> r_plus. Target must lie in [0, 1].
SolveResult solve_for_target(double r_plus_target, double r_minus, double tol,
                             const ShootingConfig& base = {}, const SolveOptions& opts = {});

struct HolonomyData {
  int n;                 // bundle label, n == 1 (mod 4)
  double a_holonomy;     // frac((r_minus - 1)/4), in [0,1)
  double theta;          // 4*a + n
  bool trivial;          // true iff r_minus == 1 (mod 4), i.e. a == 0
  PviParameters pvi_params;  // sign - variant of the induced parameter family
};

HolonomyData holonomy_data(double r_minus, int n);

}  // namespace pvinst
