// Critical-behaviour analysis of Painlevé VI solutions: power-law fits at the
// critical points, exponent rationality, t->1 limits, and algebraicity verdicts.
#pragma once

#include <optional>
#include <vector>

#include "pvinst/painleve.hpp"
#include "pvinst/shooting.hpp"
#include "pvinst/types.hpp"

namespace pvinst {

enum class critical_point { zero, one, infinity };

struct CriticalFit {
  critical_point point;
  complex amplitude;      // a0, a1 or a_inf
  double exponent;        // l0, l1 or l_inf
  double fit_residual;    // max |log-deviation| over the window
  double window_min = 0;  // in |x - point| distance (log|x| distance at infinity)
  double window_max = 0;
  bool power_law = true;  // false when the residual exceeded the power-law threshold
};

struct FitOptions {
  double window_ratio = 1e-3;       // geometric window [d*ratio, d]
  double power_law_threshold = 0.05;
  std::size_t min_samples = 8;
};

// Least-squares power-law fit of the samples near the given critical point.
// Exponent conventions: y ~ a0 x^l0 (zero), 1 - y ~ a1 (1-x)^l1 (one),
// y ~ a_inf x^(1 - l_inf) (infinity).
CriticalFit fit_exponent(const std::vector<PviSample>& samples, critical_point point,
                         const FitOptions& opts = {});

struct Rational {
  long long p;
  long long q;
  bool in_unit_range;  // 0 < p/q <= 1
};

// Best rational approximation with denominator <= max_denominator via continued
// fractions; empty when no convergent lies within tol.
std::optional<Rational> rationality_test(double exponent, long long max_denominator, double tol);

struct LimitCheck {
  double limit = 0.0;            // extrapolated limit of Re y(t) as t->1
  bool finite = true;            // false when |y| grows under refinement
  bool reference_applicable = false;  // the c-parametrized dichotomy applies
  double reference = 0.0;        // 0 for theta>1, -c^2 for theta=1
  double deviation = 0.0;        // |limit - reference| when applicable
  bool contradicts_infinity = false;  // finite limit on a c-parametrized branch
  double stability = 0.0;        // change of the estimate under refinement
};

struct LimitOptions {
  double eps_base = 1e-4;    // samples at 1-t in {eps, 2eps, 4eps, 8eps}
  double stability_tol = 1e-3;
  double blow_up_threshold = 1e3;
};

// Extrapolate y(t->1) on the mapped branch of a trajectory reaching t >= 1-eps_base.
// c < 0 (or NaN) means the c-parametrization does not apply (regular case).
LimitCheck limit_check(const Trajectory& traj, const ThetaData& theta, int sign_choice,
                       double c, const LimitOptions& opts = {});

enum class verdict { consistent_with_algebraic, non_algebraic, inconclusive };

struct VerdictOptions {
  long long max_denominator = 24;
  double rational_tol = 1e-3;
};

// Necessary-condition screen: non_algebraic when any fitted exponent is
// irrational within resolution or outside (0,1], or when an applicable limit
// check contradicts unbounded growth at infinity. Never asserts algebraicity.
verdict algebraicity_verdict(const ThetaData& theta, const std::vector<CriticalFit>& fits,
                             const std::optional<LimitCheck>& limit,
                             const VerdictOptions& opts = {});

const char* verdict_name(verdict v);

}  // namespace pvinst
