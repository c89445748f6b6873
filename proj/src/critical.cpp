// Critical-behaviour analysis: power-law fits near the critical points of the
// independent variable, rational recognition of fitted exponents, t->1 limit
// extrapolation on mapped branches, and the algebraicity screen built on top.
#include "pvinst/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace pvinst {

namespace {

struct FitPoint {
  double d;      // distance from the critical point (1/|x| at infinity)
  double log_d;
  double log_v;  // log |value|
  complex v;
};

struct WindowFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  complex amplitude{};
  double d_min = 0.0;
  double d_max = 0.0;
  std::size_t count = 0;
};

// Least-squares line through (log_d, log_v) for points with d in [lo, hi].
WindowFit fit_window(const std::vector<FitPoint>& pts, double lo, double hi) {
  WindowFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const FitPoint& p : pts) {
    if (p.d < lo || p.d > hi) continue;
    sx += p.log_d;
    sy += p.log_v;
    sxx += p.log_d * p.log_d;
    sxy += p.log_d * p.log_v;
    ++n;
  }
  out.count = n;
  if (n < 2) return out;
  const double det = static_cast<double>(n) * sxx - sx * sx;
  if (det == 0.0) return out;
  out.slope = (static_cast<double>(n) * sxy - sx * sy) / det;
  out.intercept = (sy - out.slope * sx) / static_cast<double>(n);

  double max_dev = 0.0;
  complex amp_sum{};
  out.d_min = std::numeric_limits<double>::infinity();
  out.d_max = 0.0;
  for (const FitPoint& p : pts) {
    if (p.d < lo || p.d > hi) continue;
    max_dev = std::max(max_dev, std::abs(p.log_v - (out.slope * p.log_d + out.intercept)));
    amp_sum += p.v * std::pow(p.d, -out.slope);
    out.d_min = std::min(out.d_min, p.d);
    out.d_max = std::max(out.d_max, p.d);
  }
  out.residual = max_dev;
  out.amplitude = amp_sum / static_cast<double>(n);
  return out;
}

}  // namespace

CriticalFit fit_exponent(const std::vector<PviSample>& samples, critical_point point,
                         const FitOptions& opts) {
  if (!(opts.window_ratio > 0.0) || !(opts.window_ratio < 1.0))
    fail(status::invalid_argument, "fit_exponent: window_ratio must lie in (0,1)");
  if (opts.min_samples < 3)
    fail(status::invalid_argument, "fit_exponent: min_samples must be at least 3");

  std::vector<FitPoint> pts;
  pts.reserve(samples.size());
  for (const PviSample& s : samples) {
    double d = 0.0;
    complex v{};
    switch (point) {
      case critical_point::zero:
        d = std::abs(s.x);
        v = s.y;
        break;
      case critical_point::one:
        d = std::abs(s.x - 1.0);
        v = 1.0 - s.y;
        break;
      case critical_point::infinity:
        d = (s.x == 0.0) ? 0.0 : 1.0 / std::abs(s.x);
        v = s.y;
        break;
    }
    const double av = std::abs(v);
    if (!(d > 0.0) || !std::isfinite(d) || !(av > 0.0) || !std::isfinite(av)) continue;
    pts.push_back({d, std::log(d), std::log(av), v});
  }
  if (pts.size() < opts.min_samples)
    fail(status::insufficient_window,
         "fit_exponent: only " + std::to_string(pts.size()) +
             " usable samples near the critical point (need " +
             std::to_string(opts.min_samples) + ")");

  double d_lo = pts.front().d, d_hi = pts.front().d;
  for (const FitPoint& p : pts) {
    d_lo = std::min(d_lo, p.d);
    d_hi = std::max(d_hi, p.d);
  }

  // Slide a fixed-ratio geometric window down from the outermost samples and
  // take the first one that looks like a clean power law.
  WindowFit best;
  bool best_clean = false;
  bool any_window = false;
  double edge = d_hi * (1.0 + 1e-12);
  const int max_halvings =
      static_cast<int>(std::ceil(std::log2(std::max(d_hi / d_lo, 2.0)))) + 2;
  for (int i = 0; i <= max_halvings; ++i, edge *= 0.5) {
    if (edge < d_lo) break;
    const WindowFit w = fit_window(pts, edge * opts.window_ratio, edge);
    if (w.count < opts.min_samples) continue;
    any_window = true;
    if (w.residual < best.residual) best = w;
    if (w.residual <= opts.power_law_threshold) {
      best = w;
      best_clean = true;
      break;
    }
  }
  if (!any_window)
    fail(status::insufficient_window,
         "fit_exponent: no geometric window of ratio " + std::to_string(opts.window_ratio) +
             " holds " + std::to_string(opts.min_samples) + " samples");

  CriticalFit fit;
  fit.point = point;
  fit.exponent = (point == critical_point::infinity) ? 1.0 + best.slope : best.slope;
  fit.amplitude = best.amplitude;
  fit.fit_residual = best.residual;
  fit.window_min = best.d_min;
  fit.window_max = best.d_max;
  fit.power_law = best_clean;
  return fit;
}

std::optional<Rational> rationality_test(double exponent, long long max_denominator,
                                         double tol) {
  if (max_denominator < 1)
    fail(status::invalid_argument, "rationality_test: max_denominator must be positive");
  if (!(tol >= 0.0))
    fail(status::invalid_argument, "rationality_test: tol must be non-negative");
  if (!std::isfinite(exponent)) return std::nullopt;

  // Continued-fraction convergents of the exponent, plus the largest
  // semiconvergent whose denominator still fits the bound.
  struct Cand {
    long long p, q;
  };
  std::vector<Cand> cands;
  long long h2 = 0, k2 = 1;
  long long h1 = 1, k1 = 0;
  double x = exponent;
  for (int iter = 0; iter < 64; ++iter) {
    const double fa = std::floor(x);
    if (std::abs(fa) > 1e12) break;  // remainder below double resolution
    const long long a = static_cast<long long>(fa);
    const long long h = a * h1 + h2;
    const long long k = a * k1 + k2;
    if (k > max_denominator) {
      if (k1 > 0) {
        const long long a_cap = (max_denominator - k2) / k1;
        if (a_cap >= 1) cands.push_back({a_cap * h1 + h2, a_cap * k1 + k2});
      }
      break;
    }
    cands.push_back({h, k});
    h2 = h1;
    k2 = k1;
    h1 = h;
    k1 = k;
    const double frac = x - fa;
    if (frac < 1e-12) break;
    x = 1.0 / frac;
  }

  std::optional<Rational> found;
  double found_err = std::numeric_limits<double>::infinity();
  for (Cand c : cands) {
    if (c.q < 1 || c.q > max_denominator) continue;
    const long long g = std::gcd(c.p, c.q);
    if (g > 1) {
      c.p /= g;
      c.q /= g;
    }
    const double err =
        std::abs(exponent - static_cast<double>(c.p) / static_cast<double>(c.q));
    if (err < found_err) {
      found_err = err;
      found = Rational{c.p, c.q, c.p > 0 && c.p <= c.q};
    }
  }
  if (!found || found_err > tol) return std::nullopt;
  return found;
}

LimitCheck limit_check(const Trajectory& traj, const ThetaData& theta, int sign_choice,
                       double c, const LimitOptions& opts) {
  if (!(opts.eps_base > 0.0) || !(8.0 * opts.eps_base < 1.0))
    fail(status::invalid_argument, "limit_check: eps_base must lie in (0, 1/8)");
  if (traj.t_max() < 1.0 - opts.eps_base)
    fail(status::insufficient_window,
         "limit_check: trajectory reaches t = " + std::to_string(traj.t_max()) +
             " but the limit stencil needs t >= " + std::to_string(1.0 - opts.eps_base));
  if (traj.t_min() > 1.0 - 8.0 * opts.eps_base)
    fail(status::insufficient_window,
         "limit_check: trajectory starts at t = " + std::to_string(traj.t_min()) +
             " but the limit stencil needs t <= " + std::to_string(1.0 - 8.0 * opts.eps_base));

  complex y[4];
  for (int i = 0; i < 4; ++i) {
    const double eps = opts.eps_base * static_cast<double>(1 << i);
    y[i] = map_y(traj.eval(1.0 - eps), theta, sign_choice);
  }

  LimitCheck out;
  out.reference_applicable = theta.is_real() && !std::isnan(c) && c >= 0.0;
  if (out.reference_applicable) {
    const double th = std::abs(theta.theta().real());
    if (std::abs(th - 1.0) <= 1e-9)
      out.reference = -c * c;
    else if (th > 1.0)
      out.reference = 0.0;
    else
      out.reference_applicable = false;
  }

  if (std::abs(y[0]) > opts.blow_up_threshold && std::abs(y[0]) > 1.5 * std::abs(y[1])) {
    out.finite = false;
    out.limit = y[0].real();
    out.stability = std::abs(y[0] - y[1]);
    out.deviation = out.reference_applicable ? std::abs(out.limit - out.reference) : 0.0;
    out.contradicts_infinity = false;
    return out;
  }

  // Two-level elimination of the linear and quadratic terms of y(1-eps),
  // plus the same estimate from the doubled stencil as a stability probe.
  const complex l1 = 2.0 * y[0] - y[1];
  const complex l1p = 2.0 * y[1] - y[2];
  const complex l1pp = 2.0 * y[2] - y[3];
  const complex l2 = (4.0 * l1 - l1p) / 3.0;
  const complex l2p = (4.0 * l1p - l1pp) / 3.0;
  out.finite = true;
  out.limit = l2.real();
  out.stability = std::abs(l2 - l2p);
  if (out.stability > opts.stability_tol)
    fail(status::extrapolation_unstable,
         "limit_check: estimate moved by " + std::to_string(out.stability) +
             " under stencil doubling (tolerance " + std::to_string(opts.stability_tol) + ")");
  out.deviation = out.reference_applicable ? std::abs(out.limit - out.reference) : 0.0;
  out.contradicts_infinity = out.finite && out.reference_applicable;
  return out;
}

verdict algebraicity_verdict(const ThetaData& theta, const std::vector<CriticalFit>& fits,
                             const std::optional<LimitCheck>& limit,
                             const VerdictOptions& opts) {
  (void)theta;  // the screen is exponent/limit based; resonance is reported elsewhere
  bool saw_non_power_law = false;
  for (const CriticalFit& f : fits) {
    if (!f.power_law) {
      saw_non_power_law = true;
      continue;
    }
    const auto rat = rationality_test(f.exponent, opts.max_denominator, opts.rational_tol);
    if (!rat || !rat->in_unit_range) return verdict::non_algebraic;
  }
  if (limit && limit->contradicts_infinity) return verdict::non_algebraic;
  if (saw_non_power_law) return verdict::inconclusive;
  if (fits.empty() && !limit) return verdict::inconclusive;
  return verdict::consistent_with_algebraic;
}

const char* verdict_name(verdict v) {
  switch (v) {
    case verdict::consistent_with_algebraic:
      return "consistent-with-algebraic";
    case verdict::non_algebraic:
      return "non-algebraic";
    case verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

}  // namespace pvinst
