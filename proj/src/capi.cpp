// C ABI wrapper around the C++ core: opaque handles, status-code returns, and
// a thread-local last-error message.
#include "pvinst/pvinst.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pvinst/asd.hpp"
#include "pvinst/critical.hpp"
#include "pvinst/painleve.hpp"
#include "pvinst/selfcheck.hpp"
#include "pvinst/shooting.hpp"
#include "pvinst/types.hpp"

struct pvinst_trajectory {
  pvinst::Trajectory traj;
};

struct pvinst_samples {
  std::vector<pvinst::PviSample> samples;
  std::vector<double> residuals;  // NaN where the residual is not defined
  pvinst::ThetaData theta;
  int sign_choice = -1;
};

struct pvinst_shoot_result {
  pvinst::ShootingResult result;
  pvinst_trajectory traj_view;

  explicit pvinst_shoot_result(pvinst::ShootingResult r)
      : result(std::move(r)), traj_view{result.trajectory} {}
};

namespace {

thread_local std::string g_last_error;

void require(bool cond, const char* msg) {
  if (!cond) pvinst::fail(pvinst::status::invalid_argument, msg);
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return PVINST_OK;
  } catch (const pvinst::error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PVINST_INVALID_ARGUMENT;
  } catch (...) {
    g_last_error = "unknown failure";
    return PVINST_INVALID_ARGUMENT;
  }
}

void write_complex(double out[2], pvinst::complex v) {
  out[0] = v.real();
  out[1] = v.imag();
}

pvinst::complex read_complex(const double v[2]) { return {v[0], v[1]}; }

pvinst::preset_kind parse_kind(const char* kind) {
  require(kind != nullptr, "closed_form: kind is null");
  const std::string k = kind;
  if (k == "octahedral") return pvinst::preset_kind::octahedral;
  if (k == "hopf") return pvinst::preset_kind::hopf;
  if (k == "degenerate-a1") return pvinst::preset_kind::degenerate_a1;
  if (k == "degenerate-a2") return pvinst::preset_kind::degenerate_a2;
  pvinst::fail(pvinst::status::invalid_argument,
               "closed_form: unknown kind '" + k +
                   "' (expected octahedral, hopf, degenerate-a1 or degenerate-a2)");
}

pvinst::critical_point parse_point(const char* point) {
  require(point != nullptr, "fit_exponent: point is null");
  const std::string p = point;
  if (p == "zero") return pvinst::critical_point::zero;
  if (p == "one") return pvinst::critical_point::one;
  if (p == "infinity") return pvinst::critical_point::infinity;
  pvinst::fail(pvinst::status::invalid_argument,
               "fit_exponent: unknown point '" + p + "' (expected zero, one or infinity)");
}

// theta of a trajectory, read off the conserved quantity at its first node.
pvinst::ThetaData trajectory_theta(const pvinst::Trajectory& traj, int sign_hint) {
  const pvinst::TrajectoryNode& n = traj.nodes().front();
  return pvinst::theta_from_state(pvinst::InstantonState(n.t, n.a[0], n.a[1], n.a[2]),
                                  sign_hint);
}

}  // namespace

extern "C" {

const char* pvinst_status_name(int status) {
  return pvinst::status_name(static_cast<pvinst::status>(status));
}

const char* pvinst_last_error(void) { return g_last_error.c_str(); }

const char* pvinst_version(void) { return "1.0.0"; }

/* ---------------------------------------------------------- ASD system -- */

int pvinst_metric_coefficients(double t, double k_out[3]) {
  return guarded([&] {
    require(k_out != nullptr, "metric_coefficients: output is null");
    const auto k = pvinst::metric_coefficients(t);
    for (int i = 0; i < 3; ++i) k_out[i] = k[i];
  });
}

int pvinst_vector_field(double t, const double a[3], double da_out[3]) {
  return guarded([&] {
    require(a != nullptr && da_out != nullptr, "vector_field: null pointer");
    const auto f = pvinst::asd_vector_field(pvinst::InstantonState(t, a[0], a[1], a[2]));
    for (int i = 0; i < 3; ++i) da_out[i] = f[i];
  });
}

int pvinst_conserved_quantity(double t, const double a[3], double* out) {
  return guarded([&] {
    require(a != nullptr && out != nullptr, "conserved_quantity: null pointer");
    *out = pvinst::conserved_quantity(pvinst::InstantonState(t, a[0], a[1], a[2]));
  });
}

int pvinst_residue_weights(double t, double out[3]) {
  return guarded([&] {
    require(out != nullptr, "residue_weights: output is null");
    const auto w = pvinst::residue_weights(t);
    for (int i = 0; i < 3; ++i) out[i] = w[i];
  });
}

int pvinst_closed_form(const char* kind, double theta, double t, double a_out[3]) {
  return guarded([&] {
    require(a_out != nullptr, "closed_form: output is null");
    const pvinst::InstantonState s = pvinst::closed_form_solution(parse_kind(kind), t, theta);
    a_out[0] = s.a1;
    a_out[1] = s.a2;
    a_out[2] = s.a3;
  });
}

int pvinst_integrate(double t0, const double a0[3], double t_end, double tol,
                     pvinst_trajectory** out) {
  return guarded([&] {
    require(a0 != nullptr && out != nullptr, "integrate: null pointer");
    pvinst::Trajectory traj =
        pvinst::integrate_asd(pvinst::InstantonState(t0, a0[0], a0[1], a0[2]), t_end, tol);
    *out = new pvinst_trajectory{std::move(traj)};
  });
}

void pvinst_trajectory_free(pvinst_trajectory* traj) { delete traj; }

size_t pvinst_trajectory_size(const pvinst_trajectory* traj) {
  return traj ? traj->traj.size() : 0;
}

int pvinst_trajectory_node(const pvinst_trajectory* traj, size_t i, double* t_out,
                           double a_out[3]) {
  return guarded([&] {
    require(traj != nullptr, "trajectory_node: trajectory is null");
    require(i < traj->traj.size(), "trajectory_node: index out of range");
    const pvinst::TrajectoryNode& n = traj->traj.nodes()[i];
    if (t_out) *t_out = n.t;
    if (a_out)
      for (int j = 0; j < 3; ++j) a_out[j] = n.a[j];
  });
}

int pvinst_trajectory_range(const pvinst_trajectory* traj, double* t_min, double* t_max) {
  return guarded([&] {
    require(traj != nullptr, "trajectory_range: trajectory is null");
    if (t_min) *t_min = traj->traj.t_min();
    if (t_max) *t_max = traj->traj.t_max();
  });
}

int pvinst_trajectory_eval(const pvinst_trajectory* traj, double t, double a_out[3]) {
  return guarded([&] {
    require(traj != nullptr && a_out != nullptr, "trajectory_eval: null pointer");
    const pvinst::InstantonState s = traj->traj.eval(t);
    a_out[0] = s.a1;
    a_out[1] = s.a2;
    a_out[2] = s.a3;
  });
}

/* -------------------------------------------------------- Painleve map -- */

int pvinst_cross_ratio(double t, double* x_out) {
  return guarded([&] {
    require(x_out != nullptr, "cross_ratio: output is null");
    *x_out = pvinst::cross_ratio(t);
  });
}

int pvinst_cross_ratio_derivative(double t, double* dx_dt_out) {
  return guarded([&] {
    require(dx_dt_out != nullptr, "cross_ratio_derivative: output is null");
    *dx_dt_out = pvinst::cross_ratio_derivative(t);
  });
}

int pvinst_theta_from_state(double t, const double a[3], int sign_hint,
                            double* theta_squared_out, double theta_out[2]) {
  return guarded([&] {
    require(a != nullptr, "theta_from_state: state is null");
    const pvinst::ThetaData th =
        pvinst::theta_from_state(pvinst::InstantonState(t, a[0], a[1], a[2]), sign_hint);
    if (theta_squared_out) *theta_squared_out = th.theta_squared;
    if (theta_out) write_complex(theta_out, th.theta());
  });
}

int pvinst_pvi_parameters(double theta, int sign_choice, double out_abgd[4]) {
  return guarded([&] {
    require(out_abgd != nullptr, "pvi_parameters: output is null");
    const pvinst::PviParameters p = pvinst::pvi_parameters(
        pvinst::ThetaData::from_squared(theta * theta, theta >= 0.0 ? +1 : -1), sign_choice);
    out_abgd[0] = p.alpha;
    out_abgd[1] = p.beta;
    out_abgd[2] = p.gamma;
    out_abgd[3] = p.delta;
  });
}

int pvinst_map_trajectory(const pvinst_trajectory* traj, int theta_sign_hint,
                          int sign_choice, pvinst_samples** out) {
  return guarded([&] {
    require(traj != nullptr && out != nullptr, "map_trajectory: null pointer");
    auto handle = new pvinst_samples;
    try {
      handle->theta = trajectory_theta(traj->traj, theta_sign_hint);
      handle->sign_choice = sign_choice;
      handle->samples = pvinst::map_to_pvi(traj->traj, handle->theta, sign_choice);
      handle->residuals.reserve(handle->samples.size());
      for (const pvinst::PviSample& s : handle->samples) {
        double r = std::numeric_limits<double>::quiet_NaN();
        try {
          r = pvinst::pvi_residual(s, handle->theta, sign_choice);
        } catch (const pvinst::error&) {
          // poles and missing second derivatives leave the residual undefined
        }
        handle->residuals.push_back(r);
      }
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

void pvinst_samples_free(pvinst_samples* samples) { delete samples; }

size_t pvinst_samples_size(const pvinst_samples* samples) {
  return samples ? samples->samples.size() : 0;
}

int pvinst_samples_get(const pvinst_samples* samples, size_t i, double* t_out,
                       double* x_out, double y_out[2], double dy_dx_out[2],
                       double* residual_out) {
  return guarded([&] {
    require(samples != nullptr, "samples_get: samples is null");
    require(i < samples->samples.size(), "samples_get: index out of range");
    const pvinst::PviSample& s = samples->samples[i];
    if (t_out) *t_out = s.t_source;
    if (x_out) *x_out = s.x;
    if (y_out) write_complex(y_out, s.y);
    if (dy_dx_out) write_complex(dy_dx_out, s.dy_dx);
    if (residual_out) *residual_out = samples->residuals[i];
  });
}

int pvinst_samples_second_derivative(const pvinst_samples* samples, size_t i,
                                     double d2y_dx2_out[2], int* has_d2_out) {
  return guarded([&] {
    require(samples != nullptr, "samples_second_derivative: samples is null");
    require(i < samples->samples.size(), "samples_second_derivative: index out of range");
    const pvinst::PviSample& s = samples->samples[i];
    if (d2y_dx2_out) write_complex(d2y_dx2_out, s.d2y_dx2);
    if (has_d2_out) *has_d2_out = s.has_d2 ? 1 : 0;
  });
}

int pvinst_samples_theta(const pvinst_samples* samples, double theta_out[2],
                         int* sign_choice_out) {
  return guarded([&] {
    require(samples != nullptr, "samples_theta: samples is null");
    if (theta_out) write_complex(theta_out, samples->theta.theta());
    if (sign_choice_out) *sign_choice_out = samples->sign_choice;
  });
}

int pvinst_w_functions(double x, const double y[2], const double dy_dx[2],
                       const double theta[2], double w_out[6]) {
  return guarded([&] {
    require(y != nullptr && dy_dx != nullptr && theta != nullptr && w_out != nullptr,
            "w_functions: null pointer");
    const auto w =
        pvinst::w_functions(x, read_complex(y), read_complex(dy_dx), read_complex(theta));
    for (int i = 0; i < 3; ++i) write_complex(w_out + 2 * i, w[i]);
  });
}

int pvinst_squares_from_solution(double t, double x, const double y[2],
                                 const double dy_dx[2], double theta_squared,
                                 int theta_sign_hint, int sign_choice,
                                 double squares_out[6]) {
  return guarded([&] {
    require(y != nullptr && dy_dx != nullptr && squares_out != nullptr,
            "squares_from_solution: null pointer");
    const auto sq = pvinst::squares_from_solution(
        t, x, read_complex(y), read_complex(dy_dx),
        pvinst::ThetaData::from_squared(theta_squared, theta_sign_hint), sign_choice);
    for (int i = 0; i < 3; ++i) write_complex(squares_out + 2 * i, sq[i]);
  });
}

int pvinst_derivative_from_squares(double t, double x, const double y[2],
                                   const double squares[6], const double theta_eff[2],
                                   double dy_dx_out[2]) {
  return guarded([&] {
    require(y != nullptr && squares != nullptr && theta_eff != nullptr && dy_dx_out != nullptr,
            "derivative_from_squares: null pointer");
    const std::array<pvinst::complex, 3> sq = {
        read_complex(squares), read_complex(squares + 2), read_complex(squares + 4)};
    write_complex(dy_dx_out, pvinst::derivative_from_squares(t, x, read_complex(y), sq,
                                                             read_complex(theta_eff)));
  });
}

int pvinst_pvi_residual(double t, double x, const double y[2], const double dy_dx[2],
                        const double d2y_dx2[2], double theta_squared,
                        int theta_sign_hint, int sign_choice, double* residual_out) {
  return guarded([&] {
    require(y != nullptr && dy_dx != nullptr && d2y_dx2 != nullptr && residual_out != nullptr,
            "pvi_residual: null pointer");
    pvinst::PviSample s;
    s.t_source = t;
    s.x = x;
    s.y = read_complex(y);
    s.dy_dx = read_complex(dy_dx);
    s.d2y_dx2 = read_complex(d2y_dx2);
    s.has_d2 = true;
    *residual_out = pvinst::pvi_residual(
        s, pvinst::ThetaData::from_squared(theta_squared, theta_sign_hint), sign_choice);
  });
}

int pvinst_okamoto(double x, const double y[2], const double dy_dx[2],
                   const double theta_vector[4], double y_out[2],
                   double theta_vector_out[4]) {
  return guarded([&] {
    require(y != nullptr && dy_dx != nullptr && theta_vector != nullptr && y_out != nullptr &&
                theta_vector_out != nullptr,
            "okamoto: null pointer");
    const std::array<double, 4> tv = {theta_vector[0], theta_vector[1], theta_vector[2],
                                      theta_vector[3]};
    const pvinst::OkamotoResult r =
        pvinst::okamoto_transform(x, read_complex(y), read_complex(dy_dx), tv);
    write_complex(y_out, r.y_new);
    for (int i = 0; i < 4; ++i) theta_vector_out[i] = r.theta_vector_new[i];
  });
}

/* ------------------------------------------------------------ shooting -- */

int pvinst_boundary_series(double c, double r_minus, double one_minus_t, double* t_out,
                           double a_out[3]) {
  return guarded([&] {
    require(a_out != nullptr, "boundary_series: output is null");
    const pvinst::InstantonState s = pvinst::boundary_series(c, r_minus, one_minus_t);
    if (t_out) *t_out = s.t;
    a_out[0] = s.a1;
    a_out[1] = s.a2;
    a_out[2] = s.a3;
  });
}

int pvinst_shoot(double c, double r_minus, double eps_start, double eps_end, double tol,
                 pvinst_shoot_result** out) {
  return guarded([&] {
    require(out != nullptr, "shoot: output is null");
    pvinst::ShootingConfig cfg;
    cfg.c = c;
    cfg.r_minus = r_minus;
    if (eps_start > 0.0) cfg.eps_start = eps_start;
    if (eps_end > 0.0) cfg.eps_end = eps_end;
    if (tol > 0.0) cfg.tol = tol;
    *out = new pvinst_shoot_result(pvinst::shoot(cfg));
  });
}

int pvinst_solve_for_target(double target_r_plus, double r_minus, double tol,
                            double eps_start, double eps_end, pvinst_shoot_result** out) {
  return guarded([&] {
    require(out != nullptr, "solve_for_target: output is null");
    pvinst::ShootingConfig base;
    base.r_minus = r_minus;
    if (eps_start > 0.0) base.eps_start = eps_start;
    if (eps_end > 0.0) base.eps_end = eps_end;
    pvinst::SolveResult solved =
        pvinst::solve_for_target(target_r_plus, r_minus, tol, base);
    *out = new pvinst_shoot_result(std::move(solved.result));
  });
}

void pvinst_shoot_result_free(pvinst_shoot_result* result) { delete result; }

int pvinst_shoot_result_values(const pvinst_shoot_result* result, double* c_out,
                               double* r_plus_out, double* r_plus_error_out,
                               double* theta_squared_out, double theta_out[2]) {
  return guarded([&] {
    require(result != nullptr, "shoot_result_values: result is null");
    if (c_out) *c_out = result->result.config.c;
    if (r_plus_out) *r_plus_out = result->result.r_plus;
    if (r_plus_error_out) *r_plus_error_out = result->result.r_plus_error_estimate;
    if (theta_squared_out) *theta_squared_out = result->result.theta.theta_squared;
    if (theta_out) write_complex(theta_out, result->result.theta.theta());
  });
}

int pvinst_shoot_result_config(const pvinst_shoot_result* result, double* c_out,
                               double* r_minus_out, double* eps_start_out,
                               double* eps_end_out, double* tol_out) {
  return guarded([&] {
    require(result != nullptr, "shoot_result_config: result is null");
    const pvinst::ShootingConfig& cfg = result->result.config;
    if (c_out) *c_out = cfg.c;
    if (r_minus_out) *r_minus_out = cfg.r_minus;
    if (eps_start_out) *eps_start_out = cfg.eps_start;
    if (eps_end_out) *eps_end_out = cfg.eps_end;
    if (tol_out) *tol_out = cfg.tol;
  });
}

int pvinst_shoot_result_trajectory(const pvinst_shoot_result* result,
                                   const pvinst_trajectory** traj_out) {
  return guarded([&] {
    require(result != nullptr && traj_out != nullptr, "shoot_result_trajectory: null pointer");
    *traj_out = &result->traj_view;
  });
}

int pvinst_holonomy(double r_minus, int n, double* a_out, double* theta_out,
                    int* trivial_out, double pvi_params_out[4]) {
  return guarded([&] {
    const pvinst::HolonomyData h = pvinst::holonomy_data(r_minus, n);
    if (a_out) *a_out = h.a_holonomy;
    if (theta_out) *theta_out = h.theta;
    if (trivial_out) *trivial_out = h.trivial ? 1 : 0;
    if (pvi_params_out) {
      pvi_params_out[0] = h.pvi_params.alpha;
      pvi_params_out[1] = h.pvi_params.beta;
      pvi_params_out[2] = h.pvi_params.gamma;
      pvi_params_out[3] = h.pvi_params.delta;
    }
  });
}

/* --------------------------------------------------- critical analysis -- */

int pvinst_fit_exponent(const double* x, const double* y_re, const double* y_im,
                        size_t count, const char* point, pvinst_fit_record* out) {
  return guarded([&] {
    require(x != nullptr && y_re != nullptr && out != nullptr, "fit_exponent: null pointer");
    std::vector<pvinst::PviSample> samples(count);
    for (size_t i = 0; i < count; ++i) {
      samples[i].x = x[i];
      samples[i].y = pvinst::complex(y_re[i], y_im ? y_im[i] : 0.0);
    }
    const pvinst::CriticalFit fit = pvinst::fit_exponent(samples, parse_point(point));
    out->point = static_cast<int>(fit.point);
    write_complex(out->amplitude, fit.amplitude);
    out->exponent = fit.exponent;
    out->fit_residual = fit.fit_residual;
    out->window_min = fit.window_min;
    out->window_max = fit.window_max;
    out->power_law = fit.power_law ? 1 : 0;
  });
}

int pvinst_rationality_test(double exponent, long long max_denominator, double tol,
                            long long* p_out, long long* q_out, int* in_range_out,
                            int* found_out) {
  return guarded([&] {
    require(found_out != nullptr, "rationality_test: found output is null");
    const auto r = pvinst::rationality_test(exponent, max_denominator, tol);
    *found_out = r.has_value() ? 1 : 0;
    if (r) {
      if (p_out) *p_out = r->p;
      if (q_out) *q_out = r->q;
      if (in_range_out) *in_range_out = r->in_unit_range ? 1 : 0;
    }
  });
}

int pvinst_limit_check(const pvinst_trajectory* traj, int theta_sign_hint,
                       int sign_choice, double c, pvinst_limit_record* out) {
  return guarded([&] {
    require(traj != nullptr && out != nullptr, "limit_check: null pointer");
    const pvinst::ThetaData th = trajectory_theta(traj->traj, theta_sign_hint);
    const pvinst::LimitCheck lc = pvinst::limit_check(traj->traj, th, sign_choice, c);
    out->limit = lc.limit;
    out->finite = lc.finite ? 1 : 0;
    out->reference_applicable = lc.reference_applicable ? 1 : 0;
    out->reference = lc.reference;
    out->deviation = lc.deviation;
    out->contradicts_infinity = lc.contradicts_infinity ? 1 : 0;
    out->stability = lc.stability;
  });
}

int pvinst_algebraicity_verdict(double theta, const pvinst_fit_record* fits,
                                size_t fit_count, const pvinst_limit_record* limit_or_null,
                                int* verdict_out) {
  return guarded([&] {
    require(verdict_out != nullptr, "algebraicity_verdict: output is null");
    require(fit_count == 0 || fits != nullptr, "algebraicity_verdict: fits is null");
    std::vector<pvinst::CriticalFit> cxx_fits(fit_count);
    for (size_t i = 0; i < fit_count; ++i) {
      require(fits[i].point >= 0 && fits[i].point <= 2,
              "algebraicity_verdict: fit point must be 0, 1 or 2");
      cxx_fits[i].point = static_cast<pvinst::critical_point>(fits[i].point);
      cxx_fits[i].amplitude = read_complex(fits[i].amplitude);
      cxx_fits[i].exponent = fits[i].exponent;
      cxx_fits[i].fit_residual = fits[i].fit_residual;
      cxx_fits[i].window_min = fits[i].window_min;
      cxx_fits[i].window_max = fits[i].window_max;
      cxx_fits[i].power_law = fits[i].power_law != 0;
    }
    std::optional<pvinst::LimitCheck> limit;
    if (limit_or_null) {
      pvinst::LimitCheck lc;
      lc.limit = limit_or_null->limit;
      lc.finite = limit_or_null->finite != 0;
      lc.reference_applicable = limit_or_null->reference_applicable != 0;
      lc.reference = limit_or_null->reference;
      lc.deviation = limit_or_null->deviation;
      lc.contradicts_infinity = limit_or_null->contradicts_infinity != 0;
      lc.stability = limit_or_null->stability;
      limit = lc;
    }
    const pvinst::verdict v = pvinst::algebraicity_verdict(
        pvinst::ThetaData::from_squared(theta * theta, theta >= 0.0 ? +1 : -1), cxx_fits,
        limit);
    *verdict_out = static_cast<int>(v);
  });
}

const char* pvinst_verdict_name(int verdict) {
  return pvinst::verdict_name(static_cast<pvinst::verdict>(verdict));
}

/* ---------------------------------------------------------- self check -- */

int pvinst_self_check(pvinst_check_fn callback, void* user, int* failures_out) {
  return guarded([&] {
    const std::vector<pvinst::CheckResult> results = pvinst::self_check();
    int failures = 0;
    for (const pvinst::CheckResult& r : results) {
      if (!r.passed) ++failures;
      if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    if (failures_out) *failures_out = failures;
  });
}

} /* extern "C" */
