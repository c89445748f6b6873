/* C interface to the pvinst shared library.
 *
 * Conventions:
 *   - Every fallible function returns an int status code (PVINST_OK == 0 on
 *     success); pvinst_last_error() returns a thread-local message for the
 *     most recent failure on the calling thread.
 *   - Complex scalars cross the boundary as double[2] = {re, im}.
 *   - theta is carried as (theta_squared, sign_hint): sign_hint > 0 selects
 *     the root with positive real (or positive imaginary) part.
 *   - Handles (pvinst_trajectory, pvinst_samples, pvinst_shoot_result) are
 *     opaque; free them with the matching *_free function.  Accessors that
 *     return borrowed pointers document the owner.
 */
#ifndef PVINST_H
#define PVINST_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* -------------------------------------------------------------- status -- */

#define PVINST_OK 0
#define PVINST_INVALID_ARGUMENT 2
#define PVINST_DOMAIN_ERROR 3
#define PVINST_POLE_ERROR 4
#define PVINST_BLOW_UP 5
#define PVINST_STEP_UNDERFLOW 6
#define PVINST_DEGENERATE_BRANCH 7
#define PVINST_DIVISION_BY_ZERO 8
#define PVINST_SIGN_INCONSISTENCY 9
#define PVINST_NON_CONVERGENCE 10
#define PVINST_BRACKET_FAILURE 11
#define PVINST_INSUFFICIENT_WINDOW 12
#define PVINST_EXTRAPOLATION_UNSTABLE 13
#define PVINST_IO_ERROR 14

const char* pvinst_status_name(int status);
const char* pvinst_last_error(void); /* thread-local; valid until next library call */
const char* pvinst_version(void);

/* ------------------------------------------------------------- handles -- */

typedef struct pvinst_trajectory pvinst_trajectory;
typedef struct pvinst_samples pvinst_samples;
typedef struct pvinst_shoot_result pvinst_shoot_result;

/* ---------------------------------------------------------- ASD system -- */

int pvinst_metric_coefficients(double t, double k_out[3]);
int pvinst_vector_field(double t, const double a[3], double da_out[3]);
int pvinst_conserved_quantity(double t, const double a[3], double* out);
int pvinst_residue_weights(double t, double out[3]);

/* kind: "octahedral" | "hopf" | "degenerate-a1" | "degenerate-a2".
 * theta is ignored for octahedral/hopf. */
int pvinst_closed_form(const char* kind, double theta, double t, double a_out[3]);

int pvinst_integrate(double t0, const double a0[3], double t_end, double tol,
                     pvinst_trajectory** out);
void pvinst_trajectory_free(pvinst_trajectory* traj);
size_t pvinst_trajectory_size(const pvinst_trajectory* traj);
int pvinst_trajectory_node(const pvinst_trajectory* traj, size_t i, double* t_out,
                           double a_out[3]);
int pvinst_trajectory_range(const pvinst_trajectory* traj, double* t_min, double* t_max);
int pvinst_trajectory_eval(const pvinst_trajectory* traj, double t, double a_out[3]);

/* -------------------------------------------------------- Painleve map -- */

int pvinst_cross_ratio(double t, double* x_out);
int pvinst_cross_ratio_derivative(double t, double* dx_dt_out);

int pvinst_theta_from_state(double t, const double a[3], int sign_hint,
                            double* theta_squared_out, double theta_out[2]);
int pvinst_pvi_parameters(double theta, int sign_choice, double out_abgd[4]);

/* Maps a whole trajectory; theta is read off the trajectory's conserved
 * quantity.  The samples handle retains theta and sign_choice and carries a
 * per-sample residual of the Painleve VI equation. */
int pvinst_map_trajectory(const pvinst_trajectory* traj, int theta_sign_hint,
                          int sign_choice, pvinst_samples** out);
void pvinst_samples_free(pvinst_samples* samples);
size_t pvinst_samples_size(const pvinst_samples* samples);
int pvinst_samples_get(const pvinst_samples* samples, size_t i, double* t_out,
                       double* x_out, double y_out[2], double dy_dx_out[2],
                       double* residual_out);
int pvinst_samples_second_derivative(const pvinst_samples* samples, size_t i,
                                     double d2y_dx2_out[2], int* has_d2_out);
int pvinst_samples_theta(const pvinst_samples* samples, double theta_out[2],
                         int* sign_choice_out);

int pvinst_w_functions(double x, const double y[2], const double dy_dx[2],
                       const double theta[2], double w_out[6] /* w1,w2,w3 */);
int pvinst_squares_from_solution(double t, double x, const double y[2],
                                 const double dy_dx[2], double theta_squared,
                                 int theta_sign_hint, int sign_choice,
                                 double squares_out[6] /* a1^2,a2^2,a3^2 */);
int pvinst_derivative_from_squares(double t, double x, const double y[2],
                                   const double squares[6], const double theta_eff[2],
                                   double dy_dx_out[2]);
int pvinst_pvi_residual(double t, double x, const double y[2], const double dy_dx[2],
                        const double d2y_dx2[2], double theta_squared,
                        int theta_sign_hint, int sign_choice, double* residual_out);

int pvinst_okamoto(double x, const double y[2], const double dy_dx[2],
                   const double theta_vector[4], double y_out[2], double theta_vector_out[4]);

/* ------------------------------------------------------------ shooting -- */

int pvinst_boundary_series(double c, double r_minus, double one_minus_t, double* t_out,
                           double a_out[3]);

int pvinst_shoot(double c, double r_minus, double eps_start, double eps_end, double tol,
                 pvinst_shoot_result** out);
int pvinst_solve_for_target(double target_r_plus, double r_minus, double tol,
                            double eps_start, double eps_end, pvinst_shoot_result** out);
void pvinst_shoot_result_free(pvinst_shoot_result* result);
int pvinst_shoot_result_values(const pvinst_shoot_result* result, double* c_out,
                               double* r_plus_out, double* r_plus_error_out,
                               double* theta_squared_out, double theta_out[2]);
int pvinst_shoot_result_config(const pvinst_shoot_result* result, double* c_out,
                               double* r_minus_out, double* eps_start_out,
                               double* eps_end_out, double* tol_out);
/* Borrowed pointer, owned by (and freed with) the result handle. */
int pvinst_shoot_result_trajectory(const pvinst_shoot_result* result,
                                   const pvinst_trajectory** traj_out);

int pvinst_holonomy(double r_minus, int n, double* a_out, double* theta_out,
                    int* trivial_out, double pvi_params_out[4]);

/* --------------------------------------------------- critical analysis -- */

typedef struct pvinst_fit_record {
  int point; /* 0 = zero, 1 = one, 2 = infinity */
  double amplitude[2];
  double exponent;
  double fit_residual;
  double window_min;
  double window_max;
  int power_law;
} pvinst_fit_record;

/* point: "zero" | "one" | "infinity".  y_im may be NULL for real data. */
int pvinst_fit_exponent(const double* x, const double* y_re, const double* y_im,
                        size_t count, const char* point, pvinst_fit_record* out);

int pvinst_rationality_test(double exponent, long long max_denominator, double tol,
                            long long* p_out, long long* q_out, int* in_range_out,
                            int* found_out);

typedef struct pvinst_limit_record {
  double limit;
  int finite;
  int reference_applicable;
  double reference;
  double deviation;
  int contradicts_infinity;
  double stability;
} pvinst_limit_record;

/* c < 0 marks the regular case (no boundary-family parameter). */
int pvinst_limit_check(const pvinst_trajectory* traj, int theta_sign_hint,
                       int sign_choice, double c, pvinst_limit_record* out);

#define PVINST_VERDICT_CONSISTENT 0
#define PVINST_VERDICT_NON_ALGEBRAIC 1
#define PVINST_VERDICT_INCONCLUSIVE 2

int pvinst_algebraicity_verdict(double theta, const pvinst_fit_record* fits,
                                size_t fit_count, const pvinst_limit_record* limit_or_null,
                                int* verdict_out);
const char* pvinst_verdict_name(int verdict);

/* ---------------------------------------------------------- self check -- */

typedef void (*pvinst_check_fn)(const char* name, int passed, const char* detail,
                                void* user);

/* Runs the built-in invariant suite, reporting each check through the
 * callback; *failures_out receives the number of failed checks. */
int pvinst_self_check(pvinst_check_fn callback, void* user, int* failures_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PVINST_H */
