// Tests for the C interface: handle lifecycle, value marshalling, error
// code translation, and the built-in check battery.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "pvinst/pvinst.h"

namespace {

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(pvinst_version()) == "1.0.0");
  CHECK(std::string(pvinst_status_name(PVINST_OK)) == "ok");
  CHECK(std::string(pvinst_status_name(PVINST_DOMAIN_ERROR)) == "domain-error");
  CHECK(std::string(pvinst_status_name(PVINST_DEGENERATE_BRANCH)) == "degenerate-branch");
  CHECK(std::string(pvinst_status_name(PVINST_BRACKET_FAILURE)) == "bracket-failure");
  CHECK(std::string(pvinst_status_name(99)) == "unknown");
}

TEST_CASE("system evaluations") {
  double k[3];
  REQUIRE(pvinst_metric_coefficients(0.5, k) == PVINST_OK);
  CHECK(rel_err(k[0], 105.0 / 32.0) <= 1e-15);
  CHECK(rel_err(k[1], 30.0 / 7.0) <= 1e-15);
  CHECK(rel_err(k[2], 14.0 / 15.0) <= 1e-15);

  const double a[3] = {1.0, 0.0, 0.0};
  double da[3];
  REQUIRE(pvinst_vector_field(0.5, a, da) == PVINST_OK);
  CHECK(rel_err(da[0], 64.0 / 105.0) <= 1e-15);
  CHECK(da[1] == 0.0);

  const double ones[3] = {1.0, 1.0, 1.0};
  double q = 0.0;
  REQUIRE(pvinst_conserved_quantity(0.5, ones, &q) == PVINST_OK);
  CHECK(rel_err(q, 1.0) <= 1e-15);

  double w[3];
  REQUIRE(pvinst_residue_weights(0.5, w) == PVINST_OK);
  CHECK(rel_err(w[0], -3.0 / 560.0) <= 1e-15);

  CHECK(pvinst_metric_coefficients(0.0, k) == PVINST_DOMAIN_ERROR);
  CHECK(std::strlen(pvinst_last_error()) > 0);
  CHECK(pvinst_metric_coefficients(0.5, nullptr) == PVINST_INVALID_ARGUMENT);
}

TEST_CASE("closed forms by name") {
  double a[3];
  REQUIRE(pvinst_closed_form("octahedral", 0.0, 0.3, a) == PVINST_OK);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 1.0);
  CHECK(a[2] == 1.0);

  REQUIRE(pvinst_closed_form("hopf", 0.0, 0.5, a) == PVINST_OK);
  CHECK(rel_err(a[0], 9.0 / 13.0) <= 1e-14);
  CHECK(rel_err(a[1], 36.0 / 13.0) <= 1e-14);
  CHECK(rel_err(a[2], 12.0 / 13.0) <= 1e-14);

  REQUIRE(pvinst_closed_form("degenerate-a1", 2.0, 0.5, a) == PVINST_OK);
  CHECK(rel_err(a[0], 2.0 * std::sqrt((9.0 - 0.25) / (1.0 - 0.25))) <= 1e-14);
  CHECK(a[1] == 0.0);

  CHECK(pvinst_closed_form("dodecahedral", 0.0, 0.5, a) == PVINST_INVALID_ARGUMENT);
  CHECK(pvinst_closed_form(nullptr, 0.0, 0.5, a) == PVINST_INVALID_ARGUMENT);
  CHECK(pvinst_closed_form("hopf", 0.0, 1.5, a) == PVINST_DOMAIN_ERROR);
}

TEST_CASE("trajectory handle lifecycle") {
  double a0[3];
  REQUIRE(pvinst_closed_form("hopf", 0.0, 0.5, a0) == PVINST_OK);
  pvinst_trajectory* traj = nullptr;
  REQUIRE(pvinst_integrate(0.5, a0, 0.9, 1e-10, &traj) == PVINST_OK);
  REQUIRE(traj != nullptr);
  CHECK(pvinst_trajectory_size(traj) >= 2);

  double t_min = 0.0, t_max = 0.0;
  REQUIRE(pvinst_trajectory_range(traj, &t_min, &t_max) == PVINST_OK);
  CHECK(t_min == 0.5);
  CHECK(t_max == 0.9);

  double t0 = 0.0, node_a[3];
  REQUIRE(pvinst_trajectory_node(traj, 0, &t0, node_a) == PVINST_OK);
  CHECK(t0 == 0.5);
  CHECK(rel_err(node_a[0], 9.0 / 13.0) <= 1e-14);
  CHECK(pvinst_trajectory_node(traj, 1u << 30, &t0, node_a) == PVINST_INVALID_ARGUMENT);

  double mid[3], want[3];
  REQUIRE(pvinst_trajectory_eval(traj, 0.7, mid) == PVINST_OK);
  REQUIRE(pvinst_closed_form("hopf", 0.0, 0.7, want) == PVINST_OK);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(mid[i] - want[i]) <= 1e-8);
  CHECK(pvinst_trajectory_eval(traj, 0.95, mid) == PVINST_DOMAIN_ERROR);

  pvinst_trajectory_free(traj);
  pvinst_trajectory_free(nullptr);  // must be a no-op
  CHECK(pvinst_trajectory_size(nullptr) == 0);

  CHECK(pvinst_integrate(0.5, a0, 0.5, 1e-10, &traj) == PVINST_INVALID_ARGUMENT);
  CHECK(pvinst_integrate(0.5, nullptr, 0.9, 1e-10, &traj) == PVINST_INVALID_ARGUMENT);
}

TEST_CASE("cross ratio and parameters") {
  double x = 0.0;
  REQUIRE(pvinst_cross_ratio(0.5, &x) == PVINST_OK);
  CHECK(rel_err(x, 375.0 / 343.0) <= 1e-15);
  double dx = 0.0;
  REQUIRE(pvinst_cross_ratio_derivative(0.5, &dx) == PVINST_OK);
  CHECK(rel_err(dx, 1600.0 / 2401.0) <= 1e-15);
  CHECK(pvinst_cross_ratio(1.0, &x) == PVINST_POLE_ERROR);

  double abgd[4];
  REQUIRE(pvinst_pvi_parameters(3.0, -1, abgd) == PVINST_OK);
  CHECK(abgd[0] == 1.0 / 8.0);
  CHECK(abgd[1] == -9.0 / 8.0);
  CHECK(abgd[2] == 9.0 / 8.0);
  CHECK(abgd[3] == -5.0 / 8.0);
  CHECK(pvinst_pvi_parameters(3.0, 0, abgd) == PVINST_INVALID_ARGUMENT);
}

TEST_CASE("theta from state") {
  const double ones[3] = {1.0, 1.0, 1.0};
  double th2 = 0.0, th[2];
  REQUIRE(pvinst_theta_from_state(0.5, ones, +1, &th2, th) == PVINST_OK);
  CHECK(rel_err(th2, 1.0) <= 1e-14);
  CHECK(rel_err(th[0], 1.0) <= 1e-14);
  CHECK(th[1] == 0.0);

  const double neg[3] = {0.0, 0.0, 3.0};
  REQUIRE(pvinst_theta_from_state(0.5, neg, +1, &th2, th) == PVINST_OK);
  CHECK(th2 < 0.0);
  CHECK(th[0] == 0.0);
  CHECK(th[1] > 0.0);
}

TEST_CASE("trajectory map and samples accessors") {
  const double ones[3] = {1.0, 1.0, 1.0};
  pvinst_trajectory* traj = nullptr;
  REQUIRE(pvinst_integrate(0.3, ones, 0.7, 1e-12, &traj) == PVINST_OK);
  pvinst_samples* samples = nullptr;
  REQUIRE(pvinst_map_trajectory(traj, +1, -1, &samples) == PVINST_OK);
  REQUIRE(samples != nullptr);
  REQUIRE(pvinst_samples_size(samples) == pvinst_trajectory_size(traj));

  double theta[2];
  int sign_choice = 0;
  REQUIRE(pvinst_samples_theta(samples, theta, &sign_choice) == PVINST_OK);
  CHECK(rel_err(theta[0], 1.0) <= 1e-12);
  CHECK(sign_choice == -1);

  const size_t n = pvinst_samples_size(samples);
  for (size_t i = 0; i < n; ++i) {
    double t = 0.0, x = 0.0, y[2], dy[2], residual = 0.0;
    REQUIRE(pvinst_samples_get(samples, i, &t, &x, y, dy, &residual) == PVINST_OK);
    const double want =
        (t - 3.0) * (t - 3.0) * (t + 1.0) / ((t + 3.0) * (t * t + 3.0));
    CHECK(std::fabs(y[0] - want) <= 1e-10);
    CHECK(std::fabs(y[1]) <= 1e-10);
    CHECK(residual == residual);  // not NaN on this branch
    CHECK(residual <= 1e-6);
    double d2[2];
    int has_d2 = 0;
    REQUIRE(pvinst_samples_second_derivative(samples, i, d2, &has_d2) == PVINST_OK);
    CHECK(has_d2 == 1);
  }
  CHECK(pvinst_samples_get(samples, n, nullptr, nullptr, nullptr, nullptr, nullptr) ==
        PVINST_INVALID_ARGUMENT);
  pvinst_samples_free(samples);
  pvinst_trajectory_free(traj);
  pvinst_samples_free(nullptr);
  CHECK(pvinst_samples_size(nullptr) == 0);
}

TEST_CASE("trajectory map rejects degenerate branches") {
  double a0[3];
  REQUIRE(pvinst_closed_form("degenerate-a2", 2.0, 0.5, a0) == PVINST_OK);
  pvinst_trajectory* traj = nullptr;
  REQUIRE(pvinst_integrate(0.5, a0, 0.8, 1e-10, &traj) == PVINST_OK);
  pvinst_samples* samples = nullptr;
  CHECK(pvinst_map_trajectory(traj, +1, -1, &samples) == PVINST_DEGENERATE_BRANCH);
  CHECK(samples == nullptr);
  pvinst_trajectory_free(traj);
}

TEST_CASE("inverse relations through the C interface") {
  const double t = 0.5;
  const double x = 375.0 / 343.0;
  const double y[2] = {75.0 / 91.0, 0.0};
  const double dy[2] = {-1519.0 / 1690.0, 0.0};

  double squares[6];
  REQUIRE(pvinst_squares_from_solution(t, x, y, dy, 1.0, +1, -1, squares) == PVINST_OK);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::fabs(squares[2 * i] - 1.0) <= 1e-9);
    CHECK(std::fabs(squares[2 * i + 1]) <= 1e-9);
  }

  const double theta_eff[2] = {1.0, 0.0};
  double dy_back[2];
  REQUIRE(pvinst_derivative_from_squares(t, x, y, squares, theta_eff, dy_back) == PVINST_OK);
  CHECK(std::fabs(dy_back[0] - dy[0]) <= 1e-9);
  CHECK(std::fabs(dy_back[1]) <= 1e-9);

  double w[6];
  const double th[2] = {1.0, 0.0};
  REQUIRE(pvinst_w_functions(x, y, dy, th, w) == PVINST_OK);
  // w2 - w1 = 2 theta y / x (real data: imaginary parts vanish).
  CHECK(std::fabs((w[2] - w[0]) - 2.0 * y[0] / x) <= 1e-12);
  CHECK(std::fabs(w[3] - w[1]) <= 1e-12);
}

TEST_CASE("equation residual through the C interface") {
  const double y[2] = {75.0 / 91.0, 0.0};
  const double dy[2] = {-1519.0 / 1690.0, 0.0};
  const double d2y[2] = {151952087.0 / 21970000.0, 0.0};
  double residual = -1.0;
  REQUIRE(pvinst_pvi_residual(0.5, 375.0 / 343.0, y, dy, d2y, 1.0, +1, -1, &residual) ==
          PVINST_OK);
  CHECK(residual <= 1e-9);

  const double bad_y[2] = {75.0 / 91.0 + 0.1, 0.0};
  REQUIRE(pvinst_pvi_residual(0.5, 375.0 / 343.0, bad_y, dy, d2y, 1.0, +1, -1, &residual) ==
          PVINST_OK);
  CHECK(residual > 1e-2);

  const double pole_y[2] = {375.0 / 343.0, 0.0};
  CHECK(pvinst_pvi_residual(0.5, 375.0 / 343.0, pole_y, dy, d2y, 1.0, +1, -1, &residual) ==
        PVINST_POLE_ERROR);
}

TEST_CASE("parameter shift through the C interface") {
  const double y[2] = {75.0 / 91.0, 0.0};
  const double dy[2] = {-1519.0 / 1690.0, 0.0};
  const double tv[4] = {0.5, 0.5, 0.5, 0.5};
  double y_new[2], tv_new[4];
  REQUIRE(pvinst_okamoto(375.0 / 343.0, y, dy, tv, y_new, tv_new) == PVINST_OK);
  CHECK(std::fabs(y_new[0] - 25.0 / 21.0) <= 1e-11);
  CHECK(std::fabs(y_new[1]) <= 1e-11);
  for (double v : tv_new) CHECK(v == -0.5);

  const double tv0[4] = {1.0, -1.0, 0.5, -0.5};
  REQUIRE(pvinst_okamoto(375.0 / 343.0, y, dy, tv0, y_new, tv_new) == PVINST_OK);
  CHECK(y_new[0] == y[0]);
  CHECK(y_new[1] == y[1]);
}

TEST_CASE("boundary series and shooting") {
  double t = 0.0, a[3];
  REQUIRE(pvinst_boundary_series(0.1, 1.0, 1e-4, &t, a) == PVINST_OK);
  CHECK(t == 1.0 - 1e-4);
  CHECK(a[0] == 0.1);
  CHECK(a[2] == 0.1);
  CHECK(std::fabs(a[1] - 1.0) <= 1e-8);
  CHECK(pvinst_boundary_series(-0.1, 1.0, 1e-4, &t, a) == PVINST_INVALID_ARGUMENT);

  pvinst_shoot_result* res = nullptr;
  REQUIRE(pvinst_shoot(0.5, 3.0, 0.0, 0.0, 0.0, &res) == PVINST_OK);
  REQUIRE(res != nullptr);
  double c = 0.0, r_plus = 0.0, r_err = 0.0, th2 = 0.0, th[2];
  REQUIRE(pvinst_shoot_result_values(res, &c, &r_plus, &r_err, &th2, th) == PVINST_OK);
  CHECK(c == 0.5);
  CHECK(r_plus > 0.0);
  CHECK(r_plus < 1.0);
  CHECK(r_err <= 1e-4);
  CHECK(std::fabs(th2 - 9.0) <= 1e-8);
  CHECK(std::fabs(th[0] - 3.0) <= 1e-9);

  double cc = 0.0, rm = 0.0, es = 0.0, ee = 0.0, tol = 0.0;
  REQUIRE(pvinst_shoot_result_config(res, &cc, &rm, &es, &ee, &tol) == PVINST_OK);
  CHECK(cc == 0.5);
  CHECK(rm == 3.0);
  CHECK(es == 1e-5);  // library default
  CHECK(ee == 1e-3);  // library default
  CHECK(tol == 1e-10);

  const pvinst_trajectory* traj = nullptr;
  REQUIRE(pvinst_shoot_result_trajectory(res, &traj) == PVINST_OK);
  REQUIRE(traj != nullptr);
  double t_min = 0.0, t_max = 0.0;
  REQUIRE(pvinst_trajectory_range(traj, &t_min, &t_max) == PVINST_OK);
  CHECK(t_min == 1e-3);
  CHECK(t_max == 1.0 - 1e-5);
  pvinst_shoot_result_free(res);

  CHECK(pvinst_shoot(-1.0, 3.0, 0.0, 0.0, 0.0, &res) == PVINST_INVALID_ARGUMENT);
}

TEST_CASE("target inversion through the C interface") {
  pvinst_shoot_result* res = nullptr;
  REQUIRE(pvinst_solve_for_target(0.5, 3.0, 1e-6, 0.0, 0.0, &res) == PVINST_OK);
  double c = 0.0, r_plus = 0.0, r_err = 0.0, th2 = 0.0, th[2];
  REQUIRE(pvinst_shoot_result_values(res, &c, &r_plus, &r_err, &th2, th) == PVINST_OK);
  CHECK(std::fabs(r_plus - 0.5) <= 1e-6);
  CHECK(c > 0.0);
  pvinst_shoot_result_free(res);
  CHECK(pvinst_solve_for_target(1.5, 3.0, 1e-6, 0.0, 0.0, &res) ==
        PVINST_INVALID_ARGUMENT);
}

TEST_CASE("holonomy through the C interface") {
  double a = -1.0, theta = 0.0, params[4];
  int trivial = -1;
  REQUIRE(pvinst_holonomy(3.0, 1, &a, &theta, &trivial, params) == PVINST_OK);
  CHECK(a == 0.5);
  CHECK(theta == 3.0);
  CHECK(trivial == 0);
  CHECK(params[0] == 1.0 / 8.0);
  CHECK(params[1] == -9.0 / 8.0);

  REQUIRE(pvinst_holonomy(1.0, 1, &a, &theta, &trivial, params) == PVINST_OK);
  CHECK(trivial == 1);
  CHECK(pvinst_holonomy(1.0, 2, &a, &theta, &trivial, params) == PVINST_DOMAIN_ERROR);
}

TEST_CASE("critical analysis through the C interface") {
  const int n = 48;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    const double d = 1e-6 * std::pow(1e3, double(i) / (n - 1));
    xs[i] = d;
    ys[i] = 3.0 * std::pow(d, 2.0 / 3.0);
  }
  pvinst_fit_record fit{};
  REQUIRE(pvinst_fit_exponent(xs.data(), ys.data(), nullptr, n, "zero", &fit) == PVINST_OK);
  CHECK(fit.point == 0);
  CHECK(fit.power_law == 1);
  CHECK(std::fabs(fit.exponent - 2.0 / 3.0) <= 1e-8);
  CHECK(std::fabs(fit.amplitude[0] - 3.0) <= 1e-8);
  CHECK(pvinst_fit_exponent(xs.data(), ys.data(), nullptr, n, "somewhere", &fit) ==
        PVINST_INVALID_ARGUMENT);

  long long p = 0, q = 0;
  int in_range = 0, found = 0;
  REQUIRE(pvinst_rationality_test(fit.exponent, 24, 1e-3, &p, &q, &in_range, &found) ==
          PVINST_OK);
  CHECK(found == 1);
  CHECK(p == 2);
  CHECK(q == 3);
  CHECK(in_range == 1);
  REQUIRE(pvinst_rationality_test(std::sqrt(0.5), 24, 1e-6, &p, &q, &in_range, &found) ==
          PVINST_OK);
  CHECK(found == 0);

  int v = -1;
  REQUIRE(pvinst_algebraicity_verdict(1.0, &fit, 1, nullptr, &v) == PVINST_OK);
  CHECK(v == PVINST_VERDICT_CONSISTENT);
  CHECK(std::string(pvinst_verdict_name(v)) == "consistent-with-algebraic");
  CHECK(std::string(pvinst_verdict_name(PVINST_VERDICT_NON_ALGEBRAIC)) == "non-algebraic");
}

TEST_CASE("limit check through the C interface") {
  const double ones[3] = {1.0, 1.0, 1.0};
  pvinst_trajectory* traj = nullptr;
  REQUIRE(pvinst_integrate(0.9, ones, 1.0 - 1e-6, 1e-10, &traj) == PVINST_OK);

  pvinst_limit_record lc{};
  REQUIRE(pvinst_limit_check(traj, +1, -1, -1.0, &lc) == PVINST_OK);
  CHECK(lc.finite == 1);
  CHECK(std::fabs(lc.limit - 0.5) <= 1e-5);
  CHECK(lc.reference_applicable == 0);
  CHECK(lc.contradicts_infinity == 0);

  REQUIRE(pvinst_limit_check(traj, +1, -1, 0.3, &lc) == PVINST_OK);
  CHECK(lc.reference_applicable == 1);
  CHECK(lc.reference == -0.09);
  CHECK(lc.contradicts_infinity == 1);

  int v = -1;
  REQUIRE(pvinst_algebraicity_verdict(1.0, nullptr, 0, &lc, &v) == PVINST_OK);
  CHECK(v == PVINST_VERDICT_NON_ALGEBRAIC);

  pvinst_trajectory_free(traj);
}

TEST_CASE("built-in check battery passes") {
  struct Tally {
    int count = 0;
    int failed = 0;
  } tally;
  auto cb = [](const char* name, int passed, const char* detail, void* user) {
    auto* t = static_cast<Tally*>(user);
    t->count += 1;
    if (!passed) t->failed += 1;
    CHECK(name != nullptr);
    CHECK(detail != nullptr);
  };
  int failures = -1;
  REQUIRE(pvinst_self_check(cb, &tally, &failures) == PVINST_OK);
  CHECK(failures == 0);
  CHECK(tally.failed == 0);
  CHECK(tally.count >= 20);
}
