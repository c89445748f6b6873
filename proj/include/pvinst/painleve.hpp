// The correspondence between instanton trajectories and Painlevé VI solutions:
// cross ratio, the explicit map, its inverse relations, the residual test and
// the Okamoto transformation.
#pragma once

#include <array>
#include <vector>

#include "pvinst/asd.hpp"
#include "pvinst/types.hpp"

namespace pvinst {

// Cross ratio x(t) = (t+1)(t-3)^3 / ((t-1)(t+3)^3).
double cross_ratio(double t);
// dx/dt in closed form.
double cross_ratio_derivative(double t);

// theta^2 from the conserved quantity; branch resolved from the sign hint.
ThetaData theta_from_state(const InstantonState& s, int sign_hint = +1);

// PVI parameters for real theta: alpha=(theta+sign*2)^2/8, beta=-theta^2/8,
// gamma=theta^2/8, delta=-(theta^2-4)/8. Domain error on imaginary branches.
PviParameters pvi_parameters(const ThetaData& theta, int sign_choice);

// The w-functions of the solution data (ydot means dy/dx). theta is the signed
// effective value the relations hold with.
std::array<complex, 3> w_functions(double x, complex y, complex dy_dx, complex theta);

// Squared coefficients (a1^2, a2^2, a3^2) recovered from PVI solution data.
// sign_choice must match the branch that produced (y, dy_dx): the w-relations
// hold with the effective theta = -sign_choice * theta.
std::array<complex, 3> squares_from_solution(double t, double x, complex y, complex dy_dx,
                                             const ThetaData& theta, int sign_choice);

// dy/dx recovered from the squares. theta_eff is the signed effective theta
// (-sign_choice * theta of the producing branch). Raises sign_inconsistency if
// neither square-root sign of w1 reproduces y.
complex derivative_from_squares(double t, double x, complex y, const std::array<complex, 3>& squares,
                                complex theta_eff);

struct MapOptions {
  bool with_second_derivative = true;
  double stencil_h = 5e-4;          // 5-point stencil half-unit for d2y/dx2
  double denominator_floor = 1e-14; // below this the map reports division_by_zero
};

// Map a trajectory to PVI samples. sign_choice is the sign in alpha=(theta+/-2)^2/8.
std::vector<PviSample> map_to_pvi(const Trajectory& traj, const ThetaData& theta,
                                  int sign_choice, const MapOptions& opts = {});

// Map a single state (no second derivative).
PviSample map_state(const InstantonState& s, const ThetaData& theta, int sign_choice);

// Just the y value of the correspondence at one state.
complex map_y(const InstantonState& s, const ThetaData& theta, int sign_choice,
              double denominator_floor = 1e-14);

// |residual| of the Painlevé VI equation at the sample, with parameters built
// from theta and sign_choice (complex-capable).
double pvi_residual(const PviSample& sample, const ThetaData& theta, int sign_choice);

// Okamoto transformation (x, y, theta_vec) -> (y_new, theta_vec_new).
// delta = sum(theta_vec)/2; delta == 0 returns the inputs unchanged (exact
// fixed point); q == 0 raises division_by_zero.
struct OkamotoResult {
  complex y_new;
  std::array<double, 4> theta_vector_new;
};
OkamotoResult okamoto_transform(double x, complex y, complex dy_dx,
                                const std::array<double, 4>& theta_vector);

// Distance from y to the nearest pole {0, 1, x} of the PVI equation.
double pole_distance(double x, complex y);

}  // namespace pvinst
