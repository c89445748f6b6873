// The reduced anti-self-dual instanton system on (0,1): vector field, first
// integral, reference solutions, and the adaptive integrator.
#pragma once

#include <array>

#include "pvinst/types.hpp"

namespace pvinst {

// Geometry coefficients K1, K2, K3 of the reduced system.
std::array<double, 3> metric_coefficients(double t);

// Right-hand side da_i/dt of the reduced system.
std::array<double, 3> asd_vector_field(const InstantonState& s);

// First integral of the flow; equals theta^2. May be negative.
double conserved_quantity(const InstantonState& s);

// Squared residue weights (w1sq, w2sq, w3sq) on 0 < t <= 1. They satisfy
// sum = -1/16 and sum(w_i/K_i) = 0 on (0,1).
std::array<double, 3> residue_weights(double t);

enum class preset_kind { octahedral, hopf, degenerate_a1, degenerate_a2 };

// Named reference solutions. theta is used by the degenerate kinds only.
InstantonState closed_form_solution(preset_kind kind, double t, double theta = 1.0);

struct IntegrateOptions {
  double overflow_bound = 1e8;   // |a_i| beyond this raises blow_up
  double endpoint_clamp = 1e-6;  // integration domain is [clamp, 1-clamp]
};

// Integrate from s0 to t_end (either direction) with local error control at tol.
Trajectory integrate_asd(const InstantonState& s0, double t_end, double tol,
                         const IntegrateOptions& opts = {});

}  // namespace pvinst
