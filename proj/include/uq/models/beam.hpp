#pragma once

#include "uq/input_model.hpp"
#include "uq/types.hpp"

#include <memory>

namespace uq {

// Simply supported rectangular beam under a midspan point load.
// Inputs x = (b, h, L, E, P) in (m, m, m, MPa, KN); the returned midspan
// deflection P L^3 / (4 E b h^3) then comes out in millimeters.
double beam_deflection(const Vector& x);

/// The five independent lognormal marginals of the beam problem
/// (width, height, span, modulus, load).
std::shared_ptr<const InputModel> beam_input_model();

/// Exact exceedance probability P(U >= u_lim) of the beam deflection; the
/// response is a product of lognormals, hence itself lognormal with
/// log-parameters assembled from the inputs.
double beam_analytical_pf(double u_lim);

/// Log-space parameters (lambda_U, zeta_U) of the beam deflection.
struct BeamLogParams {
  double lambda;
  double zeta;
};
BeamLogParams beam_log_params();

}  // namespace uq
