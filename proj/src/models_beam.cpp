#include "uq/models/beam.hpp"

#include "uq/stdnormal.hpp"

#include <cmath>
#include <stdexcept>

namespace uq {

double beam_deflection(const Vector& x) {
  if (x.size() != 5) throw std::invalid_argument("beam_deflection: expects (b,h,L,E,P)");
  const double b = x[0], h = x[1], len = x[2], e = x[3], p = x[4];
  if (!(b > 0.0 && h > 0.0 && len > 0.0 && e > 0.0 && p > 0.0))
    throw std::domain_error("beam_deflection: inputs must be positive");
  return p * len * len * len / (4.0 * e * b * h * h * h);
}

std::shared_ptr<const InputModel> beam_input_model() {
  std::vector<Marginal> marginals{
      Marginal::lognormal_moments(0.15, 0.05),    // b [m]
      Marginal::lognormal_moments(0.3, 0.05),     // h [m]
      Marginal::lognormal_moments(5.0, 0.01),     // L [m]
      Marginal::lognormal_moments(30000.0, 0.15), // E [MPa]
      Marginal::lognormal_moments(10.0, 0.20),    // P [KN]
  };
  return std::make_shared<InputModel>(std::move(marginals));
}

BeamLogParams beam_log_params() {
  auto model = beam_input_model();
  const auto& ms = model->marginals();
  const double lb = ms[0].param_a(), zb = ms[0].param_b();
  const double lh = ms[1].param_a(), zh = ms[1].param_b();
  const double ll = ms[2].param_a(), zl = ms[2].param_b();
  const double le = ms[3].param_a(), ze = ms[3].param_b();
  const double lp = ms[4].param_a(), zp = ms[4].param_b();
  BeamLogParams out;
  out.lambda = -std::log(4.0) + lp + 3.0 * ll - le - lb - 3.0 * lh;
  out.zeta = std::sqrt(zp * zp + 9.0 * zl * zl + ze * ze + zb * zb + 9.0 * zh * zh);
  return out;
}

double beam_analytical_pf(double u_lim) {
  if (!(u_lim > 0.0)) return 1.0;
  const BeamLogParams lu = beam_log_params();
  return 1.0 - norm_cdf((std::log(u_lim) - lu.lambda) / lu.zeta);
}

}  // namespace uq
