#include "uavnet/quadrature.hpp"

namespace uavnet {

double sine_integral(double x) {
  if (x < 0) return -sine_integral(-x);
  if (x >= 25.0) return M_PI_2 - sine_cosine_integral_tail(x).first;
  auto sinc = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  return integrate_adaptive(sinc, 0.0, x, spec).value;
}

}  // namespace uavnet
