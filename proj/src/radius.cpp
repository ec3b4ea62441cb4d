#include "botgraph/error.hpp"
#include "botgraph/render.hpp"

#include <cmath>
#include <sstream>

namespace botgraph {

RadiusParams solve_radius_params(double r_min, double r_max, double x_gate, double r_gate) {
  if (!(r_min > 0.0 && r_min < r_gate && r_gate < r_max && x_gate > 1.0) ||
      !std::isfinite(r_max) || !std::isfinite(x_gate)) {
    std::ostringstream msg;
    msg << "need 0 < r_min < r_gate < r_max and x_gate > 1 (got r_min=" << r_min
        << ", r_max=" << r_max << ", x_gate=" << x_gate << ", r_gate=" << r_gate << ")";
    throw Error(ErrorKind::infeasible_constraints, msg.str());
  }
  RadiusParams p;
  p.r_min = r_min;
  p.r_max = r_max;
  p.x_gate = x_gate;
  p.r_gate = r_gate;
  // f(+inf) = c; f(1) and f(x_gate) give two equations linear in (a, b):
  //   b - a          = ln(c / r_min - 1)
  //   b - a * x_gate = ln(c / r_gate - 1)
  p.c = r_max;
  const double at_one = std::log(p.c / r_min - 1.0);
  const double at_gate = std::log(p.c / r_gate - 1.0);
  p.a = (at_one - at_gate) / (x_gate - 1.0);
  p.b = p.a + at_one;
  return p;
}

RadiusParams default_radius_params() { return solve_radius_params(4.0, 80.0, 50.0, 50.0); }

double radius(const RadiusParams& params, double frequency) {
  return params.c / (1.0 + std::exp(params.b - params.a * frequency));
}

}  // namespace botgraph
