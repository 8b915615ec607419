#include "postbench/distributions.hpp"

#include <cmath>
#include <numbers>

#include "postbench/error.hpp"

namespace postbench {

namespace {

void require_positive(double x, const char* what) {
  if (!(std::isfinite(x) && x > 0.0))
    fail(ErrorKind::InvalidArgument, std::string(what) + " must be positive and finite");
}

}  // namespace

double standard_normal(PhiloxStream& rng) {
  const double u1 = rng.next_uniform();
  const double u2 = rng.next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_normal(double mean, double variance, PhiloxStream& rng) {
  require_positive(variance, "normal variance");
  return mean + std::sqrt(variance) * standard_normal(rng);
}

double sample_gamma(double shape, double rate, PhiloxStream& rng) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");

  const double boosted = shape < 1.0 ? shape + 1.0 : shape;
  const double d = boosted - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  double v, z, u;
  for (;;) {
    do {
      z = standard_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    u = rng.next_uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) break;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) break;
  }
  double x = d * v;
  if (shape < 1.0) x *= std::pow(rng.next_uniform(), 1.0 / shape);
  return x / rate;
}

double sample_inverse_gamma(double shape, double rate_of_precision, PhiloxStream& rng) {
  return 1.0 / sample_gamma(shape, rate_of_precision, rng);
}

}  // namespace postbench
