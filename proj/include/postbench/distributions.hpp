#pragma once

#include "postbench/rng.hpp"

namespace postbench {

/// Standard normal by Box-Muller: consumes exactly two uniforms per call and
/// keeps no cached second variate.
double standard_normal(PhiloxStream& rng);

/// Normal draw computed as mean + sqrt(variance) * z with z = standard_normal.
double sample_normal(double mean, double variance, PhiloxStream& rng);

/// Gamma draw in shape-rate form. Marsaglia-Tsang squeeze/rejection for
/// shape >= 1; for shape < 1 a gamma(shape + 1) draw is scaled by U^(1/shape).
double sample_gamma(double shape, double rate, PhiloxStream& rng);

/// sigma^2 draw as the reciprocal of gamma(shape, rate_of_precision).
double sample_inverse_gamma(double shape, double rate_of_precision, PhiloxStream& rng);

}  // namespace postbench
