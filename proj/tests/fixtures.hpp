#pragma once

#include <vector>

#include "postbench/analysis.hpp"

namespace fixtures {

// Published posterior summary of the four datasets: theta mean, theta bound, sigma^2
// mean, sigma^2 bound, 95% level.
inline std::vector<postbench::PosteriorSummary> summary_fixture() {
  using postbench::Interval;
  auto row = [](const char* label, double tm, double tlo, double thi, double sm, double slo, double shi) {
    postbench::PosteriorSummary s;
    s.label = label;
    s.theta_mean = tm;
    s.theta_bound = Interval{tlo, thi, 0.95};
    s.sigma_sq_mean = sm;
    s.sigma_sq_bound = Interval{slo, shi, 0.95};
    return s;
  };
  return {row("ERAi", 4.26, 3.87, 4.66, 9.90, 8.30, 11.93), row("d01", 4.80, 4.57, 5.04, 7.08, 6.26, 8.07),
          row("d02", 4.19, 3.93, 4.44, 8.04, 7.12, 9.14), row("d03", 4.56, 4.29, 4.83, 9.19, 8.11, 10.46)};
}

// Station prior: April mean 7.48 C, spread 1.27 C.
inline postbench::Prior station_prior() { return postbench::Prior{7.48, 1.0, 1.0, 1.6129}; }

}  // namespace fixtures
