#include <cmath>

#include "postbench/kernels.hpp"

namespace postbench::kernels {

namespace {

// The reductions accumulate in the same lane order as the vector kernels
// (8 interleaved partial sums, folded pairwise, then a sequential tail), so
// every kernel table produces bit-identical results.
inline double fold4(const double* a) { return (a[0] + a[2]) + (a[1] + a[3]); }

CenteredSums centered_sums_scalar(const double* x, std::size_t n, double shift, double offset) {
  double s[8] = {}, q[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int k = 0; k < 8; ++k) {
      const double e = (x[i + k] - shift) - offset;
      s[k] += e;
      q[k] += e * e;
    }
  double s4[4], q4[4];
  for (int k = 0; k < 4; ++k) {
    s4[k] = s[k] + s[k + 4];
    q4[k] = q[k] + q[k + 4];
  }
  double sum = fold4(s4), sum_sq = fold4(q4);
  for (; i < n; ++i) {
    const double e = (x[i] - shift) - offset;
    sum += e;
    sum_sq += e * e;
  }
  return {sum, sum_sq};
}

void min_max_scalar(const double* x, std::size_t n, double* lo, double* hi) {
  double a = x[0], b = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    a = x[i] < a ? x[i] : a;
    b = x[i] > b ? x[i] : b;
  }
  *lo = a;
  *hi = b;
}

bool in_box(double lat, double lon, const BoxBounds& box) {
  return lat >= box.lat_min && lat <= box.lat_max && lon >= box.lon_min && lon <= box.lon_max;
}

MaskedSum box_sum_scalar(const double* lat, const double* lon, const double* value, std::size_t n,
                         BoxBounds box) {
  double acc[4] = {};
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) {
      const bool in = in_box(lat[i + k], lon[i + k], box);
      acc[k] += in ? value[i + k] : 0.0;
      count += in;
    }
  double sum = fold4(acc);
  for (; i < n; ++i) {
    if (in_box(lat[i], lon[i], box)) {
      sum += value[i];
      ++count;
    }
  }
  return {sum, count};
}

void reciprocal_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / in[i];
}

void joint_transform_scalar(const double* precision, const double* z, std::size_t n, double mu,
                            double kappa, double* sigma_sq, double* theta) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s2 = 1.0 / precision[i];
    sigma_sq[i] = s2;
    theta[i] = mu + std::sqrt(s2 / kappa) * z[i];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar,   centered_sums_scalar, min_max_scalar,
                                 box_sum_scalar, reciprocal_scalar,    joint_transform_scalar};
  return table;
}

}  // namespace postbench::kernels
