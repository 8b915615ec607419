// Compiled with -mavx2 only (no -mfma): every lane op is a correctly rounded
// IEEE operation, so element-wise results match the scalar kernels exactly.
#include <immintrin.h>

#include <cmath>

#include "postbench/kernels.hpp"

namespace postbench::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

CenteredSums centered_sums_avx2(const double* x, std::size_t n, double shift, double offset) {
  const __m256d vshift = _mm256_set1_pd(shift);
  const __m256d voff = _mm256_set1_pd(offset);
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d q0 = _mm256_setzero_pd(), q1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d e0 = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vshift), voff);
    const __m256d e1 = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i + 4), vshift), voff);
    s0 = _mm256_add_pd(s0, e0);
    s1 = _mm256_add_pd(s1, e1);
    q0 = _mm256_add_pd(q0, _mm256_mul_pd(e0, e0));
    q1 = _mm256_add_pd(q1, _mm256_mul_pd(e1, e1));
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  double q = hsum(_mm256_add_pd(q0, q1));
  for (; i < n; ++i) {
    const double e = (x[i] - shift) - offset;
    s += e;
    q += e * e;
  }
  return {s, q};
}

void min_max_avx2(const double* x, std::size_t n, double* lo, double* hi) {
  double a = x[0], b = x[0];
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vlo = _mm256_loadu_pd(x), vhi = vlo;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      vlo = _mm256_min_pd(vlo, v);
      vhi = _mm256_max_pd(vhi, v);
    }
    alignas(32) double l[4], h[4];
    _mm256_store_pd(l, vlo);
    _mm256_store_pd(h, vhi);
    for (int k = 0; k < 4; ++k) {
      a = l[k] < a ? l[k] : a;
      b = h[k] > b ? h[k] : b;
    }
  }
  for (; i < n; ++i) {
    a = x[i] < a ? x[i] : a;
    b = x[i] > b ? x[i] : b;
  }
  *lo = a;
  *hi = b;
}

MaskedSum box_sum_avx2(const double* lat, const double* lon, const double* value, std::size_t n,
                       BoxBounds box) {
  const __m256d la0 = _mm256_set1_pd(box.lat_min), la1 = _mm256_set1_pd(box.lat_max);
  const __m256d lo0 = _mm256_set1_pd(box.lon_min), lo1 = _mm256_set1_pd(box.lon_max);
  __m256d acc = _mm256_setzero_pd();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d la = _mm256_loadu_pd(lat + i);
    const __m256d lo = _mm256_loadu_pd(lon + i);
    __m256d m = _mm256_and_pd(_mm256_cmp_pd(la, la0, _CMP_GE_OQ), _mm256_cmp_pd(la, la1, _CMP_LE_OQ));
    m = _mm256_and_pd(m, _mm256_cmp_pd(lo, lo0, _CMP_GE_OQ));
    m = _mm256_and_pd(m, _mm256_cmp_pd(lo, lo1, _CMP_LE_OQ));
    acc = _mm256_add_pd(acc, _mm256_and_pd(m, _mm256_loadu_pd(value + i)));
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(m)));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    if (lat[i] >= box.lat_min && lat[i] <= box.lat_max && lon[i] >= box.lon_min &&
        lon[i] <= box.lon_max) {
      sum += value[i];
      ++count;
    }
  }
  return {sum, count};
}

void reciprocal_avx2(const double* in, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_loadu_pd(in + i)));
  for (; i < n; ++i) out[i] = 1.0 / in[i];
}

void joint_transform_avx2(const double* precision, const double* z, std::size_t n, double mu,
                          double kappa, double* sigma_sq, double* theta) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vkappa = _mm256_set1_pd(kappa);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s2 = _mm256_div_pd(one, _mm256_loadu_pd(precision + i));
    _mm256_storeu_pd(sigma_sq + i, s2);
    const __m256d sd = _mm256_sqrt_pd(_mm256_div_pd(s2, vkappa));
    _mm256_storeu_pd(theta + i, _mm256_add_pd(vmu, _mm256_mul_pd(sd, _mm256_loadu_pd(z + i))));
  }
  for (; i < n; ++i) {
    const double s2 = 1.0 / precision[i];
    sigma_sq[i] = s2;
    theta[i] = mu + std::sqrt(s2 / kappa) * z[i];
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::Avx2,   centered_sums_avx2, min_max_avx2,
                                 box_sum_avx2, reciprocal_avx2,    joint_transform_avx2};
  return &table;
}

}  // namespace postbench::kernels
