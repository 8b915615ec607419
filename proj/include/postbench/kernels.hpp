#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version selected at runtime. Element-wise kernels are
// bit-identical across variants; reductions agree to rounding.
namespace postbench::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct BoxBounds {
  double lat_min, lat_max, lon_min, lon_max;
};

struct CenteredSums {
  double sum;     // sum of e_i
  double sum_sq;  // sum of e_i^2
};

struct MaskedSum {
  double sum;
  std::size_t count;
};

struct KernelTable {
  Isa isa;
  // e_i = (x_i - shift) - offset
  CenteredSums (*centered_sums)(const double* x, std::size_t n, double shift, double offset);
  void (*min_max)(const double* x, std::size_t n, double* lo, double* hi);
  // Inclusive on all four edges.
  MaskedSum (*box_sum)(const double* lat, const double* lon, const double* value, std::size_t n,
                       BoxBounds box);
  void (*reciprocal)(const double* in, double* out, std::size_t n);
  // sigma_sq_i = 1 / precision_i; theta_i = mu + sqrt(sigma_sq_i / kappa) * z_i
  void (*joint_transform)(const double* precision, const double* z, std::size_t n, double mu,
                          double kappa, double* sigma_sq, double* theta);
};

const KernelTable& scalar_table();
// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();
bool cpu_has_avx2();

/// Table chosen once per process: AVX2 when compiled and supported by the
/// CPU, unless POSTBENCH_SIMD=scalar is set in the environment.
const KernelTable& active();

// Convenience wrappers over the active table.
CenteredSums centered_sums(std::span<const double> x, double shift, double offset);
void min_max(std::span<const double> x, double& lo, double& hi);
MaskedSum box_sum(std::span<const double> lat, std::span<const double> lon,
                  std::span<const double> value, BoxBounds box);
void reciprocal(std::span<const double> in, std::span<double> out);
void joint_transform(std::span<const double> precision, std::span<const double> z, double mu,
                     double kappa, std::span<double> sigma_sq, std::span<double> theta);

}  // namespace postbench::kernels
