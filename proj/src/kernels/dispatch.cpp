#include <cstdlib>
#include <string_view>

#include "postbench/error.hpp"
#include "postbench/kernels.hpp"

namespace postbench::kernels {

#ifndef POSTBENCH_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const KernelTable& choose() {
  const char* env = std::getenv("POSTBENCH_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
  if (const KernelTable* t = avx2_table(); t != nullptr && cpu_has_avx2()) return *t;
  return scalar_table();
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorKind::InvalidArgument, "kernel operands differ in length");
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

CenteredSums centered_sums(std::span<const double> x, double shift, double offset) {
  return active().centered_sums(x.data(), x.size(), shift, offset);
}

void min_max(std::span<const double> x, double& lo, double& hi) {
  if (x.empty()) fail(ErrorKind::InvalidArgument, "min_max of an empty sequence");
  active().min_max(x.data(), x.size(), &lo, &hi);
}

MaskedSum box_sum(std::span<const double> lat, std::span<const double> lon,
                  std::span<const double> value, BoxBounds box) {
  require_same_size(lat.size(), lon.size());
  require_same_size(lat.size(), value.size());
  return active().box_sum(lat.data(), lon.data(), value.data(), lat.size(), box);
}

void reciprocal(std::span<const double> in, std::span<double> out) {
  require_same_size(in.size(), out.size());
  active().reciprocal(in.data(), out.data(), in.size());
}

void joint_transform(std::span<const double> precision, std::span<const double> z, double mu,
                     double kappa, std::span<double> sigma_sq, std::span<double> theta) {
  require_same_size(precision.size(), z.size());
  require_same_size(precision.size(), sigma_sq.size());
  require_same_size(precision.size(), theta.size());
  active().joint_transform(precision.data(), z.data(), precision.size(), mu, kappa, sigma_sq.data(),
                           theta.data());
}

}  // namespace postbench::kernels
