#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner-loop kernels. Scalar reference implementations always exist;
// an AVX2 variant is selected at runtime when the CPU supports it. The two
// backends are equivalence-tested against each other.
namespace mcs::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Present only on x86_64 builds; calling these on a CPU without AVX2 is
// undefined. Go through the dispatched entry points below instead.
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
bool available();
}  // namespace avx2

/// Dispatched entry points. a and b must have equal length.
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Name of the backend currently in use: "avx2" or "scalar".
std::string_view active_backend();

/// Testing hook: "scalar", "avx2", or "auto". Throws if the requested
/// backend is unavailable on this CPU.
void force_backend(std::string_view name);

}  // namespace mcs::kernels
