#include "mcs/kernels.hpp"

#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

namespace mcs::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace scalar

#ifndef MCS_HAVE_AVX2_SOURCES
namespace avx2 {
bool available() { return false; }
double dot(const double*, const double*, std::size_t) {
  throw std::runtime_error("avx2 backend not compiled in");
}
double squared_distance(const double*, const double*, std::size_t) {
  throw std::runtime_error("avx2 backend not compiled in");
}
void axpy(double, const double*, double*, std::size_t) {
  throw std::runtime_error("avx2 backend not compiled in");
}
}  // namespace avx2
#endif

namespace {

enum class Backend { Scalar, Avx2 };

Backend detect() { return avx2::available() ? Backend::Avx2 : Backend::Scalar; }

std::atomic<Backend> g_backend{detect()};

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  if (g_backend.load(std::memory_order_relaxed) == Backend::Avx2)
    return avx2::dot(a.data(), b.data(), a.size());
  return scalar::dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  if (g_backend.load(std::memory_order_relaxed) == Backend::Avx2)
    return avx2::squared_distance(a.data(), b.data(), a.size());
  return scalar::squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  if (g_backend.load(std::memory_order_relaxed) == Backend::Avx2)
    return avx2::axpy(alpha, x.data(), y.data(), x.size());
  return scalar::axpy(alpha, x.data(), y.data(), x.size());
}

std::string_view active_backend() {
  return g_backend.load(std::memory_order_relaxed) == Backend::Avx2 ? "avx2"
                                                                    : "scalar";
}

void force_backend(std::string_view name) {
  if (name == "scalar") {
    g_backend.store(Backend::Scalar);
  } else if (name == "avx2") {
    if (!avx2::available())
      throw std::runtime_error("avx2 backend unavailable on this CPU");
    g_backend.store(Backend::Avx2);
  } else if (name == "auto") {
    g_backend.store(detect());
  } else {
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
  }
}

}  // namespace mcs::kernels
