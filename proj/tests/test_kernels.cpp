#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "mcs/kernels.hpp"

using namespace mcs;

TEST_CASE("scalar kernels match hand results") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(kernels::scalar::dot(a, b, 3) == doctest::Approx(12.0));
  CHECK(kernels::scalar::squared_distance(a, b, 3) == doctest::Approx(9 + 49 + 9));

  double y[] = {1.0, 1.0, 1.0};
  kernels::scalar::axpy(2.0, a, y, 3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 7.0);
}

TEST_CASE("avx2 variant agrees with the scalar reference") {
  if (!kernels::avx2::available()) return;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-10.0, 10.0);
  // lengths around the vector width boundaries
  for (std::size_t n : {1u, 3u, 4u, 5u, 7u, 8u, 9u, 30u, 31u, 128u, 1001u}) {
    std::vector<double> a(n), b(n), y1(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = unit(rng);
      b[i] = unit(rng);
      y1[i] = y2[i] = unit(rng);
    }
    CHECK(kernels::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::squared_distance(a.data(), b.data(), n))
              .epsilon(1e-12));
    kernels::avx2::axpy(1.5, a.data(), y1.data(), n);
    kernels::scalar::axpy(1.5, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));
  }
}

TEST_CASE("runtime dispatch can be forced") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  kernels::force_backend("scalar");
  CHECK(kernels::active_backend() == "scalar");
  const double scalar_result = kernels::dot(a, b);
  if (kernels::avx2::available()) {
    kernels::force_backend("avx2");
    CHECK(kernels::active_backend() == "avx2");
    CHECK(kernels::dot(a, b) == doctest::Approx(scalar_result).epsilon(1e-14));
  }
  kernels::force_backend("auto");
  CHECK_THROWS(kernels::force_backend("sse9"));
}
