#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "spca/kernels.hpp"
#include "spca/rng.hpp"

namespace {

using spca::kernels::KernelTable;

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  spca::Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  // Exercise exact zeros and the threshold boundary.
  if (n > 3) {
    v[1] = 0.0;
    v[2] = 0.5;
    v[3] = -0.5;
  }
  return v;
}

// Elementwise kernels may differ between the fused and unfused paths by one
// rounding of each product.
void check_close(const std::vector<double>& a, const std::vector<double>& b, double scale) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) <= 4e-16 * scale);
}

}  // namespace

TEST_CASE("scalar table is always available and named") {
  CHECK(std::strcmp(spca::kernels::scalar().name, "scalar") == 0);
  CHECK(spca::kernels::by_name("scalar") == &spca::kernels::scalar());
  CHECK(spca::kernels::by_name("nonexistent") == nullptr);
  const KernelTable& active = spca::kernels::active();
  CHECK((&active == &spca::kernels::scalar() || &active == spca::kernels::avx2()));
}

TEST_CASE("scalar reference kernels on small hand-checked inputs") {
  const KernelTable& k = spca::kernels::scalar();
  std::vector<double> a{1, 2, 3};
  std::vector<double> b{4, -5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == 12.0);
  CHECK(k.sum_abs(b.data(), 3) == 15.0);
  CHECK(k.max_abs(b.data(), 3) == 6.0);
  CHECK(k.max_abs(b.data(), 0) == 0.0);
  CHECK(k.sum_sq_diff(a.data(), b.data(), 3) == 9.0 + 49.0 + 9.0);
  std::vector<double> y = b;
  k.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{6, -1, 12});
  std::vector<double> x{1, 0}, z{0, 1};
  k.rotate(x.data(), z.data(), 2, 0.0, 1.0);
  CHECK(x == std::vector<double>{0, -1});
  CHECK(z == std::vector<double>{1, 0});
  std::vector<double> in{3.0, -0.5, 1.0, -2.0}, out(4);
  k.soft_threshold(in.data(), out.data(), 4, 1.0);
  CHECK(out == std::vector<double>{2.0, 0.0, 0.0, -1.0});
  CHECK_FALSE(std::signbit(out[1]));
  std::vector<double> h(3);
  k.hadamard(a.data(), b.data(), h.data(), 3);
  CHECK(h == std::vector<double>{4, -10, 18});
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const KernelTable* v = spca::kernels::avx2();
  if (v == nullptr) {
    MESSAGE("AVX2 variant unavailable on this build or CPU; equivalence not exercised");
    return;
  }
  const KernelTable& s = spca::kernels::scalar();
  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto a = random_values(n, 11 + n);
    const auto b = random_values(n, 1000 + n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
    CHECK(std::fabs(v->dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= 1e-14 * (1.0 + mag));

    double sa = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sa += std::fabs(a[i]);
      sd += (a[i] - b[i]) * (a[i] - b[i]);
    }
    CHECK(std::fabs(v->sum_abs(a.data(), n) - s.sum_abs(a.data(), n)) <= 1e-14 * (1.0 + sa));
    CHECK(std::fabs(v->sum_sq_diff(a.data(), b.data(), n) - s.sum_sq_diff(a.data(), b.data(), n)) <=
          1e-14 * (1.0 + sd));
    CHECK(v->max_abs(a.data(), n) == s.max_abs(a.data(), n));

    std::vector<double> y1 = b, y2 = b;
    v->axpy(0.7, a.data(), y1.data(), n);
    s.axpy(0.7, a.data(), y2.data(), n);
    check_close(y1, y2, 10.0);

    std::vector<double> x1 = a, x2 = a, z1 = b, z2 = b;
    const double c = std::cos(0.3), sn = std::sin(0.3);
    v->rotate(x1.data(), z1.data(), n, c, sn);
    s.rotate(x2.data(), z2.data(), n, c, sn);
    check_close(x1, x2, 20.0);
    check_close(z1, z2, 20.0);

    std::vector<double> o1(n), o2(n);
    v->soft_threshold(a.data(), o1.data(), n, 0.5);
    s.soft_threshold(a.data(), o2.data(), n, 0.5);
    CHECK(o1 == o2);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::signbit(o1[i]) == std::signbit(o2[i]));

    v->hadamard(a.data(), b.data(), o1.data(), n);
    s.hadamard(a.data(), b.data(), o2.data(), n);
    CHECK(o1 == o2);
  }
}

TEST_CASE("AVX2 rotation of mirrored rows stays mirrored") {
  // The eigensolver rotates row p and row q with the same (c, s); an
  // implementation that rounds the vector body and the tail differently
  // would break symmetry of the working matrix.
  const KernelTable* v = spca::kernels::avx2();
  if (v == nullptr) return;
  for (std::size_t n : {5u, 8u, 13u, 50u}) {
    auto x = random_values(n, n);
    auto y = random_values(n, n + 7);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x[i];
      ys[i] = y[i];
    }
    v->rotate(x.data(), y.data(), n, 0.8, 0.6);
    for (std::size_t i = 0; i < n; ++i) {
      double a = xs[i], b = ys[i];
      v->rotate(&a, &b, 1, 0.8, 0.6);
      CHECK(a == x[i]);
      CHECK(b == y[i]);
    }
  }
}
