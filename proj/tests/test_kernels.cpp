#include <doctest.h>

#include "hgm/kernels.hpp"
#include "test_support.hpp"

using namespace hgm;
using hgm::testing::Rng;

namespace {

Matrix<Rat> random_matrix(Rng& rng, std::size_t r, std::size_t c, int zero_percent = 20) {
  Matrix<Rat> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng.integer(0, 99) >= zero_percent) m(i, j) = rng.rational(12);
  return m;
}

}  // namespace

TEST_CASE("parallel and serial kernels agree exactly") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 24));
    const Matrix<Rat> a = random_matrix(rng, n, n);
    const Matrix<Rat> b = random_matrix(rng, n, n);
    CHECK(kernels::serial::multiply(a, b) == kernels::omp::multiply(a, b));
    std::vector<Rat> v(n);
    for (Rat& e : v) e = rng.rational();
    CHECK(kernels::serial::apply<Rat>(a, v) == kernels::omp::apply<Rat>(a, v));
    CHECK(kernels::serial::apply_left<Rat>(v, a) == kernels::omp::apply_left<Rat>(v, a));
    const auto s1 = kernels::serial::solve<Rat>(a, std::span<const Rat>(v));
    const auto s2 = kernels::omp::solve<Rat>(a, std::span<const Rat>(v));
    REQUIRE(s1.has_value() == s2.has_value());
    if (s1) CHECK(*s1 == *s2);
  }
}

TEST_CASE("solve and inverse satisfy their defining equations") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 12));
    const Matrix<Rat> a = random_matrix(rng, n, n, 0);
    auto inv = kernels::inverse(a);
    if (sgn(kernels::determinant(a)) == 0) {
      CHECK_FALSE(inv.has_value());
      continue;
    }
    REQUIRE(inv.has_value());
    CHECK(kernels::multiply(a, *inv) == Matrix<Rat>::identity(n));
    CHECK(kernels::omp::inverse(a) == inv);
  }
}

TEST_CASE("fraction-free determinant matches permutation expansion") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
    const Matrix<Rat> a = random_matrix(rng, n, n, 30);
    CHECK(kernels::determinant(a) == testing::leibniz_det(a));
  }
}

TEST_CASE("determinant handles leading zeros and singular matrices") {
  Matrix<Rat> a(3, 3);
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(2, 2) = Rat(1, 2);
  CHECK(kernels::determinant(a) == Rat(-1, 2));
  Matrix<Rat> s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = 2;
  s(1, 0) = 2;
  s(1, 1) = 4;
  CHECK(kernels::determinant(s) == 0);
  CHECK(kernels::rank(s) == 1);
  CHECK_FALSE(kernels::inverse(s).has_value());
}

TEST_CASE("binary64 kernels pivot on the largest entry") {
  Matrix<double> a(2, 2);
  a(0, 0) = 1e-20;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 1;
  const std::vector<double> b{1, 2};
  const auto x = kernels::serial::solve<double>(a, std::span<const double>(b));
  REQUIRE(x);
  CHECK((*x)[0] == doctest::Approx(1.0));
  CHECK((*x)[1] == doctest::Approx(1.0));
}
