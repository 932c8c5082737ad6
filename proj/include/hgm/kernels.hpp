#pragma once

// Dense linear-algebra kernels over Rat or double. Every kernel has a serial
// reference in kernels::serial and an OpenMP variant in kernels::omp that must
// produce identical results for exact scalars; the unqualified entry points
// dispatch on problem size.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hgm/matrix.hpp"
#include "hgm/rational.hpp"

namespace hgm::kernels {

namespace detail {

template <class T>
std::optional<std::size_t> choose_pivot(const Matrix<T>& a, std::size_t col, std::size_t from) {
  std::optional<std::size_t> best;
  double best_mag = 0.0;
  for (std::size_t r = from; r < a.rows(); ++r) {
    if (is_zero(a(r, col))) continue;
    if constexpr (ScalarTraits<T>::exact) {
      return r;
    } else {
      const double m = ScalarTraits<T>::magnitude(a(r, col));
      if (!best || m > best_mag) {
        best = r;
        best_mag = m;
      }
    }
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace detail

namespace serial {

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const T& ail = a(i, l);
      if (is_zero(ail)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!is_zero(b(l, j))) c(i, j) += ail * b(l, j);
    }
  return c;
}

// M * v
template <class T>
std::vector<T> apply(const Matrix<T>& m, std::span<const T> v) {
  detail::require(m.cols() == v.size(), "apply: dimension mismatch");
  std::vector<T> out(m.rows(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j)) && !is_zero(v[j])) out[i] += m(i, j) * v[j];
  return out;
}

// v * M
template <class T>
std::vector<T> apply_left(std::span<const T> v, const Matrix<T>& m) {
  detail::require(m.rows() == v.size(), "apply_left: dimension mismatch");
  std::vector<T> out(m.cols(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (is_zero(v[i])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j))) out[j] += v[i] * m(i, j);
  }
  return out;
}

// Solves a * X = b column-wise by Gaussian elimination. nullopt when singular.
template <class T>
std::optional<Matrix<T>> solve(Matrix<T> a, Matrix<T> b) {
  detail::require(a.rows() == a.cols() && a.rows() == b.rows(), "solve: dimension mismatch");
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    auto p = detail::choose_pivot(a, k, k);
    if (!p) return std::nullopt;
    detail::swap_rows(a, k, *p);
    detail::swap_rows(b, k, *p);
    const T inv = T(1) / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (is_zero(a(i, k))) continue;
      const T f = a(i, k) * inv;
      for (std::size_t j = k; j < n; ++j)
        if (!is_zero(a(k, j))) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!is_zero(b(k, j))) b(i, j) -= f * b(k, j);
    }
  }
  Matrix<T> x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t ii = n; ii-- > 0;) {
      T acc = b(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j)
        if (!is_zero(a(ii, j))) acc -= a(ii, j) * x(j, c);
      x(ii, c) = acc / a(ii, ii);
    }
  return x;
}

template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, std::span<const T> b) {
  Matrix<T> rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  auto x = solve(a, std::move(rhs));
  if (!x) return std::nullopt;
  std::vector<T> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = (*x)(i, 0);
  return out;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  return solve(a, Matrix<T>::identity(a.rows()));
}

// Fraction-free (Bareiss) elimination.
template <class T>
T determinant(Matrix<T> a) {
  detail::require(a.rows() == a.cols(), "determinant: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  T prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto p = detail::choose_pivot(a, k, k);
    if (!p) return T(0);
    if (*p != k) {
      detail::swap_rows(a, k, *p);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        T t = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        a(i, j) = std::move(t);
      }
      a(i, k) = T(0);
    }
    prev = a(k, k);
  }
  T d = a(n - 1, n - 1);
  if (negate) d = -d;
  return d;
}

template <class T>
std::size_t rank(Matrix<T> a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    auto p = detail::choose_pivot(a, c, r);
    if (!p) continue;
    detail::swap_rows(a, r, *p);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (is_zero(a(i, c))) continue;
      const T f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace serial

namespace omp {

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  const long rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < rows; ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const T& ail = a(i, l);
      if (is_zero(ail)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!is_zero(b(l, j))) c(i, j) += ail * b(l, j);
    }
  return c;
}

template <class T>
std::vector<T> apply(const Matrix<T>& m, std::span<const T> v) {
  detail::require(m.cols() == v.size(), "apply: dimension mismatch");
  std::vector<T> out(m.rows(), T(0));
  const long rows = static_cast<long>(m.rows());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j)) && !is_zero(v[j])) out[i] += m(i, j) * v[j];
  return out;
}

template <class T>
std::vector<T> apply_left(std::span<const T> v, const Matrix<T>& m) {
  detail::require(m.rows() == v.size(), "apply_left: dimension mismatch");
  std::vector<T> out(m.cols(), T(0));
  const long cols = static_cast<long>(m.cols());
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (!is_zero(v[i]) && !is_zero(m(i, j))) out[j] += v[i] * m(i, j);
  return out;
}

template <class T>
std::optional<Matrix<T>> solve(Matrix<T> a, Matrix<T> b) {
  detail::require(a.rows() == a.cols() && a.rows() == b.rows(), "solve: dimension mismatch");
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    auto p = detail::choose_pivot(a, k, k);
    if (!p) return std::nullopt;
    detail::swap_rows(a, k, *p);
    detail::swap_rows(b, k, *p);
    const T inv = T(1) / a(k, k);
    const long first = static_cast<long>(k + 1);
    const long last = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long i = first; i < last; ++i) {
      if (is_zero(a(i, k))) continue;
      const T f = a(i, k) * inv;
      for (std::size_t j = k; j < n; ++j)
        if (!is_zero(a(k, j))) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!is_zero(b(k, j))) b(i, j) -= f * b(k, j);
    }
  }
  Matrix<T> x(n, b.cols());
  const long rhs = static_cast<long>(b.cols());
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < rhs; ++c)
    for (std::size_t ii = n; ii-- > 0;) {
      T acc = b(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j)
        if (!is_zero(a(ii, j))) acc -= a(ii, j) * x(j, c);
      x(ii, c) = acc / a(ii, ii);
    }
  return x;
}

template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, std::span<const T> b) {
  Matrix<T> rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  auto x = solve(a, std::move(rhs));
  if (!x) return std::nullopt;
  std::vector<T> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = (*x)(i, 0);
  return out;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  return solve(a, Matrix<T>::identity(a.rows()));
}

}  // namespace omp

// Below this many scalar multiply-adds the serial kernels win.
inline constexpr std::size_t kParallelThreshold = 4096;

inline bool use_parallel(std::size_t work) {
#ifdef _OPENMP
  return work >= kParallelThreshold;
#else
  (void)work;
  return false;
#endif
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  return use_parallel(a.rows() * a.cols() * b.cols()) ? omp::multiply(a, b) : serial::multiply(a, b);
}

template <class T>
std::vector<T> apply(const Matrix<T>& m, std::span<const T> v) {
  return use_parallel(m.rows() * m.cols()) ? omp::apply(m, v) : serial::apply(m, v);
}

template <class T>
std::vector<T> apply_left(std::span<const T> v, const Matrix<T>& m) {
  return use_parallel(m.rows() * m.cols()) ? omp::apply_left(v, m) : serial::apply_left(v, m);
}

template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, std::span<const T> b) {
  return use_parallel(a.rows() * a.rows() * a.rows()) ? omp::solve(a, b) : serial::solve(a, b);
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  return use_parallel(a.rows() * a.rows() * a.rows()) ? omp::inverse(a) : serial::inverse(a);
}

using serial::determinant;
using serial::rank;

}  // namespace hgm::kernels
