#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hgm/index_combinatorics.hpp"
#include "hgm/matrix.hpp"
#include "hgm/rational.hpp"

namespace hgm {

// The k x n variable matrix x, indexed 1-based as x(i, j).
class XMatrix {
 public:
  XMatrix(Shape shape, Matrix<Rat> entries);
  XMatrix(Shape shape, const std::vector<std::vector<Rat>>& rows);

  const Shape& shape() const noexcept { return shape_; }
  const Rat& operator()(int i, int j) const { return entries_(i - 1, j - 1); }
  const Matrix<Rat>& entries() const noexcept { return entries_; }
  std::string str() const;

 private:
  Shape shape_;
  Matrix<Rat> entries_;
};

// x̃: row 0 is (1, 0..0, 1..1, 1); rows 1..k are (0, e_i, x_i., 1).
template <class T = Rat>
Matrix<T> build_xtilde(const XMatrix& x);

// |x̃⟨J⟩| with columns in ascending order.
template <class T = Rat>
T minor(const XMatrix& x, const IndexSet& J);

// Determinant with columns in tuple order.
template <class T = Rat>
T minor_tuple(const XMatrix& x, const IndexTuple& tuple);

// ∂|x̃⟨J⟩|/∂x_ij (the signed cofactor of the (i, k+j) entry).
template <class T = Rat>
T minor_partial(const XMatrix& x, const IndexSet& J, int i, int j);

// ∂²|x̃⟨J⟩|/∂x_ij ∂x_i2j2.
template <class T = Rat>
T minor_second_partial(const XMatrix& x, const IndexSet& J, int i, int j, int i2, int j2);

// ∂/∂x_ij log|x̃⟨J⟩|; PreconditionError on a vanishing minor.
template <class T = Rat>
T dlog_minor(const XMatrix& x, const IndexSet& J, int i, int j);

// ∂²/∂x_ij ∂x_i2j2 log|x̃⟨J⟩|.
template <class T = Rat>
T d2log_minor(const XMatrix& x, const IndexSet& J, int i, int j, int i2, int j2);

// Every J with |x̃⟨J⟩| = 0; empty iff x lies in X.
std::vector<IndexSet> check_in_X(const XMatrix& x);

// PreconditionError listing the vanishing minors when x is not in X.
void require_in_X(const XMatrix& x);

// All minors |x̃⟨J⟩|, J in 𝒥, computed once for one x. Immutable after
// construction, so concurrent lookups are safe.
template <class T = Rat>
class MinorTable {
 public:
  explicit MinorTable(const XMatrix& x);

  const XMatrix& x() const noexcept { return x_; }
  const T& operator()(const IndexSet& J) const;
  // Tuple-ordered minor: sorted minor times the sorting sign.
  T operator()(const IndexTuple& tuple) const;
  T dlog(const IndexSet& J, int i, int j) const;

 private:
  XMatrix x_;
  std::unordered_map<std::uint64_t, T> values_;
};

}  // namespace hgm
