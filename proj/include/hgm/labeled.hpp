#pragma once

#include <string>
#include <vector>

#include "hgm/errors.hpp"
#include "hgm/index_combinatorics.hpp"
#include "hgm/kernels.hpp"
#include "hgm/matrix.hpp"

namespace hgm {

// Square matrix whose rows and columns are indexed by explicit, ordered lists
// of (sorted) index sets. Products require the left column labels to equal the
// right row labels element for element.
template <class T>
struct LabeledMatrix {
  std::vector<IndexSet> row_labels;
  std::vector<IndexSet> col_labels;
  Matrix<T> values;

  LabeledMatrix() = default;
  LabeledMatrix(std::vector<IndexSet> rows, std::vector<IndexSet> cols)
      : row_labels(std::move(rows)), col_labels(std::move(cols)), values(row_labels.size(), col_labels.size()) {}
  LabeledMatrix(std::vector<IndexSet> rows, std::vector<IndexSet> cols, Matrix<T> v)
      : row_labels(std::move(rows)), col_labels(std::move(cols)), values(std::move(v)) {}

  std::size_t size() const noexcept { return row_labels.size(); }
  T& operator()(std::size_t i, std::size_t j) { return values(i, j); }
  const T& operator()(std::size_t i, std::size_t j) const { return values(i, j); }

  LabeledMatrix transposed() const { return {col_labels, row_labels, values.transposed()}; }

  friend bool operator==(const LabeledMatrix& a, const LabeledMatrix& b) {
    return a.row_labels == b.row_labels && a.col_labels == b.col_labels && a.values == b.values;
  }
};

using SquareMatrixR = LabeledMatrix<Rat>;

// Coefficient vector over the frame 𝒥̇ (or any labeled basis).
template <class T>
struct GMVector {
  std::vector<IndexSet> labels;
  std::vector<T> values;

  std::size_t size() const noexcept { return values.size(); }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const GMVector& a, const GMVector& b) {
    return a.labels == b.labels && a.values == b.values;
  }
};

template <class T>
LabeledMatrix<T> operator*(const LabeledMatrix<T>& a, const LabeledMatrix<T>& b) {
  if (a.col_labels != b.row_labels) throw InternalError("label mismatch in labeled matrix product");
  return {a.row_labels, b.col_labels, kernels::multiply(a.values, b.values)};
}

// Column action M·v.
template <class T>
GMVector<T> operator*(const LabeledMatrix<T>& m, const GMVector<T>& v) {
  if (m.col_labels != v.labels) throw InternalError("label mismatch in matrix-vector product");
  return {m.row_labels, kernels::apply<T>(m.values, v.values)};
}

// Row action v·M.
template <class T>
GMVector<T> operator*(const GMVector<T>& v, const LabeledMatrix<T>& m) {
  if (m.row_labels != v.labels) throw InternalError("label mismatch in vector-matrix product");
  return {m.col_labels, kernels::apply_left<T>(v.values, m.values)};
}

template <class T>
LabeledMatrix<T> scaled(const LabeledMatrix<T>& m, const T& s) {
  LabeledMatrix<T> out = m;
  for (std::size_t i = 0; i < m.values.rows(); ++i)
    for (std::size_t j = 0; j < m.values.cols(); ++j) out.values(i, j) = m.values(i, j) * s;
  return out;
}

template <class T>
GMVector<T> scaled(const GMVector<T>& v, const T& s) {
  GMVector<T> out = v;
  for (T& e : out.values) e *= s;
  return out;
}

template <class T>
LabeledMatrix<T> operator+(const LabeledMatrix<T>& a, const LabeledMatrix<T>& b) {
  if (a.row_labels != b.row_labels || a.col_labels != b.col_labels)
    throw InternalError("label mismatch in labeled matrix sum");
  LabeledMatrix<T> out = a;
  for (std::size_t i = 0; i < a.values.rows(); ++i)
    for (std::size_t j = 0; j < a.values.cols(); ++j) out.values(i, j) += b.values(i, j);
  return out;
}

template <class T>
LabeledMatrix<T> operator-(const LabeledMatrix<T>& a, const LabeledMatrix<T>& b) {
  if (a.row_labels != b.row_labels || a.col_labels != b.col_labels)
    throw InternalError("label mismatch in labeled matrix difference");
  LabeledMatrix<T> out = a;
  for (std::size_t i = 0; i < a.values.rows(); ++i)
    for (std::size_t j = 0; j < a.values.cols(); ++j) out.values(i, j) -= b.values(i, j);
  return out;
}

// Exact inverse by elimination; throws PreconditionError when singular.
template <class T>
LabeledMatrix<T> inverse(const LabeledMatrix<T>& m) {
  auto inv = kernels::inverse(m.values);
  if (!inv) throw PreconditionError("singular labeled matrix");
  return {m.col_labels, m.row_labels, std::move(*inv)};
}

template <class T>
GMVector<T> zero_vector(const std::vector<IndexSet>& labels) {
  return {labels, std::vector<T>(labels.size(), T(0))};
}

template <class T>
LabeledMatrix<T> identity_matrix(const std::vector<IndexSet>& labels) {
  return {labels, labels, Matrix<T>::identity(labels.size())};
}

}  // namespace hgm
