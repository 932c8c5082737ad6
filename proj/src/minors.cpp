#include "hgm/minors.hpp"

#include "hgm/errors.hpp"
#include "hgm/kernels.hpp"

namespace hgm {

XMatrix::XMatrix(Shape shape, Matrix<Rat> entries) : shape_(shape), entries_(std::move(entries)) {
  if (entries_.rows() != static_cast<std::size_t>(shape_.k()) ||
      entries_.cols() != static_cast<std::size_t>(shape_.n()))
    throw PreconditionError("x matrix dimensions do not match the shape");
}

namespace {
Matrix<Rat> from_rows(const Shape& shape, const std::vector<std::vector<Rat>>& rows) {
  Matrix<Rat> m(static_cast<std::size_t>(shape.k()), static_cast<std::size_t>(shape.n()));
  if (rows.size() != m.rows()) throw PreconditionError("x matrix has the wrong number of rows");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (rows[i].size() != m.cols()) throw PreconditionError("x matrix has a ragged row");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}
}  // namespace

XMatrix::XMatrix(Shape shape, const std::vector<std::vector<Rat>>& rows) : XMatrix(shape, from_rows(shape, rows)) {}

std::string XMatrix::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries_.rows(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < entries_.cols(); ++j) {
      if (j) s += ",";
      s += to_exact_string(entries_(i, j));
    }
  }
  return s + ")";
}

template <class T>
Matrix<T> build_xtilde(const XMatrix& x) {
  const int k = x.shape().k();
  const int n = x.shape().n();
  Matrix<T> m(static_cast<std::size_t>(k + 1), static_cast<std::size_t>(k + n + 2));
  m(0, 0) = T(1);
  for (int c = k + 1; c <= k + n + 1; ++c) m(0, c) = T(1);
  for (int i = 1; i <= k; ++i) {
    m(i, i) = T(1);
    for (int j = 1; j <= n; ++j) m(i, k + j) = from_rat<T>(x(i, j));
    m(i, k + n + 1) = T(1);
  }
  return m;
}

namespace {

template <class T>
Matrix<T> columns(const Matrix<T>& xt, const std::vector<int>& cols) {
  Matrix<T> m(xt.rows(), cols.size());
  for (std::size_t r = 0; r < xt.rows(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = xt(r, static_cast<std::size_t>(cols[c]));
  return m;
}

template <class T>
void set_unit_column(Matrix<T>& m, std::size_t col, int row) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, col) = T(r == static_cast<std::size_t>(row) ? 1 : 0);
}

void check_entry(const Shape& shape, int i, int j) {
  if (i < 1 || i > shape.k() || j < 1 || j > shape.n())
    throw PreconditionError("variable index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
}

}  // namespace

template <class T>
T minor(const XMatrix& x, const IndexSet& J) {
  if (J.size() != static_cast<std::size_t>(x.shape().k() + 1)) throw PreconditionError("minor: wrong set size");
  return kernels::determinant(columns(build_xtilde<T>(x), J.elements()));
}

template <class T>
T minor_tuple(const XMatrix& x, const IndexTuple& tuple) {
  if (tuple.size() != static_cast<std::size_t>(x.shape().k() + 1))
    throw PreconditionError("minor: wrong tuple size");
  return kernels::determinant(columns(build_xtilde<T>(x), tuple.elements()));
}

template <class T>
T minor_partial(const XMatrix& x, const IndexSet& J, int i, int j) {
  check_entry(x.shape(), i, j);
  const int pos = J.position(x.shape().k() + j);
  if (pos < 0) return T(0);
  Matrix<T> m = columns(build_xtilde<T>(x), J.elements());
  set_unit_column(m, static_cast<std::size_t>(pos), i);
  return kernels::determinant(std::move(m));
}

template <class T>
T minor_second_partial(const XMatrix& x, const IndexSet& J, int i, int j, int i2, int j2) {
  check_entry(x.shape(), i, j);
  check_entry(x.shape(), i2, j2);
  // The minor is affine in each row and in each column separately.
  if (i == i2 || j == j2) return T(0);
  const int pos = J.position(x.shape().k() + j);
  const int pos2 = J.position(x.shape().k() + j2);
  if (pos < 0 || pos2 < 0) return T(0);
  Matrix<T> m = columns(build_xtilde<T>(x), J.elements());
  set_unit_column(m, static_cast<std::size_t>(pos), i);
  set_unit_column(m, static_cast<std::size_t>(pos2), i2);
  return kernels::determinant(std::move(m));
}

template <class T>
T dlog_minor(const XMatrix& x, const IndexSet& J, int i, int j) {
  check_entry(x.shape(), i, j);
  if (!J.contains(x.shape().k() + j)) return T(0);
  const T m = minor<T>(x, J);
  if (is_zero(m)) throw PreconditionError("vanishing minor " + J.str() + " in dlog_minor");
  return minor_partial<T>(x, J, i, j) / m;
}

template <class T>
T d2log_minor(const XMatrix& x, const IndexSet& J, int i, int j, int i2, int j2) {
  const T m = minor<T>(x, J);
  if (is_zero(m)) throw PreconditionError("vanishing minor " + J.str() + " in d2log_minor");
  const T a = minor_partial<T>(x, J, i, j);
  const T b = minor_partial<T>(x, J, i2, j2);
  const T ab = minor_second_partial<T>(x, J, i, j, i2, j2);
  return ab / m - a * b / (m * m);
}

std::vector<IndexSet> check_in_X(const XMatrix& x) {
  std::vector<IndexSet> vanishing;
  const Matrix<Rat> xt = build_xtilde<Rat>(x);
  for (const IndexSet& J : enumerate_J(x.shape()))
    if (sgn(kernels::determinant(columns(xt, J.elements()))) == 0) vanishing.push_back(J);
  return vanishing;
}

void require_in_X(const XMatrix& x) {
  const auto vanishing = check_in_X(x);
  if (vanishing.empty()) return;
  std::string msg = "x = " + x.str() + " is not in X; vanishing minors:";
  for (const IndexSet& J : vanishing) msg += " " + J.str();
  throw PreconditionError(msg);
}

template <class T>
MinorTable<T>::MinorTable(const XMatrix& x) : x_(x) {
  const Matrix<T> xt = build_xtilde<T>(x);
  for (const IndexSet& J : enumerate_J(x.shape()))
    values_.emplace(J.mask(), kernels::determinant(columns(xt, J.elements())));
}

template <class T>
const T& MinorTable<T>::operator()(const IndexSet& J) const {
  auto it = values_.find(J.mask());
  if (it == values_.end()) throw InternalError("minor table lookup for " + J.str());
  return it->second;
}

template <class T>
T MinorTable<T>::operator()(const IndexTuple& tuple) const {
  const SortedTuple s = sort_with_sign(tuple);
  const T& m = (*this)(s.set);
  return s.sign < 0 ? T(-m) : m;
}

template <class T>
T MinorTable<T>::dlog(const IndexSet& J, int i, int j) const {
  check_entry(x_.shape(), i, j);
  if (!J.contains(x_.shape().k() + j)) return T(0);
  const T& m = (*this)(J);
  if (is_zero(m)) throw PreconditionError("vanishing minor " + J.str());
  return minor_partial<T>(x_, J, i, j) / m;
}

#define HGM_INSTANTIATE_MINORS(T)                                                           \
  template Matrix<T> build_xtilde<T>(const XMatrix&);                                       \
  template T minor<T>(const XMatrix&, const IndexSet&);                                     \
  template T minor_tuple<T>(const XMatrix&, const IndexTuple&);                             \
  template T minor_partial<T>(const XMatrix&, const IndexSet&, int, int);                   \
  template T minor_second_partial<T>(const XMatrix&, const IndexSet&, int, int, int, int);  \
  template T dlog_minor<T>(const XMatrix&, const IndexSet&, int, int);                      \
  template T d2log_minor<T>(const XMatrix&, const IndexSet&, int, int, int, int);           \
  template class MinorTable<T>;

HGM_INSTANTIATE_MINORS(Rat)
HGM_INSTANTIATE_MINORS(double)

}  // namespace hgm
