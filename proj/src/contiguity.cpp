#include "hgm/contiguity.hpp"

#include "hgm/errors.hpp"

namespace hgm {

namespace {

void check_index(const Shape& s, int i) {
  if (i < 1 || i > s.last())
    throw PreconditionError("contiguity index " + std::to_string(i) + " outside 1.." + std::to_string(s.last()));
}

bool is_upper(const Shape& s, int i) { return i > s.k(); }

template <class T>
void require_frame(const Shape& s, const GMVector<T>& v) {
  if (v.labels != enumerate_J_dot(s)) throw PreconditionError("vector is not over the standard frame");
}

}  // namespace

template <class T>
LabeledMatrix<T> D_matrix(const MinorTable<T>& minors, int i) {
  const Shape& s = minors.x().shape();
  check_index(s, i);
  const auto from = aligned_0Ji(i, s);
  const auto to = aligned_iJ0(i, s);
  std::vector<IndexSet> rows, cols;
  for (const auto& a : from) rows.push_back(a.set);
  for (const auto& a : to) cols.push_back(a.set);
  LabeledMatrix<T> d(rows, cols);
  for (std::size_t l = 0; l < to.size(); ++l) {
    const T den = minors(to[l].tuple);
    if (is_zero(den)) throw PreconditionError("vanishing minor " + to[l].set.str() + " in contiguity");
    d(l, l) = minors(from[l].tuple) / den;
  }
  return d;
}

template <class T>
LabeledMatrix<T> D_matrix(const XMatrix& x, int i) {
  require_in_X(x);
  return D_matrix(MinorTable<T>(x), i);
}

template <class T>
LabeledMatrix<T> contiguity_matrix(const ParamVector& alpha, const MinorTable<T>& minors, int i) {
  const Shape& s = alpha.shape();
  check_index(s, i);
  const ParamVector raised = alpha.raised(i);
  alpha.require_nonzero("contiguity matrix");
  raised.require_nonzero("contiguity matrix (raised parameters)");
  const LabeledMatrix<T> left = matrix_C<T>(raised) * inverse_P<T>(raised, i);
  const LabeledMatrix<T> right = matrix_Q<T>(alpha, i) * inverse_C<T>(alpha);
  return left * D_matrix(minors, i) * right;
}

template <class T>
LabeledMatrix<T> contiguity_matrix(const ParamVector& alpha, const XMatrix& x, int i) {
  require_in_X(x);
  return contiguity_matrix(alpha, MinorTable<T>(x), i);
}

template <class T>
GMVector<T> apply_contiguity(const ParamVector& alpha, const MinorTable<T>& minors, int i, const GMVector<T>& v) {
  const Shape& s = alpha.shape();
  check_index(s, i);
  require_frame(s, v);
  const ParamVector raised = alpha.raised(i);
  alpha.require_nonzero("contiguity");
  raised.require_nonzero("contiguity (raised parameters)");
  GMVector<T> w = inverse_C<T>(alpha) * v;
  w = matrix_Q<T>(alpha, i) * w;
  w = D_matrix(minors, i) * w;
  w = inverse_P<T>(raised, i) * w;
  return matrix_C<T>(raised) * w;
}

template <class T>
GMVector<T> shift_up_series(const ParamVector& alpha, const MinorTable<T>& minors, int i, const GMVector<T>& sbar) {
  const Shape& s = alpha.shape();
  check_index(s, i);
  GMVector<T> out = apply_contiguity(alpha, minors, i, sbar);
  if (!is_upper(s, i)) return out;
  const Rat denom = alpha[i] + 1;
  if (sgn(denom) == 0)
    throw PreconditionError("upward shift in index " + std::to_string(i) + " from alpha_i = -1 is singular");
  return scaled(out, from_rat<T>(Rat(1 / denom)));
}

template <class T>
GMVector<T> shift_up_series(const ParamVector& alpha, const XMatrix& x, int i, const GMVector<T>& sbar) {
  require_in_X(x);
  return shift_up_series(alpha, MinorTable<T>(x), i, sbar);
}

template <class T>
GMVector<T> shift_down_series(const ParamVector& alpha, const MinorTable<T>& minors, int i,
                              const GMVector<T>& sbar) {
  const Shape& s = alpha.shape();
  check_index(s, i);
  require_frame(s, sbar);
  const ParamVector lowered = alpha.shifted(i, -1);
  const LabeledMatrix<T> c = contiguity_matrix(lowered, minors, i);
  auto solved = kernels::solve<T>(c.values, std::span<const T>(sbar.values));
  if (!solved) throw InternalError("contiguity matrix at " + lowered.str() + " is singular");
  GMVector<T> out{sbar.labels, std::move(*solved)};
  if (!is_upper(s, i)) return out;
  return scaled(out, from_rat<T>(alpha[i]));
}

template <class T>
GMVector<T> shift_down_series(const ParamVector& alpha, const XMatrix& x, int i, const GMVector<T>& sbar) {
  require_in_X(x);
  return shift_down_series(alpha, MinorTable<T>(x), i, sbar);
}

template <class T>
GMVector<T> contiguity_inverse_frame_free(const ParamVector& alpha, const XMatrix& x, int i, const GMVector<T>& phi) {
  const Shape& s = alpha.shape();
  check_index(s, i);
  require_frame(s, phi);
  require_in_X(x);
  const ParamVector raised = alpha.raised(i);
  alpha.require_nonzero("inverse contiguity");
  raised.require_nonzero("inverse contiguity (raised parameters)");
  const MinorTable<T> minors(x);
  const auto& dot = enumerate_J_dot(s);
  const LabeledMatrix<T> c_raised_inv = inverse_C<T>(raised);
  GMVector<T> out = zero_vector<T>(dot);
  // Sum over the sets containing i and not 0; signs of the representatives cancel.
  for (const IndexSet& J : enumerate_pJq(i, 0, s)) {
    T num(0);
    for (std::size_t b = 0; b < dot.size(); ++b)
      if (!is_zero(phi[b])) num += phi[b] * pairing_scaled<T>(alpha, dot[b], J);
    if (is_zero(num)) continue;
    const IndexSet J0 = J.replaced(i, 0);
    const T coef = num / pairing_scaled<T>(alpha, J0, J) * minors(J0) / minors(J);
    std::vector<T> row;
    row.reserve(dot.size());
    for (const IndexSet& L : dot) row.push_back(pairing_scaled<T>(raised, J, L));
    const GMVector<T> v = GMVector<T>{dot, std::move(row)} * c_raised_inv;
    for (std::size_t b = 0; b < dot.size(); ++b) out[b] += coef * v[b];
  }
  return out;
}

#define HGM_INSTANTIATE_CONTIGUITY(T)                                                                         \
  template LabeledMatrix<T> D_matrix<T>(const MinorTable<T>&, int);                                           \
  template LabeledMatrix<T> D_matrix<T>(const XMatrix&, int);                                                 \
  template LabeledMatrix<T> contiguity_matrix<T>(const ParamVector&, const MinorTable<T>&, int);              \
  template LabeledMatrix<T> contiguity_matrix<T>(const ParamVector&, const XMatrix&, int);                    \
  template GMVector<T> apply_contiguity<T>(const ParamVector&, const MinorTable<T>&, int, const GMVector<T>&); \
  template GMVector<T> shift_up_series<T>(const ParamVector&, const MinorTable<T>&, int, const GMVector<T>&); \
  template GMVector<T> shift_up_series<T>(const ParamVector&, const XMatrix&, int, const GMVector<T>&);       \
  template GMVector<T> shift_down_series<T>(const ParamVector&, const MinorTable<T>&, int, const GMVector<T>&); \
  template GMVector<T> shift_down_series<T>(const ParamVector&, const XMatrix&, int, const GMVector<T>&);     \
  template GMVector<T> contiguity_inverse_frame_free<T>(const ParamVector&, const XMatrix&, int, const GMVector<T>&);

HGM_INSTANTIATE_CONTIGUITY(Rat)
HGM_INSTANTIATE_CONTIGUITY(double)

}  // namespace hgm
