#include "hgm/gauss_manin.hpp"

#include "hgm/errors.hpp"

namespace hgm {

namespace {

template <class T>
std::vector<T> pairing_row(const ParamVector& alpha, const IndexSet& J) {
  const auto& dot = enumerate_J_dot(alpha.shape());
  std::vector<T> row;
  row.reserve(dot.size());
  for (const IndexSet& L : dot) row.push_back(pairing_scaled<T>(alpha, J, L));
  return row;
}

template <class T>
T product_of(const ParamVector& alpha, const IndexSet& J) {
  Rat p = 1;
  for (int j : J) p *= alpha[j];
  return from_rat<T>(p);
}

// v_J with C^-1 supplied, so the connection can reuse one inverse.
template <class T>
GMVector<T> v_J_with(const ParamVector& alpha, const IndexSet& J, const LabeledMatrix<T>& c_inv) {
  GMVector<T> row{c_inv.row_labels, pairing_row<T>(alpha, J)};
  return row * c_inv;
}

template <class T>
LabeledMatrix<T> residue(const ParamVector& alpha, const IndexSet& J, const LabeledMatrix<T>& c,
                         const LabeledMatrix<T>& c_inv) {
  const GMVector<T> v = v_J_with(alpha, J, c_inv);
  const GMVector<T> w = c * v;  // C·tr(v_J); v_J^∨ = v_J
  const T scale = product_of<T>(alpha, J);
  LabeledMatrix<T> m(c.row_labels, c.col_labels);
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (is_zero(w[a])) continue;
    const T wa = scale * w[a];
    for (std::size_t b = 0; b < v.size(); ++b) m(a, b) = wa * v[b];
  }
  return m;
}

}  // namespace

template <class T>
GMVector<T> v_J(const ParamVector& alpha, const IndexSet& J) {
  return v_J_with(alpha, J, inverse_C<T>(alpha));
}

template <class T>
LabeledMatrix<T> M_J(const ParamVector& alpha, const IndexSet& J) {
  return residue(alpha, J, matrix_C<T>(alpha), inverse_C<T>(alpha));
}

template <class T>
Connection<T>::Connection(ParamVector alpha) : alpha_(std::move(alpha)) {
  alpha_.require_nonzero("connection");
  const LabeledMatrix<T> c = matrix_C<T>(alpha_);
  const LabeledMatrix<T> c_inv = inverse_C<T>(alpha_);
  const auto& circ = enumerate_J_circ(alpha_.shape());
  std::vector<LabeledMatrix<T>> built(circ.size());
#pragma omp parallel for schedule(dynamic) if (circ.size() * alpha_.shape().rank() > 256)
  for (std::size_t t = 0; t < circ.size(); ++t) built[t] = residue(alpha_, circ[t], c, c_inv);
  for (std::size_t t = 0; t < circ.size(); ++t) residues_.emplace(circ[t].mask(), std::move(built[t]));
}

template <class T>
const LabeledMatrix<T>& Connection<T>::M(const IndexSet& J) const {
  auto it = residues_.find(J.mask());
  if (it == residues_.end()) throw PreconditionError("no residue matrix for " + J.str() + " (not in the x-dependent family)");
  return it->second;
}

template <class T>
LabeledMatrix<T> Connection<T>::psi(const MinorTable<T>& minors, int i, int j) const {
  const Shape& s = alpha_.shape();
  if (!(minors.x().shape() == s)) throw PreconditionError("x and alpha have different shapes");
  const auto& dot = enumerate_J_dot(s);
  LabeledMatrix<T> out(dot, dot);
  for (const IndexSet& J : enumerate_J_circ(s)) {
    if (!J.contains(s.k() + j)) continue;
    const T d = minors.dlog(J, i, j);
    if (is_zero(d)) continue;
    const LabeledMatrix<T>& m = M(J);
    for (std::size_t a = 0; a < dot.size(); ++a)
      for (std::size_t b = 0; b < dot.size(); ++b)
        if (!is_zero(m(a, b))) out(a, b) += m(a, b) * d;
  }
  return out;
}

template <class T>
std::vector<LabeledMatrix<T>> Connection<T>::psi_all_serial(const MinorTable<T>& minors) const {
  const int k = alpha_.shape().k();
  const int n = alpha_.shape().n();
  std::vector<LabeledMatrix<T>> out;
  out.reserve(static_cast<std::size_t>(k * n));
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= n; ++j) out.push_back(psi(minors, i, j));
  return out;
}

template <class T>
std::vector<LabeledMatrix<T>> Connection<T>::psi_all(const MinorTable<T>& minors) const {
  const int k = alpha_.shape().k();
  const int n = alpha_.shape().n();
  std::vector<LabeledMatrix<T>> out(static_cast<std::size_t>(k * n));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < k * n; ++t) {
    try {
      out[static_cast<std::size_t>(t)] = psi(minors, t / n + 1, t % n + 1);
    } catch (...) {
#pragma omp critical(hgm_psi_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class T>
LabeledMatrix<T> psi_coefficient(const ParamVector& alpha, const XMatrix& x, int i, int j) {
  require_in_X(x);
  return Connection<T>(alpha).psi(MinorTable<T>(x), i, j);
}

template <class T>
GMVector<T> apply_connection_frame_free(const ParamVector& alpha, const XMatrix& x, const GMVector<T>& phi, int i,
                                        int j) {
  alpha.require_nonzero("frame-free connection");
  require_in_X(x);
  const Shape& s = alpha.shape();
  const auto& dot = enumerate_J_dot(s);
  if (phi.labels != dot) throw PreconditionError("frame-free connection expects a vector over the standard frame");
  const LabeledMatrix<T> c = matrix_C<T>(alpha);
  const LabeledMatrix<T> c_inv = inverse_C<T>(alpha);
  const MinorTable<T> minors(x);
  const GMVector<T> phi_c = phi * c;  // I(φ, φ⟨L⟩^∨) for every frame element L
  GMVector<T> out = zero_vector<T>(dot);
  for (const IndexSet& J : enumerate_J_circ(s)) {
    if (!J.contains(s.k() + j)) continue;
    if (sgn(alpha_J(alpha, J)) == 0)
      throw PreconditionError("frame-free connection undefined: alpha_J = 0 for J = " + J.str());
    const GMVector<T> v = v_J_with(alpha, J, c_inv);
    T num(0);  // I(φ, φ⟨J⟩^∨) = φ·C·tr(v_J)
    for (std::size_t b = 0; b < v.size(); ++b) num += phi_c[b] * v[b];
    if (is_zero(num)) continue;
    const T coef = from_rat<T>(alpha_J(alpha, J)) * num / pairing_scaled<T>(alpha, J, J) * minors.dlog(J, i, j);
    for (std::size_t b = 0; b < v.size(); ++b) out[b] += coef * v[b];
  }
  return out;
}

#define HGM_INSTANTIATE_GM(T)                                                                             \
  template GMVector<T> v_J<T>(const ParamVector&, const IndexSet&);                                       \
  template LabeledMatrix<T> M_J<T>(const ParamVector&, const IndexSet&);                                  \
  template class Connection<T>;                                                                           \
  template LabeledMatrix<T> psi_coefficient<T>(const ParamVector&, const XMatrix&, int, int);             \
  template GMVector<T> apply_connection_frame_free<T>(const ParamVector&, const XMatrix&, const GMVector<T>&, \
                                                      int, int);

HGM_INSTANTIATE_GM(Rat)
HGM_INSTANTIATE_GM(double)

}  // namespace hgm
