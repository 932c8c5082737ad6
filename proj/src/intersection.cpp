#include "hgm/intersection.hpp"

#include "hgm/errors.hpp"

namespace hgm {

std::vector<SignedLabel> signed_labels(const std::vector<IndexSet>& sets) {
  std::vector<SignedLabel> out;
  out.reserve(sets.size());
  for (const IndexSet& s : sets) out.push_back({s, 1});
  return out;
}

std::vector<SignedLabel> signed_labels(const std::vector<AlignedLabel>& aligned) {
  std::vector<SignedLabel> out;
  out.reserve(aligned.size());
  for (const AlignedLabel& a : aligned) out.push_back({a.set, a.sign});
  return out;
}

namespace {

Rat product_over(const ParamVector& alpha, std::uint64_t mask) {
  Rat prod = 1;
  for (int j = 0; j < 64 && (mask >> j); ++j) {
    if (!((mask >> j) & 1u)) continue;
    if (sgn(alpha[j]) == 0)
      throw PreconditionError("intersection number needs alpha_" + std::to_string(j) + " != 0 in " + alpha.str());
    prod *= alpha[j];
  }
  return prod;
}

Rat pairing_exact(const ParamVector& alpha, const IndexSet& J, const IndexSet& Jp) {
  if (J.size() != Jp.size()) throw PreconditionError("pairing of sets with different sizes");
  if (J == Jp) return alpha_J(alpha, J) / product_over(alpha, J.mask());
  const std::uint64_t common = J.mask() & Jp.mask();
  if (static_cast<std::size_t>(__builtin_popcountll(common)) + 1 != J.size()) return 0;
  const int out = __builtin_ctzll(J.mask() & ~common);
  const int in = __builtin_ctzll(Jp.mask() & ~common);
  const int p = J.position(out);
  const int q = Jp.position(in);
  Rat v = 1 / product_over(alpha, common);
  if ((p + q) % 2) v = -v;
  return v;
}

std::vector<SignedLabel> canonical(int p, int q, const Shape& shape) {
  return signed_labels(enumerate_pJq(p, q, shape));
}

void require_family(const std::vector<SignedLabel>& labels, int p, int q) {
  for (const SignedLabel& l : labels)
    if (!l.set.contains(p) || l.set.contains(q))
      throw PreconditionError("label " + l.set.str() + " does not contain " + std::to_string(p) +
                              " while omitting " + std::to_string(q));
}

std::vector<IndexSet> sets_of(const std::vector<SignedLabel>& labels) {
  std::vector<IndexSet> out;
  out.reserve(labels.size());
  for (const SignedLabel& l : labels) out.push_back(l.set);
  return out;
}

}  // namespace

template <class T>
T pairing_scaled(const ParamVector& alpha, const IndexSet& J, const IndexSet& Jp) {
  return from_rat<T>(pairing_exact(alpha, J, Jp));
}

template <class T>
LabeledMatrix<T> pairing_matrix(const ParamVector& alpha, const std::vector<SignedLabel>& rows,
                                const std::vector<SignedLabel>& cols) {
  LabeledMatrix<T> m(sets_of(rows), sets_of(cols));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) {
      Rat v = pairing_exact(alpha, rows[a].set, cols[b].set);
      if (rows[a].sign * cols[b].sign < 0) v = -v;
      m(a, b) = from_rat<T>(v);
    }
  return m;
}

template <class T>
LabeledMatrix<T> matrix_Cpq(const ParamVector& alpha, int p1, int q1, int p2, int q2) {
  const Shape& s = alpha.shape();
  return pairing_matrix<T>(alpha, canonical(p1, q1, s), canonical(p2, q2, s));
}

template <class T>
LabeledMatrix<T> matrix_C(const ParamVector& alpha) {
  const auto dot = signed_labels(enumerate_J_dot(alpha.shape()));
  return pairing_matrix<T>(alpha, dot, dot);
}

template <class T>
LabeledMatrix<T> matrix_P(const ParamVector& alpha, int i) {
  const Shape& s = alpha.shape();
  return pairing_matrix<T>(alpha, signed_labels(aligned_0Ji(i, s)), signed_labels(enumerate_J_dot(s)));
}

template <class T>
LabeledMatrix<T> matrix_Q(const ParamVector& alpha, int i) {
  const Shape& s = alpha.shape();
  return pairing_matrix<T>(alpha, signed_labels(aligned_iJ0(i, s)), signed_labels(enumerate_J_dot(s)));
}

template <class T>
LabeledMatrix<T> inverse_Cpq(const ParamVector& alpha, int p1, int q1, int p2, int q2,
                             const std::vector<SignedLabel>& rows, const std::vector<SignedLabel>& cols) {
  if (p1 == q1 || p2 == q2) throw PreconditionError("inverse_Cpq requires p != q");
  alpha.require_nonzero("inverse_Cpq");
  require_family(rows, p1, q1);
  require_family(cols, p2, q2);
  LabeledMatrix<T> inv(sets_of(cols), sets_of(rows));
  for (std::size_t a = 0; a < cols.size(); ++a) {
    const IndexSet& J = cols[a].set;
    const IndexSet Jstar = J.replaced(p2, q2);
    const Rat left = 1 / pairing_exact(alpha, Jstar, J);
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const IndexSet& I = rows[b].set;
      const IndexSet Istar = I.replaced(p1, q1);
      const Rat middle = pairing_exact(alpha, Jstar, Istar);
      if (sgn(middle) == 0) continue;
      Rat v = left * middle / pairing_exact(alpha, I, Istar);
      if (cols[a].sign * rows[b].sign < 0) v = -v;
      inv(a, b) = from_rat<T>(v);
    }
  }
  return inv;
}

template <class T>
LabeledMatrix<T> inverse_Cpq(const ParamVector& alpha, int p1, int q1, int p2, int q2) {
  const Shape& s = alpha.shape();
  return inverse_Cpq<T>(alpha, p1, q1, p2, q2, canonical(p1, q1, s), canonical(p2, q2, s));
}

template <class T>
LabeledMatrix<T> inverse_C(const ParamVector& alpha) {
  const Shape& s = alpha.shape();
  const auto dot = signed_labels(enumerate_J_dot(s));
  return inverse_Cpq<T>(alpha, 0, s.last(), 0, s.last(), dot, dot);
}

template <class T>
LabeledMatrix<T> inverse_P(const ParamVector& alpha, int i) {
  const Shape& s = alpha.shape();
  return inverse_Cpq<T>(alpha, i, 0, 0, s.last(), signed_labels(aligned_0Ji(i, s)),
                        signed_labels(enumerate_J_dot(s)));
}

template <class T>
LabeledMatrix<T> inverse_Q(const ParamVector& alpha, int i) {
  const Shape& s = alpha.shape();
  return inverse_Cpq<T>(alpha, 0, i, 0, s.last(), signed_labels(aligned_iJ0(i, s)),
                        signed_labels(enumerate_J_dot(s)));
}

#define HGM_INSTANTIATE_INTERSECTION(T)                                                                   \
  template T pairing_scaled<T>(const ParamVector&, const IndexSet&, const IndexSet&);                     \
  template LabeledMatrix<T> pairing_matrix<T>(const ParamVector&, const std::vector<SignedLabel>&,        \
                                              const std::vector<SignedLabel>&);                           \
  template LabeledMatrix<T> matrix_Cpq<T>(const ParamVector&, int, int, int, int);                        \
  template LabeledMatrix<T> matrix_C<T>(const ParamVector&);                                              \
  template LabeledMatrix<T> matrix_P<T>(const ParamVector&, int);                                         \
  template LabeledMatrix<T> matrix_Q<T>(const ParamVector&, int);                                         \
  template LabeledMatrix<T> inverse_Cpq<T>(const ParamVector&, int, int, int, int);                       \
  template LabeledMatrix<T> inverse_Cpq<T>(const ParamVector&, int, int, int, int,                        \
                                           const std::vector<SignedLabel>&, const std::vector<SignedLabel>&); \
  template LabeledMatrix<T> inverse_C<T>(const ParamVector&);                                             \
  template LabeledMatrix<T> inverse_P<T>(const ParamVector&, int);                                        \
  template LabeledMatrix<T> inverse_Q<T>(const ParamVector&, int);

HGM_INSTANTIATE_INTERSECTION(Rat)
HGM_INSTANTIATE_INTERSECTION(double)

}  // namespace hgm
