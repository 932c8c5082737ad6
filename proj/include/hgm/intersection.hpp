#pragma once

#include <vector>

#include "hgm/index_combinatorics.hpp"
#include "hgm/labeled.hpp"
#include "hgm/param_vector.hpp"

namespace hgm {

// A row or column label of an intersection matrix. The sign is the parity of
// the defining tuple relative to the sorted set and is multiplied into the
// matrix entries; matrices themselves store sorted sets only.
struct SignedLabel {
  IndexSet set;
  int sign = 1;
};

std::vector<SignedLabel> signed_labels(const std::vector<IndexSet>& sets);
std::vector<SignedLabel> signed_labels(const std::vector<AlignedLabel>& aligned);

// Intersection number I(φ⟨J⟩, φ⟨J'⟩) with the overall (2π√-1)^k dropped:
//   α_J / ∏_{j∈J} α_j                 if J = J',
//   (-1)^{p+q} / ∏_{j∈J∩J'} α_j       if J - {j_p} = J' - {j'_q},
//   0                                 otherwise.
template <class T = Rat>
T pairing_scaled(const ParamVector& alpha, const IndexSet& J, const IndexSet& Jp);

// Pairing matrix over explicit label lists.
template <class T = Rat>
LabeledMatrix<T> pairing_matrix(const ParamVector& alpha, const std::vector<SignedLabel>& rows,
                                const std::vector<SignedLabel>& cols);

// C_{(p1q1)(p2q2)}: rows contain p1 and not q1, columns contain p2 and not q2,
// each in the canonical enumerate_pJq order.
template <class T = Rat>
LabeledMatrix<T> matrix_Cpq(const ParamVector& alpha, int p1, int q1, int p2, int q2);

// C(α) over 𝒥̇ x 𝒥̇.
template <class T = Rat>
LabeledMatrix<T> matrix_C(const ParamVector& alpha);

// Rows aligned_0Ji(i) (contain i, not 0), columns 𝒥̇.
template <class T = Rat>
LabeledMatrix<T> matrix_P(const ParamVector& alpha, int i);

// Rows aligned_iJ0(i) (contain 0, not i), columns 𝒥̇.
template <class T = Rat>
LabeledMatrix<T> matrix_Q(const ParamVector& alpha, int i);

// Closed-form inverse of C_{(p1q1)(p2q2)} as (monomial)^-1 · C_{(q2p2)(q1p1)} ·
// (monomial)^-1. Rows are the original column labels and vice versa.
template <class T = Rat>
LabeledMatrix<T> inverse_Cpq(const ParamVector& alpha, int p1, int q1, int p2, int q2);

// Same, for a matrix whose labels come in a custom (signed) order.
template <class T = Rat>
LabeledMatrix<T> inverse_Cpq(const ParamVector& alpha, int p1, int q1, int p2, int q2,
                             const std::vector<SignedLabel>& rows, const std::vector<SignedLabel>& cols);

template <class T = Rat>
LabeledMatrix<T> inverse_C(const ParamVector& alpha);

template <class T = Rat>
LabeledMatrix<T> inverse_P(const ParamVector& alpha, int i);

template <class T = Rat>
LabeledMatrix<T> inverse_Q(const ParamVector& alpha, int i);

}  // namespace hgm
