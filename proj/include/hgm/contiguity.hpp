#pragma once

#include "hgm/intersection.hpp"
#include "hgm/labeled.hpp"
#include "hgm/minors.hpp"
#include "hgm/param_vector.hpp"

namespace hgm {

// Diagonal factor: rows are the sets of aligned_0Ji(i), columns those of
// aligned_iJ0(i); entry l is minor(aligned_0Ji tuple l) / minor(aligned_iJ0 tuple l).
template <class T = Rat>
LabeledMatrix<T> D_matrix(const MinorTable<T>& minors, int i);
template <class T = Rat>
LabeledMatrix<T> D_matrix(const XMatrix& x, int i);

// c_i(α;x) = C(α^(i)) P_i(α^(i))^-1 D_i(x) Q_i(α) C(α)^-1 over 𝒥̇ x 𝒥̇, so that
// S̄(α^(i)) is proportional to c_i(α) S̄(α).
template <class T = Rat>
LabeledMatrix<T> contiguity_matrix(const ParamVector& alpha, const MinorTable<T>& minors, int i);
template <class T = Rat>
LabeledMatrix<T> contiguity_matrix(const ParamVector& alpha, const XMatrix& x, int i);

// c_i(α;x)·v evaluated factor by factor, without forming c_i.
template <class T = Rat>
GMVector<T> apply_contiguity(const ParamVector& alpha, const MinorTable<T>& minors, int i, const GMVector<T>& v);

// S̄(α + δ_i) from S̄(α). Upper indices carry the factor 1/(α_i + 1).
template <class T = Rat>
GMVector<T> shift_up_series(const ParamVector& alpha, const MinorTable<T>& minors, int i, const GMVector<T>& sbar);
template <class T = Rat>
GMVector<T> shift_up_series(const ParamVector& alpha, const XMatrix& x, int i, const GMVector<T>& sbar);

// S̄(α - δ_i) from S̄(α) by solving against c_i(α - δ_i). Upper indices carry
// the factor α_i.
template <class T = Rat>
GMVector<T> shift_down_series(const ParamVector& alpha, const MinorTable<T>& minors, int i,
                              const GMVector<T>& sbar);
template <class T = Rat>
GMVector<T> shift_down_series(const ParamVector& alpha, const XMatrix& x, int i, const GMVector<T>& sbar);

// Coefficients (frame at α^(i)) of the class [φ / L_i], given the coefficient
// row of φ in the frame at α. Equals phi·c_i(α;x)^-1.
template <class T = Rat>
GMVector<T> contiguity_inverse_frame_free(const ParamVector& alpha, const XMatrix& x, int i, const GMVector<T>& phi);

}  // namespace hgm
