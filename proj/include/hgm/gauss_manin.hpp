#pragma once

#include <unordered_map>
#include <vector>

#include "hgm/intersection.hpp"
#include "hgm/labeled.hpp"
#include "hgm/minors.hpp"
#include "hgm/param_vector.hpp"

namespace hgm {

// Row vector expressing φ⟨J⟩ in the frame 𝒥̇.
template <class T = Rat>
GMVector<T> v_J(const ParamVector& alpha, const IndexSet& J);

// Rank-one residue matrix attached to J (scaled pairing), over 𝒥̇ x 𝒥̇.
template <class T = Rat>
LabeledMatrix<T> M_J(const ParamVector& alpha, const IndexSet& J);

// The x-independent part of the connection for one α: every M_J with J in
// 𝒥°, built once. Read-only after construction.
template <class T = Rat>
class Connection {
 public:
  explicit Connection(ParamVector alpha);

  const ParamVector& alpha() const noexcept { return alpha_; }
  const LabeledMatrix<T>& M(const IndexSet& J) const;

  // dx_ij coefficient of the connection matrix.
  LabeledMatrix<T> psi(const MinorTable<T>& minors, int i, int j) const;

  // All coefficients, indexed (i-1)*n + (j-1). psi_all fans out over (i, j).
  std::vector<LabeledMatrix<T>> psi_all(const MinorTable<T>& minors) const;
  std::vector<LabeledMatrix<T>> psi_all_serial(const MinorTable<T>& minors) const;

 private:
  ParamVector alpha_;
  std::unordered_map<std::uint64_t, LabeledMatrix<T>> residues_;
};

template <class T = Rat>
LabeledMatrix<T> psi_coefficient(const ParamVector& alpha, const XMatrix& x, int i, int j);

// Connection applied to a coefficient row vector without forming Ψ, through
// the quotient α_J I(φ, φ⟨J⟩^∨) / I(φ⟨J⟩, φ⟨J⟩^∨). Equals phi·Ψ_ij. Throws
// PreconditionError when some contributing α_J vanishes.
template <class T = Rat>
GMVector<T> apply_connection_frame_free(const ParamVector& alpha, const XMatrix& x, const GMVector<T>& phi, int i,
                                        int j);

}  // namespace hgm
