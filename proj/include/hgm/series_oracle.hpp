#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hgm/labeled.hpp"
#include "hgm/matrix.hpp"
#include "hgm/minors.hpp"
#include "hgm/param_vector.hpp"

namespace hgm {

// Throws unless α is integral with α_1..α_k < 0 and α_{k+1}..α_{k+n} > 0,
// the regime in which the series is a polynomial.
void require_polynomial_regime(const ParamVector& alpha);

// Exact value of the terminating series Σ_m x^m / Γ_m(α).
Rat series_S(const ParamVector& alpha, const XMatrix& x);

// Exact mixed partial ∂^l S / ∂x_{i1 j1} ... ∂x_{il jl}. Pairs may repeat.
Rat series_partial(const ParamVector& alpha, const XMatrix& x, const std::vector<std::pair<int, int>>& pairs);

// The derivative pairs used for the frame element J in the G-M vector: rows
// {1..k} - J ascending, matched with the middle columns of J ascending.
std::vector<std::pair<int, int>> gm_pairs(const Shape& shape, const IndexSet& J);

// G-M vector of S over 𝒥̇: minor(J) / ∏_{c∈J, k<c≤k+n} α_c times the mixed partial.
template <class T = Rat>
GMVector<T> gm_vector_S(const ParamVector& alpha, const XMatrix& x);

using Table = Matrix<long>;

// Every nonnegative integer table with the given margins, each once, in
// row-major lexicographic order. Mismatched totals throw; negative margins
// yield nothing.
void for_each_table(const std::vector<long>& row_sums, const std::vector<long>& col_sums,
                    const std::function<void(const Table&)>& visit);
std::vector<Table> enumerate_tables(const std::vector<long>& row_sums, const std::vector<long>& col_sums);
std::size_t count_tables(const std::vector<long>& row_sums, const std::vector<long>& col_sums);

struct OracleSums {
  Rat Z;
  Matrix<Rat> E;  // expectations E[U_ij]
};

// Brute force over all tables: Z = Σ_u p^u/u!, E[U_ij] = Σ_u u_ij p^u/u! / Z.
OracleSums oracle_sums(const std::vector<long>& row_sums, const std::vector<long>& col_sums, const Matrix<Rat>& p);
OracleSums oracle_sums_serial(const std::vector<long>& row_sums, const std::vector<long>& col_sums,
                              const Matrix<Rat>& p);

Rat oracle_Z(const std::vector<long>& row_sums, const std::vector<long>& col_sums, const Matrix<Rat>& p);
Matrix<Rat> oracle_E(const std::vector<long>& row_sums, const std::vector<long>& col_sums, const Matrix<Rat>& p);

}  // namespace hgm
