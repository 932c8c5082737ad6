#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hgm/contiguity.hpp"
#include "hgm/gauss_manin.hpp"
#include "hgm/labeled.hpp"
#include "hgm/minors.hpp"
#include "hgm/param_vector.hpp"
#include "hgm/series_oracle.hpp"

namespace hgm {

// Two-way table with fixed margins and cell probabilities.
struct TableProblem {
  std::vector<long> row_sums;
  std::vector<long> col_sums;
  Matrix<Rat> p;
};

// Throws PreconditionError on mismatched sizes or totals, negative margins, or
// nonpositive probabilities in cells whose row and column are both nonzero.
void validate(const TableProblem& problem);

struct MappedProblem {
  ParamVector alpha;
  XMatrix x;
  Matrix<long> u0;  // the base table, r1 x r2
  Rat prefactor;    // p^u0
};

// Requires every margin positive and r1, r2 >= 2.
MappedProblem map_problem(const TableProblem& problem);

// Starting parameters (1-r2, -1..-1, 1..1, r1-1) for a shape.
ParamVector path_start(const Shape& shape);

struct PathStep {
  int index;
  int direction;  // +1 or -1
  ParamVector alpha_after;
};

// Raise the middle indices, move the last index, then lower indices 1..k.
// Every intermediate vector is checked for zero entries.
std::vector<PathStep> build_path(const ParamVector& target);

enum class Backend { exact, binary64 };

struct EvalOptions {
  bool oracle = false;       // cross-check Z and E by enumeration
  bool keep_psi = false;     // return the connection coefficients
  std::optional<int> contiguity_index;  // return c_i at the target parameters
};

struct OracleCheck {
  Rat Z;
  Matrix<Rat> E;
  bool match = false;
};

template <class T>
struct EvalResult {
  // Z as a rational. Exact for the exact backend; for binary64 it is the
  // exact value of the rounded computation.
  Rat Z;
  Matrix<T> expectations;  // r1 x r2 of the original problem
  // Row i*r2 + j, column (i'-1)*n + (j'-1): ∂E[U_ij]/∂x_i'j' of the reduced
  // problem. Zero columns when the reduced problem has a single table.
  Matrix<T> gradients;

  // Diagnostics.
  std::vector<std::size_t> kept_rows, kept_cols;
  std::optional<ParamVector> alpha;
  std::optional<XMatrix> x;
  std::vector<PathStep> path;
  GMVector<T> sbar;  // at the target, scaled by 2^sbar_exp2
  long sbar_exp2 = 0;
  double millis = 0;
  std::optional<OracleCheck> oracle;
  std::vector<LabeledMatrix<T>> psi;
  std::optional<LabeledMatrix<T>> contiguity;
};

template <class T = Rat>
EvalResult<T> evaluate(const TableProblem& problem, const EvalOptions& options = {});

// Expectation matrix of the mapped problem from the G-M vector at the target.
template <class T = Rat>
Matrix<T> expectations(const GMVector<T>& sbar, const ParamVector& alpha, const Matrix<long>& u0);

// ∂E[U_ij]/∂x_i'j', laid out as in EvalResult::gradients. psi is indexed
// (i'-1)*n + (j'-1).
template <class T = Rat>
Matrix<T> expectation_gradients(const GMVector<T>& sbar, const std::vector<LabeledMatrix<T>>& psi,
                                const ParamVector& alpha, const XMatrix& x, const Matrix<long>& u0);

}  // namespace hgm
