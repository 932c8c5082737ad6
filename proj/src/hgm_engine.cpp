#include "hgm/hgm_engine.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "hgm/errors.hpp"

namespace hgm {

void validate(const TableProblem& problem) {
  const auto& rows = problem.row_sums;
  const auto& cols = problem.col_sums;
  if (rows.empty() || cols.empty()) throw PreconditionError("row_sums and col_sums must be nonempty");
  if (problem.p.rows() != rows.size() || problem.p.cols() != cols.size())
    throw PreconditionError("probabilities must be a " + std::to_string(rows.size()) + " x " +
                            std::to_string(cols.size()) + " matrix");
  for (long b : rows)
    if (b < 0) throw PreconditionError("negative row sum");
  for (long b : cols)
    if (b < 0) throw PreconditionError("negative column sum");
  if (std::accumulate(rows.begin(), rows.end(), 0L) != std::accumulate(cols.begin(), cols.end(), 0L))
    throw PreconditionError("row and column totals differ");
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const int s = sgn(problem.p(i, j));
      if (s < 0) throw PreconditionError("negative probability at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (s == 0 && rows[i] > 0 && cols[j] > 0)
        throw PreconditionError("zero probability at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") in a row and column with nonzero sums");
    }
}

MappedProblem map_problem(const TableProblem& problem) {
  validate(problem);
  const std::size_t r1 = problem.row_sums.size();
  const std::size_t r2 = problem.col_sums.size();
  if (r1 < 2 || r2 < 2) throw PreconditionError("the parameter mapping needs at least two rows and two columns");
  for (long b : problem.row_sums)
    if (b == 0) throw PreconditionError("zero row sum; strip it before mapping");
  for (long b : problem.col_sums)
    if (b == 0) throw PreconditionError("zero column sum; strip it before mapping");
  const Shape shape(static_cast<int>(r1) - 1, static_cast<int>(r2) - 1);
  const int k = shape.k();
  const int n = shape.n();
  const auto& b1 = problem.row_sums;
  const auto& b2 = problem.col_sums;
  const auto& p = problem.p;

  std::vector<long> a;
  a.push_back(-b1[r1 - 1]);
  for (std::size_t i = 0; i + 1 < r1; ++i) a.push_back(-b1[i]);
  for (std::size_t j = 1; j < r2; ++j) a.push_back(b2[j]);
  a.push_back(b2[0]);
  ParamVector alpha(shape, a);

  Matrix<Rat> x(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = p(i, j + 1) * p(r1 - 1, 0) / (p(i, 0) * p(r1 - 1, j + 1));

  Matrix<long> u0(r1, r2);
  long lower = 0;
  for (int i = 1; i <= k; ++i) {
    u0(i - 1, 0) = b1[i - 1];
    lower += a[i];
  }
  u0(r1 - 1, 0) = a[shape.last()] + lower;
  for (int j = 1; j <= n; ++j) u0(r1 - 1, j) = a[k + j];

  Rat prefactor = 1;
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < r2; ++j)
      if (u0(i, j) != 0) prefactor *= power(p(i, j), u0(i, j));
  return {std::move(alpha), XMatrix(shape, std::move(x)), std::move(u0), prefactor};
}

ParamVector path_start(const Shape& shape) {
  const int k = shape.k();
  const int n = shape.n();
  std::vector<long> a;
  a.push_back(-n);  // 1 - r2
  for (int i = 0; i < k; ++i) a.push_back(-1);
  for (int j = 0; j < n; ++j) a.push_back(1);
  a.push_back(k);  // r1 - 1
  return ParamVector(shape, a);
}

std::vector<PathStep> build_path(const ParamVector& target) {
  const Shape& s = target.shape();
  const int k = s.k();
  const int n = s.n();
  if (!target.is_integral()) throw PreconditionError("path target must be integral: " + target.str());
  for (int i = 0; i <= k; ++i)
    if (sgn(target[i]) >= 0) throw PreconditionError("path target needs alpha_" + std::to_string(i) + " < 0: " + target.str());
  for (int j = k + 1; j <= s.last(); ++j)
    if (sgn(target[j]) <= 0) throw PreconditionError("path target needs alpha_" + std::to_string(j) + " > 0: " + target.str());

  std::vector<PathStep> path;
  ParamVector cur = path_start(s);
  auto step = [&](int index, int direction) {
    ParamVector next = cur.shifted(index, direction);
    if (!next.all_nonzero())
      throw PreconditionError("path step " + std::to_string(path.size() + 1) + " (" + (direction > 0 ? "+" : "-") +
                              "delta_" + std::to_string(index) + ") reaches " + next.str() +
                              ", which has a zero entry");
    path.push_back({index, direction, next});
    cur = std::move(next);
  };
  for (int j = 1; j <= n; ++j)
    while (cur[k + j] < target[k + j]) step(k + j, +1);
  const int last = s.last();
  if (cur[last] < target[last]) {
    while (cur[last] < target[last]) step(last, +1);
  } else {
    while (cur[last] > target[last]) step(last, -1);
  }
  for (int i = 1; i <= k; ++i)
    while (cur[i] > target[i]) step(i, -1);
  if (!(cur == target)) throw InternalError("path ended at " + cur.str() + " instead of " + target.str());
  return path;
}

namespace {

Rat to_rat(const Rat& v) { return v; }
Rat to_rat(double v) {
  if (!std::isfinite(v)) throw InternalError("non-finite value in the binary64 backend");
  return Rat(v);
}

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

// Position in 𝒥̇ of {0..k} - {a} + {k+b}.
std::size_t pair_position(const Shape& s, int a, int b) {
  std::vector<int> e;
  for (int c = 0; c <= s.k(); ++c)
    if (c != a) e.push_back(c);
  e.push_back(s.k() + b);
  const int pos = position_in_J_dot(s, IndexSet(e));
  if (pos < 0) throw InternalError("pair entry outside the frame");
  return static_cast<std::size_t>(pos);
}

// Adds c·ℓ_ab to column `col` of a matrix laid out as (i*r2 + j) rows, or to
// a plain r1 x r2 matrix when col < 0. a, b are 1-based; cells are 0-based.
template <class T>
void add_lattice(Matrix<T>& m, std::size_t r1, std::size_t r2, int a, int b, const T& c, long col) {
  auto at = [&](std::size_t i, std::size_t j) -> T& {
    return col < 0 ? m(i, j) : m(i * r2 + j, static_cast<std::size_t>(col));
  };
  at(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b)) += c;
  at(r1 - 1, 0) += c;
  at(static_cast<std::size_t>(a - 1), 0) -= c;
  at(r1 - 1, static_cast<std::size_t>(b)) -= c;
}

template <class T>
bool close(const Rat& value, const Rat& reference, bool relative) {
  if constexpr (ScalarTraits<T>::exact) {
    return value == reference;
  } else {
    Rat diff = abs(value - reference);
    Rat scale = abs(reference);
    // Expectations are counts, so below one the tolerance turns absolute.
    if (!relative && scale < 1) scale = 1;
    return diff <= scale * Rat(1, 1000000000);
  }
}

Matrix<long> single_table(const TableProblem& reduced) {
  const std::size_t r1 = reduced.row_sums.size();
  const std::size_t r2 = reduced.col_sums.size();
  Matrix<long> u(r1, r2);
  if (r1 == 1)
    for (std::size_t j = 0; j < r2; ++j) u(0, j) = reduced.col_sums[j];
  else
    for (std::size_t i = 0; i < r1; ++i) u(i, 0) = reduced.row_sums[i];
  return u;
}

}  // namespace

template <class T>
Matrix<T> expectations(const GMVector<T>& sbar, const ParamVector& alpha, const Matrix<long>& u0) {
  const Shape& s = alpha.shape();
  const int k = s.k();
  const int n = s.n();
  const std::size_t r1 = static_cast<std::size_t>(k + 1);
  const std::size_t r2 = static_cast<std::size_t>(n + 1);
  if (u0.rows() != r1 || u0.cols() != r2) throw PreconditionError("base table does not match the shape");
  const T& S = sbar[0];
  if (is_zero(S)) throw PreconditionError("series value is zero; expectations undefined");
  Matrix<T> E(r1, r2);
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < r2; ++j) E(i, j) = from_int<T>(u0(i, j));
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= n; ++b) {
      const T c = from_int<T>(sign_pow(k + a)) * from_rat<T>(alpha[k + b]) * sbar[pair_position(s, a, b)] / S;
      add_lattice(E, r1, r2, a, b, c, -1);
    }
  return E;
}

template <class T>
Matrix<T> expectation_gradients(const GMVector<T>& sbar, const std::vector<LabeledMatrix<T>>& psi,
                                const ParamVector& alpha, const XMatrix& x, const Matrix<long>& u0) {
  const Shape& s = alpha.shape();
  const int k = s.k();
  const int n = s.n();
  const std::size_t r1 = static_cast<std::size_t>(k + 1);
  const std::size_t r2 = static_cast<std::size_t>(n + 1);
  if (u0.rows() != r1 || u0.cols() != r2) throw PreconditionError("base table does not match the shape");
  if (psi.size() != static_cast<std::size_t>(k * n)) throw PreconditionError("expected one connection coefficient per variable");
  const T& S = sbar[0];
  if (is_zero(S)) throw PreconditionError("series value is zero; gradients undefined");
  const T S2 = S * S;
  Matrix<T> G(r1 * r2, static_cast<std::size_t>(k * n));
  for (int ip = 1; ip <= k; ++ip)
    for (int jp = 1; jp <= n; ++jp) {
      const long col = (ip - 1) * n + (jp - 1);
      if (sgn(x(ip, jp)) == 0) throw PreconditionError("gradient needs nonzero x entries");
      const GMVector<T> dS = psi[static_cast<std::size_t>(col)] * sbar;
      // (-1)^{k-i'} α_{k+j'} / x_{i'j'} · S_{i'j'} is ∂S/∂x_{i'j'}.
      const T dS_dx = from_int<T>(sign_pow(k - ip)) * from_rat<T>(Rat(alpha[k + jp] / x(ip, jp))) *
                      sbar[pair_position(s, ip, jp)];
      for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= n; ++b) {
          const std::size_t pos = pair_position(s, a, b);
          const T c = from_int<T>(sign_pow(k + a)) * from_rat<T>(alpha[k + b]) * (S * dS[pos] - dS_dx * sbar[pos]) / S2;
          add_lattice(G, r1, r2, a, b, c, col);
        }
    }
  return G;
}

template <class T>
EvalResult<T> evaluate(const TableProblem& problem, const EvalOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  validate(problem);
  EvalResult<T> result;
  const std::size_t R1 = problem.row_sums.size();
  const std::size_t R2 = problem.col_sums.size();
  for (std::size_t i = 0; i < R1; ++i)
    if (problem.row_sums[i] > 0) result.kept_rows.push_back(i);
  for (std::size_t j = 0; j < R2; ++j)
    if (problem.col_sums[j] > 0) result.kept_cols.push_back(j);

  TableProblem reduced;
  for (std::size_t i : result.kept_rows) reduced.row_sums.push_back(problem.row_sums[i]);
  for (std::size_t j : result.kept_cols) reduced.col_sums.push_back(problem.col_sums[j]);
  const std::size_t r1 = reduced.row_sums.size();
  const std::size_t r2 = reduced.col_sums.size();
  reduced.p = Matrix<Rat>(r1, r2);
  for (std::size_t a = 0; a < r1; ++a)
    for (std::size_t b = 0; b < r2; ++b) reduced.p(a, b) = problem.p(result.kept_rows[a], result.kept_cols[b]);

  Matrix<T> E_reduced(r1, r2);
  result.expectations = Matrix<T>(R1, R2);

  if (r1 <= 1 || r2 <= 1) {
    // At most one table fits the margins.
    result.Z = 1;
    if (r1 > 0 && r2 > 0) {
      const Matrix<long> u = single_table(reduced);
      for (std::size_t a = 0; a < r1; ++a)
        for (std::size_t b = 0; b < r2; ++b) {
          result.Z *= power(reduced.p(a, b), u(a, b)) / Rat(factorial(u(a, b)));
          E_reduced(a, b) = from_int<T>(u(a, b));
        }
    }
    result.gradients = Matrix<T>(R1 * R2, 0);
  } else {
    MappedProblem mapped = map_problem(reduced);
    require_in_X(mapped.x);
    const Shape& s = mapped.alpha.shape();
    result.path = build_path(mapped.alpha);
    const MinorTable<T> minors(mapped.x);

    ParamVector cur = path_start(s);
    GMVector<T> sbar = gm_vector_S<T>(cur, mapped.x);
    long exp2 = 0;
    for (const PathStep& st : result.path) {
      sbar = st.direction > 0 ? shift_up_series(cur, minors, st.index, sbar)
                              : shift_down_series(cur, minors, st.index, sbar);
      cur = st.alpha_after;
      if constexpr (!ScalarTraits<T>::exact) {
        double top = 0;
        for (const T& v : sbar.values) top = std::max(top, ScalarTraits<T>::magnitude(v));
        if (!(top > 0) || !std::isfinite(top)) throw InternalError("binary64 path lost all precision");
        int e = 0;
        std::frexp(top, &e);
        for (T& v : sbar.values) v = std::ldexp(v, -e);
        exp2 += e;
      }
    }
    result.Z = mapped.prefactor * to_rat(sbar[0]) * power(Rat(2), exp2);
    E_reduced = expectations(sbar, mapped.alpha, mapped.u0);

    const Connection<T> connection(mapped.alpha);
    std::vector<LabeledMatrix<T>> psi = connection.psi_all(minors);
    const Matrix<T> G = expectation_gradients(sbar, psi, mapped.alpha, mapped.x, mapped.u0);
    result.gradients = Matrix<T>(R1 * R2, G.cols());
    for (std::size_t a = 0; a < r1; ++a)
      for (std::size_t b = 0; b < r2; ++b)
        for (std::size_t c = 0; c < G.cols(); ++c)
          result.gradients(result.kept_rows[a] * R2 + result.kept_cols[b], c) = G(a * r2 + b, c);

    if (options.keep_psi) result.psi = std::move(psi);
    if (options.contiguity_index) result.contiguity = contiguity_matrix(mapped.alpha, minors, *options.contiguity_index);
    result.sbar = std::move(sbar);
    result.sbar_exp2 = exp2;
    result.alpha = mapped.alpha;
    result.x = mapped.x;
  }

  for (std::size_t a = 0; a < r1; ++a)
    for (std::size_t b = 0; b < r2; ++b) result.expectations(result.kept_rows[a], result.kept_cols[b]) = E_reduced(a, b);

  if (options.oracle && r1 > 0 && r2 > 0) {
    OracleSums sums = oracle_sums(reduced.row_sums, reduced.col_sums, reduced.p);
    OracleCheck check{sums.Z, Matrix<Rat>(R1, R2), true};
    for (std::size_t a = 0; a < r1; ++a)
      for (std::size_t b = 0; b < r2; ++b) check.E(result.kept_rows[a], result.kept_cols[b]) = sums.E(a, b);
    check.match = close<T>(result.Z, check.Z, true);
    for (std::size_t i = 0; i < R1 && check.match; ++i)
      for (std::size_t j = 0; j < R2 && check.match; ++j)
        check.match = close<T>(to_rat(result.expectations(i, j)), check.E(i, j), false);
    result.oracle = std::move(check);
    if (!result.oracle->match)
      throw InternalError("oracle mismatch: pipeline Z = " + to_exact_string(result.Z) +
                          ", enumeration Z = " + to_exact_string(result.oracle->Z));
  }

  result.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

#define HGM_INSTANTIATE_ENGINE(T)                                                                          \
  template EvalResult<T> evaluate<T>(const TableProblem&, const EvalOptions&);                             \
  template Matrix<T> expectations<T>(const GMVector<T>&, const ParamVector&, const Matrix<long>&);          \
  template Matrix<T> expectation_gradients<T>(const GMVector<T>&, const std::vector<LabeledMatrix<T>>&,    \
                                              const ParamVector&, const XMatrix&, const Matrix<long>&);

HGM_INSTANTIATE_ENGINE(Rat)
HGM_INSTANTIATE_ENGINE(double)

}  // namespace hgm
