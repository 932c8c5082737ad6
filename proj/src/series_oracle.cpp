#include "hgm/series_oracle.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "hgm/errors.hpp"

namespace hgm {

void require_polynomial_regime(const ParamVector& alpha) {
  const Shape& s = alpha.shape();
  if (!alpha.is_integral()) throw PreconditionError("series needs integral parameters, got " + alpha.str());
  for (int i = 1; i <= s.k(); ++i)
    if (sgn(alpha[i]) >= 0) throw PreconditionError("series needs alpha_" + std::to_string(i) + " < 0 in " + alpha.str());
  for (int j = 1; j <= s.n(); ++j)
    if (sgn(alpha[s.k() + j]) <= 0)
      throw PreconditionError("series needs alpha_" + std::to_string(s.k() + j) + " > 0 in " + alpha.str());
}

namespace {

long to_long(const Rat& q) { return q.get_num().get_si(); }

// Visits every m with row sums ≤ row_cap and column sums ≤ col_cap.
void for_each_exponent(int k, int n, std::vector<long> row_cap, std::vector<long> col_cap,
                       const std::function<void(const Matrix<long>&)>& visit) {
  Matrix<long> m(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
  std::function<void(int)> rec = [&](int cell) {
    if (cell == k * n) {
      visit(m);
      return;
    }
    const int i = cell / n;
    const int j = cell % n;
    const long top = std::min(row_cap[i], col_cap[j]);
    for (long v = 0; v <= top; ++v) {
      m(i, j) = v;
      row_cap[i] -= v;
      col_cap[j] -= v;
      rec(cell + 1);
      row_cap[i] += v;
      col_cap[j] += v;
    }
    m(i, j) = 0;
  };
  rec(0);
}

// 1/Γ_m(α) as an exact rational, zero when some Gamma argument is a pole.
Rat inverse_gamma_m(const ParamVector& alpha, const Matrix<long>& m) {
  const Shape& s = alpha.shape();
  const int k = s.k();
  const int n = s.n();
  Int denom = 1;
  long total = 0;
  long lower_sum = 0;
  for (int i = 1; i <= k; ++i) {
    long row = 0;
    for (int j = 1; j <= n; ++j) row += m(i - 1, j - 1);
    total += row;
    lower_sum += to_long(alpha[i]);
    const long a = -to_long(alpha[i]) - row;
    if (a < 0) return 0;
    denom *= factorial(a);
  }
  for (int j = 1; j <= n; ++j) {
    long col = 0;
    for (int i = 1; i <= k; ++i) col += m(i - 1, j - 1);
    const long a = to_long(alpha[k + j]) - col;
    if (a < 0) return 0;
    denom *= factorial(a);
  }
  const long last = lower_sum + to_long(alpha[s.last()]) + total;
  if (last < 0) return 0;
  denom *= factorial(last);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) denom *= factorial(m(i, j));
  return Rat(Int(1), denom);
}

}  // namespace

Rat series_partial(const ParamVector& alpha, const XMatrix& x, const std::vector<std::pair<int, int>>& pairs) {
  require_polynomial_regime(alpha);
  const Shape& s = alpha.shape();
  if (!(x.shape() == s)) throw PreconditionError("x and alpha have different shapes");
  const int k = s.k();
  const int n = s.n();
  Matrix<long> order(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
  for (auto [i, j] : pairs) {
    if (i < 1 || i > k || j < 1 || j > n) throw PreconditionError("derivative index out of range");
    ++order(i - 1, j - 1);
  }
  std::vector<long> row_cap, col_cap;
  for (int i = 1; i <= k; ++i) row_cap.push_back(-to_long(alpha[i]));
  for (int j = 1; j <= n; ++j) col_cap.push_back(to_long(alpha[k + j]));
  Rat sum = 0;
  for_each_exponent(k, n, row_cap, col_cap, [&](const Matrix<long>& m) {
    Rat term = inverse_gamma_m(alpha, m);
    if (sgn(term) == 0) return;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) {
        const long d = order(i, j);
        const long e = m(i, j);
        if (e < d) return;
        for (long t = 0; t < d; ++t) term *= e - t;
        term *= power(x(i + 1, j + 1), e - d);
      }
    sum += term;
  });
  return sum;
}

Rat series_S(const ParamVector& alpha, const XMatrix& x) { return series_partial(alpha, x, {}); }

std::vector<std::pair<int, int>> gm_pairs(const Shape& shape, const IndexSet& J) {
  std::vector<int> rows, middle;
  for (int i = 1; i <= shape.k(); ++i)
    if (!J.contains(i)) rows.push_back(i);
  for (int c : J)
    if (c > shape.k() && c < shape.last()) middle.push_back(c - shape.k());
  if (rows.size() != middle.size()) throw PreconditionError(J.str() + " is not a frame element");
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t t = 0; t < rows.size(); ++t) pairs.emplace_back(rows[t], middle[t]);
  return pairs;
}

template <class T>
GMVector<T> gm_vector_S(const ParamVector& alpha, const XMatrix& x) {
  require_polynomial_regime(alpha);
  const Shape& s = alpha.shape();
  const auto& dot = enumerate_J_dot(s);
  GMVector<T> out = zero_vector<T>(dot);
  for (std::size_t l = 0; l < dot.size(); ++l) {
    const auto pairs = gm_pairs(s, dot[l]);
    Rat scale = minor<Rat>(x, dot[l]);
    for (auto [i, j] : pairs) scale /= alpha[s.k() + j];
    out[l] = from_rat<T>(Rat(scale * series_partial(alpha, x, pairs)));
  }
  return out;
}

template GMVector<Rat> gm_vector_S<Rat>(const ParamVector&, const XMatrix&);
template GMVector<double> gm_vector_S<double>(const ParamVector&, const XMatrix&);

namespace {

void check_margins(const std::vector<long>& rows, const std::vector<long>& cols) {
  if (rows.empty() || cols.empty()) throw PreconditionError("table margins must be nonempty");
  const long r = std::accumulate(rows.begin(), rows.end(), 0L);
  const long c = std::accumulate(cols.begin(), cols.end(), 0L);
  if (r != c) throw PreconditionError("row and column totals differ");
}

bool has_negative(const std::vector<long>& v) {
  return std::any_of(v.begin(), v.end(), [](long a) { return a < 0; });
}

// Fills rows [first_row, r1) of u given the remaining column sums.
void fill_rows(Table& u, std::size_t first_row, const std::vector<long>& rows, std::vector<long>& col_rem,
               const std::function<void(const Table&)>& visit) {
  const std::size_t r1 = rows.size();
  const std::size_t r2 = col_rem.size();
  if (first_row + 1 == r1) {  // last row is forced
    for (std::size_t j = 0; j < r2; ++j) u(first_row, j) = col_rem[j];
    visit(u);
    return;
  }
  std::vector<long> tail(r2 + 1, 0);  // capacity of columns j..end
  for (std::size_t j = r2; j-- > 0;) tail[j] = tail[j + 1] + col_rem[j];
  std::function<void(std::size_t, long)> cell = [&](std::size_t j, long row_rem) {
    if (j == r2) {
      fill_rows(u, first_row + 1, rows, col_rem, visit);
      return;
    }
    const long lo = std::max(0L, row_rem - tail[j + 1]);
    const long hi = std::min(row_rem, col_rem[j]);
    for (long v = lo; v <= hi; ++v) {
      u(first_row, j) = v;
      col_rem[j] -= v;
      cell(j + 1, row_rem - v);
      col_rem[j] += v;
    }
    u(first_row, j) = 0;
  };
  cell(0, rows[first_row]);
}

// Per-cell weights p_ij^v / v! for v up to the cell's bound.
struct WeightTable {
  std::vector<std::vector<Rat>> w;  // index i*r2 + j
  std::size_t r2;
  WeightTable(const std::vector<long>& rows, const std::vector<long>& cols, const Matrix<Rat>& p) : r2(cols.size()) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const long top = std::max(0L, std::min(rows[i], cols[j]));
        std::vector<Rat> cell(static_cast<std::size_t>(top + 1));
        cell[0] = 1;
        for (long v = 1; v <= top; ++v) cell[v] = cell[v - 1] * p(i, j) / v;
        w.push_back(std::move(cell));
      }
  }
  Rat weight(const Table& u) const {
    Rat t = 1;
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < r2; ++j) t *= w[i * r2 + j][static_cast<std::size_t>(u(i, j))];
    return t;
  }
};

void check_p(const std::vector<long>& rows, const std::vector<long>& cols, const Matrix<Rat>& p) {
  if (p.rows() != rows.size() || p.cols() != cols.size())
    throw PreconditionError("probability matrix does not match the margins");
}

struct Accumulator {
  Rat Z = 0;
  Matrix<Rat> M;
  void add(const Table& u, const Rat& w) {
    Z += w;
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < u.cols(); ++j)
        if (u(i, j)) M(i, j) += w * u(i, j);
  }
};

OracleSums finish(Accumulator acc) {
  if (sgn(acc.Z) == 0) throw PreconditionError("no contingency table has these margins");
  for (std::size_t i = 0; i < acc.M.rows(); ++i)
    for (std::size_t j = 0; j < acc.M.cols(); ++j) acc.M(i, j) /= acc.Z;
  return {acc.Z, std::move(acc.M)};
}

}  // namespace

void for_each_table(const std::vector<long>& row_sums, const std::vector<long>& col_sums,
                    const std::function<void(const Table&)>& visit) {
  check_margins(row_sums, col_sums);
  if (has_negative(row_sums) || has_negative(col_sums)) return;
  Table u(row_sums.size(), col_sums.size());
  std::vector<long> col_rem = col_sums;
  fill_rows(u, 0, row_sums, col_rem, visit);
}

std::vector<Table> enumerate_tables(const std::vector<long>& row_sums, const std::vector<long>& col_sums) {
  std::vector<Table> out;
  for_each_table(row_sums, col_sums, [&](const Table& u) { out.push_back(u); });
  return out;
}

std::size_t count_tables(const std::vector<long>& row_sums, const std::vector<long>& col_sums) {
  std::size_t c = 0;
  for_each_table(row_sums, col_sums, [&](const Table&) { ++c; });
  return c;
}

OracleSums oracle_sums_serial(const std::vector<long>& row_sums, const std::vector<long>& col_sums,
                              const Matrix<Rat>& p) {
  check_p(row_sums, col_sums, p);
  const WeightTable weights(row_sums, col_sums, p);
  Accumulator acc{0, Matrix<Rat>(row_sums.size(), col_sums.size())};
  for_each_table(row_sums, col_sums, [&](const Table& u) { acc.add(u, weights.weight(u)); });
  return finish(std::move(acc));
}

OracleSums oracle_sums(const std::vector<long>& row_sums, const std::vector<long>& col_sums, const Matrix<Rat>& p) {
  check_p(row_sums, col_sums, p);
  check_margins(row_sums, col_sums);
  if (row_sums.size() < 2 || has_negative(row_sums) || has_negative(col_sums))
    return oracle_sums_serial(row_sums, col_sums, p);
  // Split the work by the first row; each branch enumerates the remaining rows.
  std::vector<std::vector<long>> first_rows;
  for_each_table({row_sums[0], std::accumulate(row_sums.begin() + 1, row_sums.end(), 0L)}, col_sums,
                 [&](const Table& u) {
                   std::vector<long> r(col_sums.size());
                   for (std::size_t j = 0; j < r.size(); ++j) r[j] = u(0, j);
                   first_rows.push_back(std::move(r));
                 });
  const WeightTable weights(row_sums, col_sums, p);
  std::vector<Accumulator> parts(first_rows.size(), Accumulator{0, Matrix<Rat>(row_sums.size(), col_sums.size())});
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < first_rows.size(); ++b) {
    try {
      std::vector<long> col_rem(col_sums.size());
      for (std::size_t j = 0; j < col_rem.size(); ++j) col_rem[j] = col_sums[j] - first_rows[b][j];
      Table u(row_sums.size(), col_sums.size());
      for (std::size_t j = 0; j < col_rem.size(); ++j) u(0, j) = first_rows[b][j];
      fill_rows(u, 1, row_sums, col_rem, [&](const Table& t) { parts[b].add(t, weights.weight(t)); });
    } catch (...) {
#pragma omp critical(hgm_oracle_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  Accumulator total{0, Matrix<Rat>(row_sums.size(), col_sums.size())};
  for (const Accumulator& a : parts) {
    total.Z += a.Z;
    for (std::size_t i = 0; i < a.M.rows(); ++i)
      for (std::size_t j = 0; j < a.M.cols(); ++j) total.M(i, j) += a.M(i, j);
  }
  return finish(std::move(total));
}

Rat oracle_Z(const std::vector<long>& row_sums, const std::vector<long>& col_sums, const Matrix<Rat>& p) {
  return oracle_sums(row_sums, col_sums, p).Z;
}

Matrix<Rat> oracle_E(const std::vector<long>& row_sums, const std::vector<long>& col_sums, const Matrix<Rat>& p) {
  return oracle_sums(row_sums, col_sums, p).E;
}

}  // namespace hgm
