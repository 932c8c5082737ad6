#include <doctest.h>

#include "hgm/errors.hpp"
#include "hgm/hgm_engine.hpp"
#include "test_support.hpp"

using namespace hgm;
using hgm::testing::Rng;

namespace {

TableProblem make_problem(std::vector<long> rows, std::vector<long> cols, std::vector<std::vector<Rat>> p) {
  Matrix<Rat> m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = p[i][j];
  return {std::move(rows), std::move(cols), std::move(m)};
}

TableProblem worked_example() {
  return make_problem({2, 3, 3}, {1, 3, 4}, {{1, Rat(1, 2), Rat(1, 3)}, {1, Rat(1, 5), Rat(1, 7)}, {1, 1, 1}});
}

// E[U] as a function of x: the base table plus x_ab ∂_ab S / S moved along
// the cycle (a,b+1) (r1,1) - (a,1) (r1,b+1). Differentiated by the quotient rule.
Matrix<Rat> gradient_oracle(const MappedProblem& m) {
  const Shape& s = m.alpha.shape();
  const int k = s.k(), n = s.n();
  const std::size_t r1 = static_cast<std::size_t>(k + 1), r2 = static_cast<std::size_t>(n + 1);
  auto d = [&](std::vector<std::pair<int, int>> pairs) { return series_partial(m.alpha, m.x, pairs); };
  const Rat S = d({});
  Matrix<Rat> out(r1 * r2, static_cast<std::size_t>(k * n));
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= n; ++b)
      for (int i2 = 1; i2 <= k; ++i2)
        for (int j2 = 1; j2 <= n; ++j2) {
          Rat g = m.x(a, b) * (d({{a, b}, {i2, j2}}) * S - d({{a, b}}) * d({{i2, j2}})) / (S * S);
          if (a == i2 && b == j2) g += d({{a, b}}) / S;
          const std::size_t col = static_cast<std::size_t>((i2 - 1) * n + (j2 - 1));
          const std::size_t ra = static_cast<std::size_t>(a - 1), last = r1 - 1, cb = static_cast<std::size_t>(b);
          out(ra * r2 + cb, col) += g;
          out(last * r2 + 0, col) += g;
          out(ra * r2 + 0, col) -= g;
          out(last * r2 + cb, col) -= g;
        }
  return out;
}

}  // namespace

TEST_CASE("mapping the worked 3x3 problem") {
  const MappedProblem m = map_problem(worked_example());
  CHECK(m.alpha == ParamVector(Shape(2, 2), std::vector<long>{-3, -2, -3, 3, 4, 1}));
  CHECK(m.x.entries() == XMatrix(Shape(2, 2), {{Rat(1, 2), Rat(1, 3)}, {Rat(1, 5), Rat(1, 7)}}).entries());
  Rat sum = 0;
  for (const Rat& e : m.alpha.entries()) sum += e;
  CHECK(sum == 0);
  const TableProblem p = worked_example();
  Rat pu0 = 1;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) pu0 *= power(p.p(i, j), m.u0(i, j));
  CHECK(m.prefactor == pu0);
}

TEST_CASE("uniform probabilities map to the degenerate all-ones point") {
  Matrix<Rat> ones(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) ones(i, j) = 1;
  const MappedProblem m = map_problem({{2, 3, 3}, {1, 3, 4}, ones});
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) CHECK(m.x(i, j) == 1);
  CHECK_FALSE(check_in_X(m.x).empty());
}

TEST_CASE("parameter path for the worked problem") {
  const ParamVector target(Shape(2, 2), std::vector<long>{-3, -2, -3, 3, 4, 1});
  CHECK(path_start(target.shape()) == ParamVector(Shape(2, 2), std::vector<long>{-2, -1, -1, 1, 1, 2}));
  const auto path = build_path(target);
  REQUIRE(path.size() == 9);
  const std::vector<std::pair<int, int>> expected{{3, 1}, {3, 1}, {4, 1}, {4, 1}, {4, 1},
                                                  {5, -1}, {1, -1}, {2, -1}, {2, -1}};
  const std::vector<std::vector<long>> alphas{{-3, -1, -1, 2, 1, 2}, {-4, -1, -1, 3, 1, 2}, {-5, -1, -1, 3, 2, 2},
                                              {-6, -1, -1, 3, 3, 2}, {-7, -1, -1, 3, 4, 2}, {-6, -1, -1, 3, 4, 1},
                                              {-5, -2, -1, 3, 4, 1}, {-4, -2, -2, 3, 4, 1}, {-3, -2, -3, 3, 4, 1}};
  for (std::size_t l = 0; l < 9; ++l) {
    CHECK(path[l].index == expected[l].first);
    CHECK(path[l].direction == expected[l].second);
    CHECK(path[l].alpha_after == ParamVector(Shape(2, 2), alphas[l]));
  }
  CHECK(build_path(path_start(Shape(3, 2))).empty());
}

TEST_CASE("paths satisfy the three path conditions") {
  Rng rng(81);
  for (int trial = 0; trial < 40; ++trial) {
    const TableProblem p =
        testing::random_problem(rng, static_cast<std::size_t>(rng.integer(2, 5)), static_cast<std::size_t>(rng.integer(2, 5)), 30);
    const MappedProblem m = map_problem(p);
    std::vector<PathStep> path;
    try {
      path = build_path(m.alpha);
    } catch (const PreconditionError&) {
      continue;
    }
    ParamVector a = path_start(m.alpha.shape());
    for (const PathStep& st : path) {
      CHECK((st.direction == 1 || st.direction == -1));
      CHECK(st.alpha_after == a.shifted(st.index, st.direction));
      CHECK(st.alpha_after.all_nonzero());
      a = st.alpha_after;
    }
    CHECK(a == m.alpha);
  }
}

TEST_CASE("end-to-end agreement with enumeration") {
  const TableProblem p = worked_example();
  EvalOptions opts;
  opts.oracle = true;
  const EvalResult<Rat> r = evaluate<Rat>(p, opts);
  CHECK(r.Z == Rat(57481, 6174000));
  CHECK(r.Z == oracle_Z(p.row_sums, p.col_sums, p.p));
  CHECK(r.expectations == oracle_E(p.row_sums, p.col_sums, p.p));
  REQUIRE(r.oracle);
  CHECK(r.oracle->match);
  CHECK(r.path.size() == 9);

  const TableProblem small = make_problem({1, 2}, {2, 1}, {{1, Rat(1, 2)}, {1, Rat(1, 3)}});
  const EvalResult<Rat> rs = evaluate<Rat>(small);
  CHECK(rs.Z == oracle_Z(small.row_sums, small.col_sums, small.p));
  CHECK(rs.expectations == oracle_E(small.row_sums, small.col_sums, small.p));
}

TEST_CASE("uniform 2x2 problem is rejected off the generic locus") {
  const TableProblem p = make_problem({1, 1}, {1, 1}, {{1, 1}, {1, 1}});
  CHECK_THROWS_AS(evaluate<Rat>(p), PreconditionError);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(validate(make_problem({1, 2}, {1, 1}, {{1, 1}, {1, 1}})), PreconditionError);
  CHECK_THROWS_AS(validate(make_problem({1, 1}, {1, 1}, {{1, 0}, {1, 1}})), PreconditionError);
  CHECK_THROWS_AS(validate(make_problem({-1, 3}, {1, 1}, {{1, 1}, {1, 1}})), PreconditionError);
  // A zero probability is harmless in a cell whose row is empty.
  CHECK_NOTHROW(validate(make_problem({0, 2}, {1, 1}, {{0, 1}, {1, 1}})));
}

TEST_CASE("gradients match the quotient-rule oracle") {
  Rng rng(82);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t r1 = static_cast<std::size_t>(rng.integer(2, 3));
    const std::size_t r2 = static_cast<std::size_t>(rng.integer(2, 3));
    const TableProblem p = testing::random_problem(rng, r1, r2, 9);
    const EvalResult<Rat> r = evaluate<Rat>(p);
    const MappedProblem m = map_problem(p);
    CHECK(r.gradients == gradient_oracle(m));
    for (std::size_t i = 0; i < r1; ++i)
      for (std::size_t c = 0; c < r.gradients.cols(); ++c) {
        Rat row = 0;
        for (std::size_t j = 0; j < r2; ++j) row += r.gradients(i * r2 + j, c);
        CHECK(row == 0);
      }
  }
}

TEST_CASE("zero margins are stripped") {
  const TableProblem p = make_problem({2, 0, 3, 3}, {1, 3, 0, 4},
                                      {{1, Rat(1, 2), 5, Rat(1, 3)},
                                       {7, 7, 7, 7},
                                       {1, Rat(1, 5), 2, Rat(1, 7)},
                                       {1, 1, 1, 1}});
  const EvalResult<Rat> r = evaluate<Rat>(p);
  CHECK(r.kept_rows == std::vector<std::size_t>{0, 2, 3});
  CHECK(r.kept_cols == std::vector<std::size_t>{0, 1, 3});
  CHECK(r.Z == Rat(57481, 6174000));
  CHECK(r.Z == oracle_Z(p.row_sums, p.col_sums, p.p));
  CHECK(r.expectations == oracle_E(p.row_sums, p.col_sums, p.p));
  for (std::size_t j = 0; j < 4; ++j) CHECK(r.expectations(1, j) == 0);
  for (std::size_t c = 0; c < r.gradients.cols(); ++c) CHECK(r.gradients(1 * 4 + 2, c) == 0);
}

TEST_CASE("single-table problems") {
  const TableProblem p = make_problem({5}, {1, 4}, {{Rat(1, 2), 3}});
  const EvalResult<Rat> r = evaluate<Rat>(p);
  CHECK(r.Z == oracle_Z(p.row_sums, p.col_sums, p.p));
  CHECK(r.expectations(0, 0) == 1);
  CHECK(r.expectations(0, 1) == 4);
  CHECK(testing::is_zero_matrix(r.gradients));
  // Stripping down to one column.
  const TableProblem q = make_problem({2, 3}, {0, 5}, {{1, 2}, {3, 4}});
  const EvalResult<Rat> rq = evaluate<Rat>(q);
  CHECK(rq.Z == oracle_Z(q.row_sums, q.col_sums, q.p));
  CHECK(rq.expectations == oracle_E(q.row_sums, q.col_sums, q.p));
}

TEST_CASE("row scaling and permutations") {
  Rng rng(83);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t r1 = static_cast<std::size_t>(rng.integer(2, 4));
    const std::size_t r2 = static_cast<std::size_t>(rng.integer(2, 4));
    const TableProblem p = testing::random_problem(rng, r1, r2, 10);
    const EvalResult<Rat> base = evaluate<Rat>(p);

    TableProblem scaled_p = p;
    Rat factor = 1;
    for (std::size_t i = 0; i < r1; ++i) {
      const Rat lambda = rng.positive_rational(5);
      for (std::size_t j = 0; j < r2; ++j) scaled_p.p(i, j) *= lambda;
      factor *= power(lambda, p.row_sums[i]);
    }
    const EvalResult<Rat> sc = evaluate<Rat>(scaled_p);
    CHECK(sc.Z == factor * base.Z);
    CHECK(sc.expectations == base.expectations);

    std::vector<std::size_t> rows(r1), cols(r2);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng.engine());
    std::shuffle(cols.begin(), cols.end(), rng.engine());
    const TableProblem q = testing::permuted(p, rows, cols);
    if (!check_in_X(map_problem(q).x).empty()) continue;
    const EvalResult<Rat> pr = evaluate<Rat>(q);
    CHECK(pr.Z == base.Z);
    for (std::size_t a = 0; a < r1; ++a)
      for (std::size_t b = 0; b < r2; ++b) CHECK(pr.expectations(a, b) == base.expectations(rows[a], cols[b]));
  }
}

TEST_CASE("binary64 backend on short paths") {
  // Z keeps nine digits here. Expectations come from G-M entries that can be
  // tiny next to S, so they carry a looser bound, and the oracle cross-check
  // must flag exactly the runs that miss its 1e-9 tolerance.
  Rng rng(84);
  int flagged = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r1 = static_cast<std::size_t>(rng.integer(2, 4));
    const std::size_t r2 = static_cast<std::size_t>(rng.integer(2, 4));
    const TableProblem p = testing::random_problem(rng, r1, r2, 10);
    const EvalResult<Rat> exact = evaluate<Rat>(p);
    const EvalResult<double> approx = evaluate<double>(p);
    const double z_rel = std::abs(Rat((approx.Z - exact.Z) / exact.Z).get_d());
    CHECK(z_rel < 1e-9);
    bool within = z_rel <= 1e-9;
    for (std::size_t i = 0; i < r1; ++i)
      for (std::size_t j = 0; j < r2; ++j) {
        const double e = exact.expectations(i, j).get_d();
        const double err = std::abs(approx.expectations(i, j) - e) / std::max(1.0, std::abs(e));
        CHECK(err < 1e-6);
        within = within && err <= 1e-9;
      }
    for (std::size_t r = 0; r < exact.gradients.rows(); ++r)
      for (std::size_t c = 0; c < exact.gradients.cols(); ++c) {
        const double g = exact.gradients(r, c).get_d();
        CHECK(std::abs(approx.gradients(r, c) - g) <= 1e-6 * std::max(1.0, std::abs(g)));
      }
    EvalOptions opts;
    opts.oracle = true;
    if (within) {
      CHECK(evaluate<double>(p, opts).oracle->match);
    } else {
      CHECK_THROWS_AS(evaluate<double>(p, opts), InternalError);
      ++flagged;
    }
  }
  CHECK(flagged < 5);
}

TEST_CASE("each binary64 path step is locally accurate") {
  // Long paths can amplify rounding through the recurrence itself, so the
  // per-step error is what the float backend controls.
  Rng rng(86);
  for (int trial = 0; trial < 4; ++trial) {
    const TableProblem p = testing::random_problem(rng, 3, 3, 30);
    const MappedProblem m = map_problem(p);
    const MinorTable<Rat> exact_minors(m.x);
    const MinorTable<double> float_minors(m.x);
    ParamVector a = path_start(m.alpha.shape());
    GMVector<Rat> sbar = gm_vector_S(a, m.x);
    for (const PathStep& st : build_path(m.alpha)) {
      GMVector<double> rounded{sbar.labels, {}};
      for (const Rat& v : sbar.values) rounded.values.push_back(v.get_d());
      const bool up = st.direction > 0;
      const GMVector<double> one = up ? shift_up_series<double>(a, float_minors, st.index, rounded)
                                      : shift_down_series<double>(a, float_minors, st.index, rounded);
      sbar = up ? shift_up_series<Rat>(a, exact_minors, st.index, sbar)
                : shift_down_series<Rat>(a, exact_minors, st.index, sbar);
      for (std::size_t l = 0; l < sbar.size(); ++l) {
        const double ref = sbar[l].get_d();
        CHECK(std::abs(one[l] - ref) <= 1e-11 * std::abs(ref));
      }
      a = st.alpha_after;
    }
  }
}

TEST_CASE("optional outputs") {
  const TableProblem p = worked_example();
  EvalOptions opts;
  opts.keep_psi = true;
  opts.contiguity_index = 3;
  const EvalResult<Rat> r = evaluate<Rat>(p, opts);
  REQUIRE(r.alpha);
  REQUIRE(r.x);
  REQUIRE(r.psi.size() == 4);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      CHECK(r.psi[static_cast<std::size_t>((i - 1) * 2 + j - 1)] == psi_coefficient(*r.alpha, *r.x, i, j));
  REQUIRE(r.contiguity);
  CHECK(*r.contiguity == contiguity_matrix(*r.alpha, *r.x, 3));
  CHECK(r.sbar_exp2 == 0);
  CHECK(r.sbar == gm_vector_S(*r.alpha, *r.x));
}
