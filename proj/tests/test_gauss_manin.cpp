#include <doctest.h>

#include "hgm/errors.hpp"
#include "hgm/gauss_manin.hpp"
#include "hgm/series_oracle.hpp"
#include "test_support.hpp"

using namespace hgm;
using hgm::testing::Rng;

namespace {

Rat dot(const GMVector<Rat>& a, const GMVector<Rat>& b) {
  Rat s = 0;
  for (std::size_t l = 0; l < a.size(); ++l) s += a[l] * b[l];
  return s;
}

GMVector<Rat> column_of(const LabeledMatrix<Rat>& m, const GMVector<Rat>& v) { return m * v; }

GMVector<Rat> as_column(const LabeledMatrix<Rat>& C, const GMVector<Rat>& row) {
  // C·tr(row)
  return C * row;
}

Shape random_shape(Rng& rng, int max_sum) {
  const int k = static_cast<int>(rng.integer(1, max_sum - 1));
  const int n = static_cast<int>(rng.integer(1, max_sum - k));
  return Shape(k, n);
}

}  // namespace

TEST_CASE("frame elements expand to unit rows") {
  Rng rng(51);
  const Shape s(2, 2);
  const ParamVector a = testing::random_alpha(s, rng);
  const auto& dot_sets = enumerate_J_dot(s);
  for (std::size_t l = 0; l < dot_sets.size(); ++l) {
    const GMVector<Rat> v = v_J(a, dot_sets[l]);
    for (std::size_t m = 0; m < v.size(); ++m) CHECK(v[m] == (l == m ? 1 : 0));
  }
}

TEST_CASE("expansion of {2,3} for k=n=1 by a hand solve") {
  const ParamVector a(Shape(1, 1), std::vector<long>{-2, -1, 1, 2});
  // Pairing row of {2,3} against ({0,1}, {0,2}) is (0, -1/α_2); C from the
  // intersection tests. Solving v·C = (0, -1) by hand gives (1/2, -3/2).
  const GMVector<Rat> v = v_J(a, IndexSet{2, 3});
  CHECK(v.values == std::vector<Rat>{Rat(1, 2), Rat(-3, 2)});
}

TEST_CASE("expanded forms reproduce every pairing") {
  Rng rng(52);
  for (int trial = 0; trial < 6; ++trial) {
    const Shape s = random_shape(rng, 4);
    const ParamVector a = testing::random_alpha(s, rng);
    const auto C = matrix_C(a);
    const auto all = enumerate_J(s);
    for (const IndexSet& I : all) {
      const GMVector<Rat> vi = v_J(a, I);
      for (const IndexSet& J : all) {
        // The dual parameters give the same expansion, so v_J(−α) may stand in.
        const GMVector<Rat> vj_dual = v_J(a.negated(), J);
        CHECK(dot(vi, as_column(C, vj_dual)) == pairing_scaled(a, I, J));
      }
    }
  }
}

TEST_CASE("residue matrices are rank-one idempotents up to the eigenvalue") {
  Rng rng(53);
  for (int trial = 0; trial < 8; ++trial) {
    const Shape s = random_shape(rng, 5);
    const ParamVector a = testing::random_alpha(s, rng, 4);
    for (const IndexSet& J : enumerate_J_circ(s)) {
      const auto M = M_J(a, J);
      const Rat aj = alpha_J(a, J);
      CHECK((M * M) == scaled(M, aj));
      Rat trace = 0;
      for (std::size_t l = 0; l < M.size(); ++l) trace += M(l, l);
      CHECK(trace == aj);
      CHECK(kernels::rank(M.values) <= 1);
    }
  }
}

TEST_CASE("eigenvectors of the residue matrices") {
  Rng rng(54);
  for (int trial = 0; trial < 6; ++trial) {
    const Shape s = random_shape(rng, 4);
    const ParamVector a = testing::random_alpha(s, rng, 5);
    const auto C = matrix_C(a);
    const ParamVector neg = a.negated();
    for (const IndexSet& J : enumerate_J_circ(s)) {
      const auto M = M_J(a, J);
      const auto Mneg = M_J(neg, J);
      const Rat aj = alpha_J(a, J);
      const GMVector<Rat> v = v_J(a, J);
      CHECK(v * M == scaled(v, aj));
      const GMVector<Rat> col = as_column(C, v);
      CHECK(column_of(M, col) == scaled(col, aj));
      for (int j = 1; j <= s.n(); ++j) {
        if (!J.contains(s.k() + j)) continue;
        for (int i = 1; i <= s.k(); ++i) {
          if (J.contains(i)) continue;
          const IndexSet skip = J.replaced(s.k() + j, i);
          for (const IndexSet& Jp : enumerate_pJq(i, s.k() + j, s)) {
            if (Jp == skip) continue;
            CHECK(v_J(a, Jp) * M == zero_vector<Rat>(enumerate_J_dot(s)));
            // Orthogonal to the α_J-eigenvector at the dual parameters.
            CHECK(v_J(neg, Jp) * Mneg == zero_vector<Rat>(enumerate_J_dot(s)));
            CHECK(dot(v, as_column(C, v_J(neg, Jp))) == 0);
          }
        }
      }
    }
  }
}

TEST_CASE("connection coefficient sums residues over sets containing the column") {
  Rng rng(55);
  const Shape s(2, 2);
  const ParamVector a = testing::random_alpha(s, rng);
  const XMatrix x = testing::random_x(s, rng);
  const MinorTable<Rat> minors(x);
  const Connection<Rat> conn(a);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      LabeledMatrix<Rat> expected = identity_matrix<Rat>(enumerate_J_dot(s));
      expected = expected - expected;
      for (const IndexSet& J : enumerate_J(s)) {
        if (!J.contains(s.k() + j)) continue;
        const Rat d = dlog_minor<Rat>(x, J, i, j);
        if (!in_J_circ(s, J)) {
          CHECK(d == 0);
          continue;
        }
        expected = expected + scaled(M_J(a, J), d);
      }
      CHECK(psi_coefficient(a, x, i, j) == expected);
      CHECK(conn.psi(minors, i, j) == expected);
    }
  CHECK(conn.psi_all(minors) == conn.psi_all_serial(minors));
}

TEST_CASE("vanishing eigenvalues leave nilpotent, not zero, residues") {
  // k=n=1 with α_J = 0 for both sets of the circle family that contain column 2.
  const ParamVector a(Shape(1, 1), std::vector<long>{1, -1, -1, 1});
  const XMatrix x(Shape(1, 1), {{Rat(1, 3)}});
  LabeledMatrix<Rat> sum = scaled(M_J(a, IndexSet{0, 2}), Rat(0));
  for (const IndexSet& J : enumerate_J_circ(a.shape())) {
    REQUIRE(J.contains(2));
    REQUIRE(alpha_J(a, J) == 0);
    const auto M = M_J(a, J);
    CHECK_FALSE(testing::is_zero_matrix(M.values));
    CHECK(testing::is_zero_matrix((M * M).values));
    sum = sum + scaled(M, dlog_minor<Rat>(x, J, 1, 1));
  }
  const auto psi = psi_coefficient(a, x, 1, 1);
  CHECK(psi == sum);
  CHECK_FALSE(testing::is_zero_matrix(psi.values));
  CHECK(psi(0, 0) + psi(1, 1) == 0);
}

TEST_CASE("Pfaffian system: derivative of the G-M vector by interpolation") {
  Rng rng(56);
  for (int trial = 0; trial < 8; ++trial) {
    const Shape s = random_shape(rng, 5);
    if (s.k() > 3 || s.n() > 3) continue;
    const ParamVector a = testing::random_statistical_alpha(s, rng, 2);
    const XMatrix x = testing::random_x(s, rng);
    const GMVector<Rat> sbar = gm_vector_S(a, x);
    for (int i = 1; i <= s.k(); ++i)
      for (int j = 1; j <= s.n(); ++j) {
        const auto psi = psi_coefficient(a, x, i, j);
        const GMVector<Rat> lhs = psi * sbar;
        const int degree = 2 + static_cast<int>(std::min(Rat(-a[i]).get_d(), a[s.k() + j].get_d()));
        for (std::size_t l = 0; l < sbar.size(); ++l) {
          const Rat rhs = testing::lagrange_derivative(
              [&](const Rat& t) { return gm_vector_S(a, testing::with_entry(x, i, j, t))[l]; }, x(i, j), degree);
          CHECK(lhs[l] == rhs);
        }
      }
  }
}

TEST_CASE("integrability of the connection") {
  Rng rng(57);
  const Shape s(2, 2);
  for (int trial = 0; trial < 3; ++trial) {
    const ParamVector a = testing::random_alpha(s, rng);
    const XMatrix x = testing::random_x(s, rng);
    const Connection<Rat> conn(a);
    const MinorTable<Rat> minors(x);
    const auto psi = conn.psi_all(minors);
    auto derivative = [&](int i, int j, int i2, int j2) {
      LabeledMatrix<Rat> out = scaled(psi[0], Rat(0));
      for (const IndexSet& J : enumerate_J_circ(s))
        if (J.contains(s.k() + j)) out = out + scaled(conn.M(J), d2log_minor<Rat>(x, J, i, j, i2, j2));
      return out;
    };
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        for (int i2 = 1; i2 <= 2; ++i2)
          for (int j2 = 1; j2 <= 2; ++j2) {
            const auto& p = psi[static_cast<std::size_t>((i - 1) * 2 + j - 1)];
            const auto& q = psi[static_cast<std::size_t>((i2 - 1) * 2 + j2 - 1)];
            CHECK(derivative(i, j, i2, j2) - derivative(i2, j2, i, j) == q * p - p * q);
          }
  }
}

TEST_CASE("residue summand does not depend on the coordinate") {
  Rng rng(58);
  const Shape s(2, 2);
  const ParamVector a = testing::random_alpha(s, rng);
  const XMatrix x = testing::random_x(s, rng);
  const IndexSet J{1, 3, 5};
  REQUIRE(in_J_circ(s, J));
  const Rat d = dlog_minor<Rat>(x, J, 2, 1);
  REQUIRE(sgn(d) != 0);
  // Strip every other summand from Ψ_11 and Ψ_21; what is left must be the
  // same matrix times the respective log-derivative.
  const auto full_11 = psi_coefficient(a, x, 1, 1);
  const auto full_21 = psi_coefficient(a, x, 2, 1);
  LabeledMatrix<Rat> rest_11 = full_11, rest_21 = full_21;
  for (const IndexSet& K : enumerate_J_circ(s)) {
    if (!K.contains(3) || K == J) continue;
    rest_11 = rest_11 - scaled(M_J(a, K), dlog_minor<Rat>(x, K, 1, 1));
    rest_21 = rest_21 - scaled(M_J(a, K), dlog_minor<Rat>(x, K, 2, 1));
  }
  CHECK(rest_11 == scaled(M_J(a, J), dlog_minor<Rat>(x, J, 1, 1)));
  CHECK(rest_21 == scaled(M_J(a, J), d));
}

TEST_CASE("frame-free connection equals the matrix action") {
  Rng rng(59);
  int compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s = random_shape(rng, 4);
    const ParamVector a = testing::random_alpha(s, rng, 7);
    const XMatrix x = testing::random_x(s, rng);
    GMVector<Rat> phi = zero_vector<Rat>(enumerate_J_dot(s));
    for (Rat& e : phi.values) e = rng.rational();
    for (int i = 1; i <= s.k(); ++i)
      for (int j = 1; j <= s.n(); ++j) {
        bool defined = true;
        for (const IndexSet& J : enumerate_J_circ(s))
          if (J.contains(s.k() + j) && sgn(alpha_J(a, J)) == 0) defined = false;
        if (!defined) {
          CHECK_THROWS_AS(apply_connection_frame_free(a, x, phi, i, j), PreconditionError);
          continue;
        }
        CHECK(apply_connection_frame_free(a, x, phi, i, j) == phi * psi_coefficient(a, x, i, j));
        CHECK(apply_connection_frame_free(a, x, zero_vector<Rat>(enumerate_J_dot(s)), i, j) ==
              zero_vector<Rat>(enumerate_J_dot(s)));
        ++compared;
      }
  }
  CHECK(compared > 20);
}

TEST_CASE("binary64 connection tracks the exact one") {
  Rng rng(60);
  const Shape s(2, 2);
  const ParamVector a = testing::random_alpha(s, rng);
  const XMatrix x = testing::random_x(s, rng);
  const auto exact = psi_coefficient(a, x, 2, 1);
  const auto approx = psi_coefficient<double>(a, x, 2, 1);
  for (std::size_t r = 0; r < exact.size(); ++r)
    for (std::size_t c = 0; c < exact.size(); ++c)
      CHECK(approx(r, c) == doctest::Approx(exact(r, c).get_d()).epsilon(1e-10));
}
