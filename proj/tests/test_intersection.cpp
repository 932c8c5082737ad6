#include <doctest.h>

#include "hgm/errors.hpp"
#include "hgm/intersection.hpp"
#include "test_support.hpp"

using namespace hgm;
using hgm::testing::Rng;

namespace {

ParamVector alpha_of(int k, int n, std::vector<long> a) { return ParamVector(Shape(k, n), a); }

struct PairIndices {
  int p1, q1, p2, q2;
};

PairIndices random_indices(Rng& rng, const Shape& s) {
  auto distinct = [&](int& p, int& q) {
    do {
      p = static_cast<int>(rng.integer(0, s.last()));
      q = static_cast<int>(rng.integer(0, s.last()));
    } while (p == q);
  };
  PairIndices ix{};
  distinct(ix.p1, ix.q1);
  distinct(ix.p2, ix.q2);
  return ix;
}

}  // namespace

TEST_CASE("diagonal pairing value") {
  const ParamVector a = alpha_of(2, 2, {-3, -2, -3, 3, 4, 1});
  CHECK(pairing_scaled(a, IndexSet{0, 1, 2}, IndexSet{0, 1, 2}) == Rat(4, 9));
  CHECK(pairing_scaled(a, IndexSet{0, 1, 2}, IndexSet{0, 3, 4}) == 0);
  // Shared {1,2}: 0 sits first in one set and 5 last in the other.
  CHECK(pairing_scaled(a, IndexSet{0, 1, 2}, IndexSet{1, 2, 5}) == Rat(1, 6));
  CHECK(pairing_scaled(a, IndexSet{0, 1, 3}, IndexSet{0, 1, 4}) == Rat(1, 6));
}

TEST_CASE("pairing needs nonzero parameters in its denominators") {
  const ParamVector a = alpha_of(1, 1, {0, -1, 2, -1});
  CHECK_THROWS_AS(pairing_scaled(a, IndexSet{0, 1}, IndexSet{0, 1}), PreconditionError);
  CHECK(pairing_scaled(a, IndexSet{1, 2}, IndexSet{1, 2}) == Rat(-1, 2));
}

TEST_CASE("intersection matrix for k=n=1 and its adjugate inverse") {
  const ParamVector a = alpha_of(1, 1, {-2, -1, 1, 2});
  const auto C = matrix_C(a);
  CHECK(C.row_labels == std::vector<IndexSet>{IndexSet{0, 1}, IndexSet{0, 2}});
  CHECK(C(0, 0) == Rat(-3, 2));
  CHECK(C(1, 1) == Rat(1, 2));
  CHECK(C(0, 1) == Rat(-1, 2));
  CHECK(C(1, 0) == Rat(-1, 2));
  const Rat det = C(0, 0) * C(1, 1) - C(0, 1) * C(1, 0);
  const auto inv = inverse_C(a);
  CHECK(inv(0, 0) == C(1, 1) / det);
  CHECK(inv(1, 1) == C(0, 0) / det);
  CHECK(inv(0, 1) == -C(0, 1) / det);
  CHECK(inv(1, 0) == -C(1, 0) / det);
  CHECK(matrix_Cpq(a, 0, 3, 0, 3) == C);
}

TEST_CASE("P and Q label families") {
  const ParamVector a = alpha_of(1, 1, {-2, -1, 1, 2});
  const auto Q = matrix_Q(a, 1);
  CHECK(Q.row_labels == std::vector<IndexSet>{IndexSet{0, 3}, IndexSet{0, 2}});
  // Row {0,3} against column {0,1}: shared {0}, sign (+1)(-1)^{1+1}, over α_0.
  CHECK(Q(0, 0) == Rat(-1, 2));
  CHECK(Q(1, 1) == Rat(1, 2));
  const auto P = matrix_P(a, 1);
  CHECK(P.row_labels == std::vector<IndexSet>{IndexSet{1, 3}, IndexSet{1, 2}});
  for (int k = 1; k <= 3; ++k)
    for (int n = 1; n <= 2; ++n) {
      Rng rng(static_cast<std::uint64_t>(40 + 3 * k + n));
      const ParamVector b = testing::random_alpha(Shape(k, n), rng);
      for (int i = 1; i <= k + n + 1; ++i)
        for (const IndexSet& J : matrix_P(b, i).row_labels) {
          CHECK(J.contains(i));
          CHECK_FALSE(J.contains(0));
        }
    }
}

TEST_CASE("closed-form inverses agree with elimination") {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = static_cast<int>(rng.integer(1, 3));
    const int n = static_cast<int>(rng.integer(1, 4 - k));
    const Shape s(k, n);
    const ParamVector a = testing::random_alpha(s, rng);
    const PairIndices ix = random_indices(rng, s);
    const auto C = matrix_Cpq(a, ix.p1, ix.q1, ix.p2, ix.q2);
    const auto closed = inverse_Cpq(a, ix.p1, ix.q1, ix.p2, ix.q2);
    CHECK(closed == inverse(C));
    CHECK((C * closed).values == Matrix<Rat>::identity(s.rank()));
  }
  Rng rng2(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Shape s(2, 2);
    const ParamVector a = testing::random_alpha(s, rng2);
    const int i = static_cast<int>(rng2.integer(1, 5));
    CHECK(inverse_C(a) == inverse(matrix_C(a)));
    CHECK(inverse_P(a, i) == inverse(matrix_P(a, i)));
    CHECK(inverse_Q(a, i) == inverse(matrix_Q(a, i)));
  }
}

TEST_CASE("matched alignment gives diagonal matrices with reciprocal inverses") {
  Rng rng(43);
  for (int k = 1; k <= 2; ++k)
    for (int n = 1; n <= 2; ++n) {
      const Shape s(k, n);
      const ParamVector a = testing::random_alpha(s, rng);
      for (int p = 0; p <= s.last(); ++p)
        for (int q = 0; q <= s.last(); ++q) {
          if (p == q) continue;
          const auto D = matrix_Cpq(a, p, q, q, p);
          const auto inv = inverse_Cpq(a, p, q, q, p);
          for (std::size_t r = 0; r < s.rank(); ++r)
            for (std::size_t c = 0; c < s.rank(); ++c) {
              if (r == c) {
                REQUIRE(sgn(D(r, c)) != 0);
                CHECK(inv(r, c) == 1 / D(r, c));
              } else {
                CHECK(D(r, c) == 0);
                CHECK(inv(r, c) == 0);
              }
            }
        }
    }
}

TEST_CASE("transposition swaps the label pairs") {
  for (int k = 1; k <= 2; ++k)
    for (int n = 1; n <= 2; ++n) {
      Rng rng(static_cast<std::uint64_t>(44 + k * 5 + n));
      const Shape s(k, n);
      const ParamVector a = testing::random_alpha(s, rng);
      for (int p1 = 0; p1 <= s.last(); ++p1)
        for (int q1 = 0; q1 <= s.last(); ++q1)
          for (int p2 = 0; p2 <= s.last(); ++p2)
            for (int q2 = 0; q2 <= s.last(); ++q2) {
              if (p1 == q1 || p2 == q2) continue;
              CHECK(matrix_Cpq(a, p1, q1, p2, q2).transposed() == matrix_Cpq(a, p2, q2, p1, q1));
            }
    }
}

TEST_CASE("negating parameters multiplies the pairing by (-1)^k") {
  Rng rng(45);
  for (int k = 1; k <= 3; ++k)
    for (int n = 1; n <= 2; ++n) {
      const Shape s(k, n);
      const ParamVector a = testing::random_alpha(s, rng);
      const auto& all = enumerate_J(s);
      for (const IndexSet& I : all)
        for (const IndexSet& J : all) {
          const Rat lhs = pairing_scaled(a.negated(), I, J);
          CHECK(lhs == (k % 2 ? -1 : 1) * pairing_scaled(a, I, J));
          CHECK(pairing_scaled(a, I, J) == pairing_scaled(a, J, I));
        }
    }
}

TEST_CASE("intersection matrix is invertible for generic parameters") {
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = static_cast<int>(rng.integer(1, 4));
    const int n = static_cast<int>(rng.integer(1, 5 - k));
    const ParamVector a = testing::random_alpha(Shape(k, n), rng);
    CHECK(sgn(kernels::determinant(matrix_C(a).values)) != 0);
  }
}

TEST_CASE("binary64 pairing rounds the exact value") {
  const ParamVector a = alpha_of(2, 2, {-3, -2, -3, 3, 4, 1});
  CHECK(pairing_scaled<double>(a, IndexSet{0, 1, 2}, IndexSet{0, 1, 2}) == doctest::Approx(4.0 / 9.0));
  const auto Cd = matrix_C<double>(a);
  const auto Cr = matrix_C(a);
  for (std::size_t r = 0; r < Cr.size(); ++r)
    for (std::size_t c = 0; c < Cr.size(); ++c) CHECK(Cd(r, c) == doctest::Approx(Cr(r, c).get_d()));
}
