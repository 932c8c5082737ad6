#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <unordered_map>
#include <vector>

#include "hgm/rational.hpp"

namespace hgm {

class ParamVector;

// (k, n) for the (k+1) x (k+n+2) column structure; r = binomial(k+n, k).
class Shape {
 public:
  Shape(int k, int n);

  int k() const noexcept { return k_; }
  int n() const noexcept { return n_; }
  std::size_t rank() const noexcept { return rank_; }
  // Largest column index, k+n+1.
  int last() const noexcept { return k_ + n_ + 1; }
  int columns() const noexcept { return k_ + n_ + 2; }

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  int k_;
  int n_;
  std::size_t rank_;
};

std::size_t binomial(int n, int k);

// Strictly ascending set of column indices.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> elements);
  IndexSet(std::initializer_list<int> elements) : IndexSet(std::vector<int>(elements)) {}

  std::size_t size() const noexcept { return elems_.size(); }
  int operator[](std::size_t p) const { return elems_[p]; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }
  const std::vector<int>& elements() const noexcept { return elems_; }

  bool contains(int j) const noexcept { return (mask_ >> j) & 1u; }
  // Position of j in ascending order, or -1.
  int position(int j) const noexcept;
  std::uint64_t mask() const noexcept { return mask_; }

  // (J - {out}) U {in}, sorted.
  IndexSet replaced(int out, int in) const;

  std::string str() const;

  friend bool operator==(const IndexSet& a, const IndexSet& b) noexcept { return a.mask_ == b.mask_; }
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) noexcept {
    return a.elems_ <=> b.elems_;
  }

 private:
  std::vector<int> elems_;
  std::uint64_t mask_ = 0;
};

// Ordered column indices; the order carries a sign relative to IndexSet.
class IndexTuple {
 public:
  IndexTuple() = default;
  explicit IndexTuple(std::vector<int> elements);
  IndexTuple(std::initializer_list<int> elements) : IndexTuple(std::vector<int>(elements)) {}
  explicit IndexTuple(const IndexSet& s) : IndexTuple(s.elements()) {}

  std::size_t size() const noexcept { return elems_.size(); }
  int operator[](std::size_t p) const { return elems_[p]; }
  const std::vector<int>& elements() const noexcept { return elems_; }

  // Same tuple with the entry `out` overwritten in place by `in`.
  IndexTuple replaced(int out, int in) const;

  std::string str() const;

  friend bool operator==(const IndexTuple&, const IndexTuple&) = default;

 private:
  std::vector<int> elems_;
};

struct SortedTuple {
  IndexSet set;
  int sign = 1;
};

SortedTuple sort_with_sign(const IndexTuple& tuple);

// An index set in a prescribed alignment: the defining tuple, its sorted
// form, and the parity relating the two.
struct AlignedLabel {
  IndexTuple tuple;
  IndexSet set;
  int sign = 1;
};

// 𝒥: all (k+1)-subsets of {0..k+n+1}, lexicographic.
std::vector<IndexSet> enumerate_J(const Shape& shape);

// 𝒥̇: sets containing 0 and not k+n+1, lexicographic. The frame of every
// Gauss-Manin vector.
const std::vector<IndexSet>& enumerate_J_dot(const Shape& shape);

// Position of J in enumerate_J_dot, or -1.
int position_in_J_dot(const Shape& shape, const IndexSet& J);

// Sets containing p and not q, ordered lexicographically by J - {p}.
std::vector<IndexSet> enumerate_pJq(int p, int q, const Shape& shape);

// The alignment of the sets containing 0 and not i that follows 𝒥̇ entry by
// entry: J^l unchanged when i is not in J^l, otherwise i overwritten by k+n+1.
std::vector<AlignedLabel> aligned_iJ0(int i, const Shape& shape);

// aligned_iJ0 with 0 overwritten by i in every tuple.
std::vector<AlignedLabel> aligned_0Ji(int i, const Shape& shape);

// 𝒥°: the sets whose minor depends on x.
const std::vector<IndexSet>& enumerate_J_circ(const Shape& shape);
bool in_J_circ(const Shape& shape, const IndexSet& J);

Rat alpha_J(const ParamVector& alpha, const IndexSet& J);

}  // namespace hgm
