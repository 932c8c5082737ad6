#include "hgm/index_combinatorics.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "hgm/errors.hpp"
#include "hgm/param_vector.hpp"

namespace hgm {

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

Shape::Shape(int k, int n) : k_(k), n_(n) {
  if (k < 1 || n < 1) throw PreconditionError("shape requires k >= 1 and n >= 1");
  if (k + n + 2 > 63) throw PreconditionError("shape too large");
  rank_ = binomial(k + n, k);
}

IndexSet::IndexSet(std::vector<int> elements) : elems_(std::move(elements)) {
  for (std::size_t p = 0; p < elems_.size(); ++p) {
    if (elems_[p] < 0 || elems_[p] > 62) throw PreconditionError("index out of range in " + str());
    if (p > 0 && elems_[p] <= elems_[p - 1])
      throw PreconditionError("index set must be strictly ascending: " + str());
    mask_ |= std::uint64_t{1} << elems_[p];
  }
}

int IndexSet::position(int j) const noexcept {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), j);
  if (it == elems_.end() || *it != j) return -1;
  return static_cast<int>(it - elems_.begin());
}

IndexSet IndexSet::replaced(int out, int in) const {
  std::vector<int> e;
  e.reserve(elems_.size());
  for (int v : elems_)
    if (v != out) e.push_back(v);
  e.push_back(in);
  std::sort(e.begin(), e.end());
  return IndexSet(std::move(e));
}

namespace {

std::string render(const std::vector<int>& e) {
  std::string s = "{";
  for (std::size_t p = 0; p < e.size(); ++p) {
    if (p) s += ",";
    s += std::to_string(e[p]);
  }
  return s + "}";
}

}  // namespace

std::string IndexSet::str() const { return render(elems_); }

IndexTuple::IndexTuple(std::vector<int> elements) : elems_(std::move(elements)) {
  std::vector<int> sorted = elems_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("index tuple has duplicate entries: " + str());
}

IndexTuple IndexTuple::replaced(int out, int in) const {
  std::vector<int> e = elems_;
  auto it = std::find(e.begin(), e.end(), out);
  if (it == e.end()) throw PreconditionError("index " + std::to_string(out) + " not in tuple " + str());
  *it = in;
  return IndexTuple(std::move(e));
}

std::string IndexTuple::str() const {
  std::string s = render(elems_);
  s.front() = '(';
  s.back() = ')';
  return s;
}

SortedTuple sort_with_sign(const IndexTuple& tuple) {
  std::vector<int> e = tuple.elements();
  int sign = 1;
  // Insertion sort; each adjacent swap is one transposition.
  for (std::size_t i = 1; i < e.size(); ++i)
    for (std::size_t j = i; j > 0 && e[j - 1] > e[j]; --j) {
      std::swap(e[j - 1], e[j]);
      sign = -sign;
    }
  return {IndexSet(std::move(e)), sign};
}

std::vector<IndexSet> enumerate_J(const Shape& shape) {
  const int size = shape.k() + 1;
  const int top = shape.last();
  std::vector<IndexSet> out;
  out.reserve(binomial(top + 1, size));
  std::vector<int> cur(size);
  for (int p = 0; p < size; ++p) cur[p] = p;
  for (;;) {
    out.emplace_back(cur);
    int p = size - 1;
    while (p >= 0 && cur[p] == top - (size - 1 - p)) --p;
    if (p < 0) break;
    ++cur[p];
    for (int q = p + 1; q < size; ++q) cur[q] = cur[q - 1] + 1;
  }
  return out;
}

namespace {

struct ShapeTables {
  std::vector<IndexSet> j_dot;
  std::unordered_map<std::uint64_t, int> j_dot_pos;
  std::vector<IndexSet> j_circ;
  std::unordered_map<std::uint64_t, bool> j_circ_member;
};

bool circ_rule(const Shape& shape, const IndexSet& J) {
  bool has_all_rows = true;
  for (int i = 1; i <= shape.k(); ++i)
    if (!J.contains(i)) has_all_rows = false;
  bool has_middle = false;
  for (int c = shape.k() + 1; c <= shape.k() + shape.n(); ++c)
    if (J.contains(c)) has_middle = true;
  return !has_all_rows && has_middle;
}

const ShapeTables& tables(const Shape& shape) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<ShapeTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{shape.k(), shape.n()}];
  if (slot) return *slot;

  auto t = std::make_unique<ShapeTables>();
  for (const IndexSet& J : enumerate_J(shape)) {
    if (J.contains(0) && !J.contains(shape.last())) {
      t->j_dot_pos.emplace(J.mask(), static_cast<int>(t->j_dot.size()));
      t->j_dot.push_back(J);
    }
    const bool member = circ_rule(shape, J);
    t->j_circ_member.emplace(J.mask(), member);
    if (member) t->j_circ.push_back(J);
  }
  if (t->j_dot.size() != shape.rank())
    throw InternalError("frame size " + std::to_string(t->j_dot.size()) + " differs from rank");
  const std::size_t expected =
      binomial(shape.columns(), shape.k() + 1) - static_cast<std::size_t>(shape.columns());
  if (t->j_circ.size() != expected)
    throw InternalError("|J_circ| = " + std::to_string(t->j_circ.size()) + ", expected " +
                        std::to_string(expected));
  slot = std::move(t);
  return *slot;
}

}  // namespace

const std::vector<IndexSet>& enumerate_J_dot(const Shape& shape) { return tables(shape).j_dot; }

int position_in_J_dot(const Shape& shape, const IndexSet& J) {
  const auto& pos = tables(shape).j_dot_pos;
  auto it = pos.find(J.mask());
  return it == pos.end() ? -1 : it->second;
}

std::vector<IndexSet> enumerate_pJq(int p, int q, const Shape& shape) {
  if (p == q) throw PreconditionError("enumerate_pJq requires p != q");
  if (p < 0 || q < 0 || p > shape.last() || q > shape.last())
    throw PreconditionError("enumerate_pJq index out of range");
  // k-subsets of the remaining columns, lexicographic, then p added back.
  std::vector<int> pool;
  for (int c = 0; c <= shape.last(); ++c)
    if (c != p && c != q) pool.push_back(c);
  const int size = shape.k();
  std::vector<IndexSet> out;
  std::vector<int> idx(size);
  for (int s = 0; s < size; ++s) idx[s] = s;
  const int m = static_cast<int>(pool.size());
  for (;;) {
    std::vector<int> e;
    e.reserve(size + 1);
    for (int s : idx) e.push_back(pool[s]);
    e.push_back(p);
    std::sort(e.begin(), e.end());
    out.emplace_back(std::move(e));
    int s = size - 1;
    while (s >= 0 && idx[s] == m - (size - s)) --s;
    if (s < 0) break;
    ++idx[s];
    for (int t = s + 1; t < size; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

std::vector<AlignedLabel> aligned_iJ0(int i, const Shape& shape) {
  if (i < 1 || i > shape.last()) throw PreconditionError("aligned_iJ0: index out of range");
  std::vector<AlignedLabel> out;
  for (const IndexSet& J : enumerate_J_dot(shape)) {
    IndexTuple t(J);
    if (J.contains(i)) t = t.replaced(i, shape.last());
    auto [set, sign] = sort_with_sign(t);
    out.push_back({std::move(t), std::move(set), sign});
  }
  return out;
}

std::vector<AlignedLabel> aligned_0Ji(int i, const Shape& shape) {
  std::vector<AlignedLabel> out = aligned_iJ0(i, shape);
  for (AlignedLabel& a : out) {
    a.tuple = a.tuple.replaced(0, i);
    auto [set, sign] = sort_with_sign(a.tuple);
    a.set = std::move(set);
    a.sign = sign;
  }
  return out;
}

const std::vector<IndexSet>& enumerate_J_circ(const Shape& shape) { return tables(shape).j_circ; }

bool in_J_circ(const Shape& shape, const IndexSet& J) {
  const auto& m = tables(shape).j_circ_member;
  auto it = m.find(J.mask());
  return it != m.end() && it->second;
}

Rat alpha_J(const ParamVector& alpha, const IndexSet& J) {
  Rat s = 0;
  for (int j : J) s += alpha[j];
  return s;
}

}  // namespace hgm
