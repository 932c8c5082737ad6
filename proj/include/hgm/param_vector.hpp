#pragma once

#include <string>
#include <vector>

#include "hgm/index_combinatorics.hpp"
#include "hgm/rational.hpp"

namespace hgm {

// Exponent vector (α_0, ..., α_{k+n+1}) with zero sum.
class ParamVector {
 public:
  ParamVector(Shape shape, std::vector<Rat> entries);
  ParamVector(Shape shape, const std::vector<long>& entries);

  const Shape& shape() const noexcept { return shape_; }
  const Rat& operator[](int j) const { return entries_.at(static_cast<std::size_t>(j)); }
  const std::vector<Rat>& entries() const noexcept { return entries_; }

  // α + direction·δ_i, where δ_i has -1 at slot 0 and +1 at slot i.
  ParamVector shifted(int i, int direction = +1) const;
  // α^(i) = α + δ_i.
  ParamVector raised(int i) const { return shifted(i, +1); }
  ParamVector negated() const;

  bool all_nonzero() const;
  bool is_integral() const;
  // Throws PreconditionError naming the first zero entry.
  void require_nonzero(const char* context) const;

  std::string str() const;

  friend bool operator==(const ParamVector& a, const ParamVector& b) {
    return a.shape_ == b.shape_ && a.entries_ == b.entries_;
  }

 private:
  Shape shape_;
  std::vector<Rat> entries_;
};

}  // namespace hgm
