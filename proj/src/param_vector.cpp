#include "hgm/param_vector.hpp"

#include "hgm/errors.hpp"

namespace hgm {

ParamVector::ParamVector(Shape shape, std::vector<Rat> entries) : shape_(shape), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(shape_.columns()))
    throw PreconditionError("parameter vector has " + std::to_string(entries_.size()) + " entries, expected " +
                            std::to_string(shape_.columns()));
  Rat sum = 0;
  for (const Rat& a : entries_) sum += a;
  if (sgn(sum) != 0) throw PreconditionError("parameter vector " + str() + " does not sum to zero");
}

namespace {
std::vector<Rat> to_rats(const std::vector<long>& v) {
  std::vector<Rat> out;
  out.reserve(v.size());
  for (long a : v) out.emplace_back(a);
  return out;
}
}  // namespace

ParamVector::ParamVector(Shape shape, const std::vector<long>& entries) : ParamVector(shape, to_rats(entries)) {}

ParamVector ParamVector::shifted(int i, int direction) const {
  if (i < 1 || i > shape_.last()) throw PreconditionError("shift index out of range");
  std::vector<Rat> e = entries_;
  e[0] -= direction;
  e[static_cast<std::size_t>(i)] += direction;
  return ParamVector(shape_, std::move(e));
}

ParamVector ParamVector::negated() const {
  std::vector<Rat> e = entries_;
  for (Rat& a : e) a = -a;
  return ParamVector(shape_, std::move(e));
}

bool ParamVector::all_nonzero() const {
  for (const Rat& a : entries_)
    if (sgn(a) == 0) return false;
  return true;
}

bool ParamVector::is_integral() const {
  for (const Rat& a : entries_)
    if (a.get_den() != 1) return false;
  return true;
}

void ParamVector::require_nonzero(const char* context) const {
  for (std::size_t j = 0; j < entries_.size(); ++j)
    if (sgn(entries_[j]) == 0)
      throw PreconditionError(std::string(context) + ": alpha_" + std::to_string(j) + " = 0 in " + str());
}

std::string ParamVector::str() const {
  std::string s = "(";
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (j) s += ",";
    s += to_exact_string(entries_[j]);
  }
  return s + ")";
}

}  // namespace hgm
