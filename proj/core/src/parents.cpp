#include "axbench/parents.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "axbench/errors.hpp"

namespace axbench {

ParentDescriptor ParentDescriptor::discrete(std::string name, std::uint32_t cardinality) {
  ParentDescriptor d;
  d.name = std::move(name);
  d.kind = ParentKind::discrete;
  d.cardinality = cardinality;
  return d;
}

ParentDescriptor ParentDescriptor::continuous(std::string name, double lower, double upper) {
  ParentDescriptor d;
  d.name = std::move(name);
  d.kind = ParentKind::continuous;
  d.lower = lower;
  d.upper = upper;
  return d;
}

bool ParentDescriptor::contains(double value) const noexcept {
  if (!std::isfinite(value)) return false;
  if (is_discrete()) {
    return value >= 0.0 && value < static_cast<double>(cardinality) && std::floor(value) == value;
  }
  return value >= lower && value <= upper;
}

ParentSpace::ParentSpace(std::vector<ParentDescriptor> parents) : parents_(std::move(parents)) {
  std::set<std::string> seen;
  for (const auto& p : parents_) {
    if (p.name.empty()) throw ContractError("parent name must not be empty");
    if (!seen.insert(p.name).second) throw ContractError("duplicate parent name '" + p.name + "'");
    if (p.is_discrete()) {
      if (p.cardinality < 2) {
        throw ContractError("discrete parent '" + p.name + "' needs cardinality >= 2");
      }
    } else if (!(std::isfinite(p.lower) && std::isfinite(p.upper) && p.lower < p.upper)) {
      throw ContractError("continuous parent '" + p.name + "' needs finite lower < upper");
    }
  }
}

std::optional<std::size_t> ParentSpace::find(std::string_view name) const noexcept {
  for (std::size_t k = 0; k < parents_.size(); ++k) {
    if (parents_[k].name == name) return k;
  }
  return std::nullopt;
}

std::size_t ParentSpace::index_of(std::string_view name) const {
  if (auto k = find(name)) return *k;
  throw ContractError("unknown parent '" + std::string(name) + "' in space " + to_string());
}

std::string ParentSpace::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < parents_.size(); ++k) {
    const auto& p = parents_[k];
    if (k) os << ", ";
    os << p.name;
    if (p.is_discrete()) {
      os << ":discrete(" << p.cardinality << ')';
    } else {
      os << ":continuous(" << p.lower << ", " << p.upper << ')';
    }
  }
  os << '}';
  return os.str();
}

ParentAssignment ParentAssignment::with(std::size_t k, double value) const {
  if (k >= values_.size()) {
    throw ContractError("parent index " + std::to_string(k) + " out of range for assignment of size " +
                        std::to_string(values_.size()));
  }
  auto copy = values_;
  copy[k] = value;
  return ParentAssignment(std::move(copy));
}

void ParentAssignment::validate(const ParentSpace& space) const {
  if (values_.size() != space.size()) {
    throw ContractError("assignment has " + std::to_string(values_.size()) + " values but space " +
                        space.to_string() + " has " + std::to_string(space.size()) + " parents");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!space[k].contains(values_[k])) {
      std::ostringstream os;
      os << "value " << values_[k] << " outside the domain of parent '" << space[k].name << "'";
      throw ContractError(os.str());
    }
  }
}

bool ParentAssignment::conforms(const ParentSpace& space) const noexcept {
  if (values_.size() != space.size()) return false;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!space[k].contains(values_[k])) return false;
  }
  return true;
}

}  // namespace axbench
