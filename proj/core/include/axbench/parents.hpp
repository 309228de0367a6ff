#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace axbench {

enum class ParentKind : std::uint8_t { discrete = 0, continuous = 1 };

struct ParentDescriptor {
  std::string name;
  ParentKind kind = ParentKind::discrete;
  std::uint32_t cardinality = 0;  // discrete only
  double lower = 0.0;             // continuous only
  double upper = 0.0;

  static ParentDescriptor discrete(std::string name, std::uint32_t cardinality);
  static ParentDescriptor continuous(std::string name, double lower, double upper);

  bool is_discrete() const noexcept { return kind == ParentKind::discrete; }
  /// Discrete: an integer class index in [0, cardinality). Continuous: [lower, upper].
  bool contains(double value) const noexcept;

  friend bool operator==(const ParentDescriptor&, const ParentDescriptor&) = default;
};

/// Ordered set of parents of the observation.
class ParentSpace {
 public:
  ParentSpace() = default;
  /// Throws ContractError on duplicate/empty names, cardinality < 2 or lower >= upper.
  explicit ParentSpace(std::vector<ParentDescriptor> parents);

  std::size_t size() const noexcept { return parents_.size(); }
  bool empty() const noexcept { return parents_.empty(); }
  const ParentDescriptor& operator[](std::size_t k) const { return parents_.at(k); }
  std::span<const ParentDescriptor> descriptors() const noexcept { return parents_; }

  std::optional<std::size_t> find(std::string_view name) const noexcept;
  /// Throws ContractError when absent.
  std::size_t index_of(std::string_view name) const;

  std::string to_string() const;

  friend bool operator==(const ParentSpace&, const ParentSpace&) = default;

 private:
  std::vector<ParentDescriptor> parents_;
};

/// One value per parent; discrete values are stored as integral doubles.
class ParentAssignment {
 public:
  ParentAssignment() = default;
  explicit ParentAssignment(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_.at(k); }
  std::span<const double> values() const noexcept { return values_; }

  /// Copy with coordinate k replaced.
  ParentAssignment with(std::size_t k, double value) const;

  /// Throws ContractError unless the assignment conforms to `space`.
  void validate(const ParentSpace& space) const;
  bool conforms(const ParentSpace& space) const noexcept;

  friend bool operator==(const ParentAssignment&, const ParentAssignment&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace axbench
