#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace steklov {

enum class SpectrumKind { Steklov, BoundaryLaplacian };

std::string_view to_string(SpectrumKind kind) noexcept;

struct SpectrumEntry {
  double value;
  std::size_t multiplicity;
  std::size_t mode;  // spherical-harmonic degree, or eigenvector index for FEM tables
};

/// Sorted eigenvalue list with multiplicities, flattened index j starts at 0.
///
/// Invariants: values nondecreasing, entry 0 is exactly 0 with multiplicity 1,
/// every multiplicity positive.
class SpectrumTable {
public:
  /// Throws steklov::Error when an invariant fails.
  SpectrumTable(SpectrumKind kind, std::vector<SpectrumEntry> entries);

  SpectrumKind kind() const noexcept { return kind_; }
  const std::vector<SpectrumEntry>& entries() const noexcept { return entries_; }

  /// Number of flattened eigenvalues (sum of multiplicities).
  std::size_t flattened_size() const noexcept { return cumulative_.empty() ? 0 : cumulative_.back(); }

  /// sigma_j / lambda_j; throws std::out_of_range beyond flattened_size().
  double at(std::size_t j) const;
  const SpectrumEntry& entry_for(std::size_t j) const;

  /// First `count` flattened values (all when count exceeds the table).
  std::vector<double> flatten(std::size_t count) const;

  /// Copy truncated to the first `count` flattened values; the last entry's multiplicity is clipped.
  SpectrumTable truncated(std::size_t count) const;

private:
  std::size_t entry_index(std::size_t j) const;

  SpectrumKind kind_;
  std::vector<SpectrumEntry> entries_;
  std::vector<std::size_t> cumulative_;  // cumulative_[e] = flattened count through entry e
};

}  // namespace steklov
