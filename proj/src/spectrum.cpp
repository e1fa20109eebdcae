#include "steklov/spectrum.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "steklov/error.hpp"

namespace steklov {

std::string_view to_string(SpectrumKind kind) noexcept {
  return kind == SpectrumKind::Steklov ? "steklov" : "boundary_laplacian";
}

SpectrumTable::SpectrumTable(SpectrumKind kind, std::vector<SpectrumEntry> entries)
    : kind_(kind), entries_(std::move(entries)) {
  if (entries_.empty()) throw Error("spectrum table is empty");
  if (entries_.front().value != 0.0 || entries_.front().multiplicity != 1)
    throw Error("spectrum table must start with the simple eigenvalue 0");
  cumulative_.reserve(entries_.size());
  std::size_t total = 0;
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    if (entries_[e].multiplicity == 0) throw Error("spectrum entry with zero multiplicity");
    if (e > 0 && entries_[e].value < entries_[e - 1].value)
      throw Error("spectrum values not sorted at entry " + std::to_string(e));
    total += entries_[e].multiplicity;
    cumulative_.push_back(total);
  }
}

std::size_t SpectrumTable::entry_index(std::size_t j) const {
  if (j >= flattened_size())
    throw std::out_of_range("spectrum index " + std::to_string(j) + " beyond table of " +
                            std::to_string(flattened_size()));
  return static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), j) - cumulative_.begin());
}

double SpectrumTable::at(std::size_t j) const { return entries_[entry_index(j)].value; }

const SpectrumEntry& SpectrumTable::entry_for(std::size_t j) const {
  return entries_[entry_index(j)];
}

std::vector<double> SpectrumTable::flatten(std::size_t count) const {
  count = std::min(count, flattened_size());
  std::vector<double> out;
  out.reserve(count);
  for (const SpectrumEntry& e : entries_) {
    for (std::size_t m = 0; m < e.multiplicity && out.size() < count; ++m) out.push_back(e.value);
    if (out.size() == count) break;
  }
  return out;
}

SpectrumTable SpectrumTable::truncated(std::size_t count) const {
  count = std::max<std::size_t>(1, std::min(count, flattened_size()));
  std::vector<SpectrumEntry> kept;
  std::size_t total = 0;
  for (const SpectrumEntry& e : entries_) {
    if (total >= count) break;
    SpectrumEntry copy = e;
    copy.multiplicity = std::min(e.multiplicity, count - total);
    total += copy.multiplicity;
    kept.push_back(copy);
  }
  return SpectrumTable(kind_, std::move(kept));
}

}  // namespace steklov
