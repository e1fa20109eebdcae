#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "steklov/error.hpp"
#include "steklov/spectrum.hpp"

using namespace steklov;

TEST_CASE("flattened access repeats multiplicities") {
  const SpectrumTable t(SpectrumKind::Steklov, {{0.0, 1, 0}, {1.0, 3, 1}, {2.0, 5, 2}});
  CHECK(t.flattened_size() == 9);
  CHECK(t.at(0) == 0.0);
  CHECK(t.at(3) == 1.0);
  CHECK(t.at(4) == 2.0);
  CHECK(t.entry_for(8).mode == 2);
  CHECK_THROWS_AS(t.at(9), std::out_of_range);
  CHECK(t.flatten(5) == std::vector<double>{0, 1, 1, 1, 2});
  CHECK(t.flatten(100).size() == 9);
  const auto tr = t.truncated(6);
  CHECK(tr.flattened_size() == 6);
  CHECK(tr.entries().back().multiplicity == 2);
  CHECK(to_string(t.kind()) == "steklov");
}

TEST_CASE("invariants are enforced") {
  CHECK_THROWS_AS(SpectrumTable(SpectrumKind::Steklov, {}), Error);
  CHECK_THROWS_AS(SpectrumTable(SpectrumKind::Steklov, {{0.1, 1, 0}}), Error);
  CHECK_THROWS_AS(SpectrumTable(SpectrumKind::Steklov, {{0.0, 2, 0}}), Error);
  CHECK_THROWS_AS(SpectrumTable(SpectrumKind::Steklov, {{0.0, 1, 0}, {2.0, 1, 1}, {1.0, 1, 2}}), Error);
  CHECK_THROWS_AS(SpectrumTable(SpectrumKind::Steklov, {{0.0, 1, 0}, {2.0, 0, 1}}), Error);
}
