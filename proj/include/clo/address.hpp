#pragma once

// Concrete names for elements of the order a term denotes.

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "clo/term.hpp"

namespace clo {

using Rational = boost::rational<std::int64_t>;

struct SumIndex {
  std::size_t index;
  bool operator==(const SumIndex&) const = default;
};
/// Copy k of an omega-sum, counted from the left (k = 0 is the first copy).
struct OmegaIndex {
  std::uint64_t copy;
  bool operator==(const OmegaIndex&) const = default;
};
/// Copy k of an omega*-sum, counted from the right (k = 0 is the last copy).
struct OmegaStarIndex {
  std::uint64_t copy;
  bool operator==(const OmegaStarIndex&) const = default;
};
struct ZetaIndex {
  std::int64_t copy;
  bool operator==(const ZetaIndex&) const = default;
};
/// A copy of `branch` placed at rational `position` of the shuffle's dense index.
struct ShufflePos {
  Rational position;
  Term branch;
  bool operator==(const ShufflePos&) const = default;
};

using AddressStep = std::variant<SumIndex, OmegaIndex, OmegaStarIndex, ZetaIndex, ShufflePos>;

struct Address {
  std::vector<AddressStep> path;

  Address then(AddressStep step) const;
  Address prefixed(AddressStep step) const;
  bool operator==(const Address&) const = default;
};

enum class Order { LT, EQ, GT };

std::string to_string(const AddressStep& step);
std::string to_string(const Address& a);

/// Throws AddressError unless `a` names an element (ends at a Pt node).
void validate(Term t, const Address& a);

/// The color set of the addressed element.
ColorSet color_at(Term t, const Address& a);

/// Order of the denoted elements. Throws AddressError on invalid addresses.
Order compare(Term t, const Address& x, const Address& y);

/// Canonical terms for the elements strictly below / above the address.
Term left_of(Term t, const Address& a);
Term right_of(Term t, const Address& a);
/// Elements strictly between x and y; requires compare(t, x, y) == LT.
Term between(Term t, const Address& x, const Address& y);

}  // namespace clo
