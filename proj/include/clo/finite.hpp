#pragma once

// Explicit finite colored orders and a brute-force game solver used to
// cross-check the engine.

#include <cstddef>
#include <vector>

#include "clo/engine.hpp"
#include "clo/term.hpp"

namespace clo {

struct FiniteOrder {
  std::size_t size = 0;
  std::vector<ColorSet> coloring;  // element i has coloring[i]
  bool operator==(const FiniteOrder&) const = default;
};

/// Throws PreconditionError when t contains an infinite node.
FiniteOrder finite_expand(Term t);

/// The term pt[c0] + pt[c1] + ... for an explicit order.
Term to_term(const FiniteOrder& o);

struct OracleCaps {
  std::size_t max_size = 8;
  Rank max_rank = 4;
};

/// Duplicator wins the n-round game, by exhaustive search. Throws GuardError past the caps.
bool ef_oracle(const FiniteOrder& a, const FiniteOrder& b, Rank n, OracleCaps caps = {});

}  // namespace clo
