#pragma once

// The hierarchy M_n of countable orders built from one-point orders by
// binary sums and shuffles, and budgeted categoricity checks.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clo/engine.hpp"
#include "clo/term.hpp"

namespace clo {

struct MnCert {
  enum class Rule { Point, Sum, Shuffle };
  Rule rule = Rule::Point;
  Term term;
  int level = 0;  // derivation height
  std::vector<std::shared_ptr<const MnCert>> parts;
};

using MnCertPtr = std::shared_ptr<const MnCert>;

/// Minimal-height derivation of t, absent for Empty or when an
/// omega, omega* or zeta node occurs.
MnCertPtr syntactic_cert(Term t);
std::optional<int> syntactic_rank(Term t);

/// True when the derivation obeys the closure rules and its levels are heights.
bool valid_cert(const MnCertPtr& cert);

/// Size of the level-n enumeration over an alphabet of k colors:
/// count(0) = 2^k, count(n+1) = m + m^2 + (2^m - 1). Saturates at UINT64_MAX.
std::uint64_t mn_count(int k, int n);

inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;

/// All derivations of height <= n over colors a, b, c (first k of them):
/// level n-1 members, then all ordered sums, then all nonempty shuffles.
/// The list is not deduplicated, so its length is exactly mn_count(k, n).
std::vector<Term> enumerate_Mn(int k, int n);
/// Same, over an explicit alphabet (points colored by every subset).
std::vector<Term> enumerate_Mn(const ColorSet& alphabet, int n);

struct CatCategorical {
  MnCertPtr cert;  // null for the empty order
  int viaRank = 0;
};
struct CatCandidate {
  Term witness;
  Rank atRank = 0;
  int level = 0;
};
struct CatNotCategorical {
  std::string evidence;
};
struct CatUnknown {};

using CatVerdict = std::variant<CatCategorical, CatCandidate, CatNotCategorical, CatUnknown>;

/// Syntactic certificate first, then a search for an enumerated M-member
/// equivalent at rankBudget, then the structural non-categoricity tests.
CatVerdict is_categorical(Engine& engine, Term t, Rank rankBudget, int depthBudget);

/// The enumerated M-member of least level equivalent to t at rank n, if the
/// enumeration over t's colors stays within the guard.
std::optional<CatCandidate> find_candidate(Engine& engine, Term t, Rank n, int depthBudget);

}  // namespace clo
