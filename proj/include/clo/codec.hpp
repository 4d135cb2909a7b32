#pragma once

// Coding finite relational structures as linear orders: each node x of a
// truncated index tree contributes the block eta + fin(2 + k) + eta, where k
// indexes the atomic type of the tuple labelling x.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clo/engine.hpp"
#include "clo/term.hpp"

namespace clo {

struct RelationSymbol {
  std::string name;
  int arity = 0;
  bool operator==(const RelationSymbol&) const = default;
};

using Language = std::vector<RelationSymbol>;
using Tuple = std::vector<int>;

struct FinStructure {
  int universe = 0;
  Language language;
  std::vector<std::set<Tuple>> tables;  // one per relation symbol
  bool operator==(const FinStructure&) const = default;
};

/// {"universe":u,"relations":[{"name":..,"arity":..,"tuples":[[..],..]}]}
FinStructure parse_structure(const std::string& json_text);
/// Canonical serialization (sorted tuples, fixed key order, no whitespace).
std::string to_json(const FinStructure& s);
/// Throws PreconditionError when a tuple is out of range or has the wrong arity.
void validate(const FinStructure& s);

/// Complete atomic type in variables x1..xn: an equality pattern as a
/// restricted growth string, plus the truth of each relation on every tuple
/// of equality classes (relation-major, tuples in lexicographic order).
struct AtomicType {
  int arity = 0;
  std::vector<int> classes;  // classes[i]: class of x_{i+1}, first occurrences increasing
  std::vector<bool> facts;
  bool operator==(const AtomicType&) const = default;
  auto operator<=>(const AtomicType&) const = default;
};

std::string to_string(const AtomicType& p, const Language& lang);

/// TY_n in canonical order. Throws GuardError for n > 3 or too many types.
std::vector<AtomicType> atomic_types(const Language& lang, int n);

struct TypeIndexing {
  Language language;
  int maxN = 0;
  std::vector<std::uint64_t> eTable;           // e(0..maxN+1)
  std::vector<std::vector<AtomicType>> bands;  // TY_0..TY_maxN
  /// Throws PreconditionError for a type outside the indexed bands.
  std::uint64_t k(const AtomicType& p) const;
};

TypeIndexing type_indexing(const Language& lang, int maxN);

/// The atomic type of a tuple in A.
AtomicType otp(const FinStructure& a, const Tuple& tuple);

/// eta + fin(2 + k) + eta.
Term j_block(std::uint64_t k);

enum class Layout {
  Canonical,   // round robin over children ordered by their own codes
  RoundRobin,  // round robin over children in label order
  Dense,       // children as one shuffle
};

struct TruncParams {
  int depth = 2;
  int mix = 4;
  Layout layout = Layout::Canonical;
};

struct IndexNode {
  Tuple label;
  std::size_t position = 0;
};

inline constexpr std::size_t kIndexGuard = 4096;

/// Preorder of the truncated tree: each node, then its child labels in
/// `mix` round-robin rounds, each followed by its own block.
std::vector<IndexNode> build_index_order(int universe, TruncParams p);

Term encode(const FinStructure& a, TruncParams p);

/// Exhaustive search for an isomorphism (universe <= 4).
bool isomorphic(const FinStructure& a, const FinStructure& b);

/// All structures over the language on the given universe, one per isomorphism class.
std::vector<FinStructure> structures_up_to_iso(const Language& lang, int universe);

struct ReductionReport {
  bool isoOracle = false;
  bool codesEquivalentAtBudget = false;
  std::optional<Rank> distinguishingRank;
  bool consistent = false;
};

ReductionReport verify_reduction(Engine& engine, const FinStructure& a, const FinStructure& b, TruncParams p,
                                 Rank rankBudget);

}  // namespace clo
