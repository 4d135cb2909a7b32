#pragma once

// Rank-n analysis of a term: element classes (rank-n 1-types), definable
// convex sets, self-additivity, condensation, convex types, splicing and
// the complexity classifier.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clo/address.hpp"
#include "clo/categoricity.hpp"
#include "clo/engine.hpp"
#include "clo/term.hpp"

namespace clo {

struct OrbitRep {
  Address address;
  bool unbounded = false;  // stands for infinitely many elements
  std::string family;      // description of the unbounded parameter
};

struct OneTypeClass {
  Characteristic leftChar;
  ColorSet colors;
  Characteristic rightChar;
  std::vector<OrbitRep> members;
};

using ClassSet = std::vector<std::size_t>;  // sorted class indices

struct ConvexNType {
  std::size_t id = 0;
  ClassSet memberClasses;
  bool isolatedAtRank = false;
  bool limit = false;
  std::optional<Term> descriptor;  // local theory of a limit type
  std::string limitKind;           // "ω-tail" or "ω*-tail"
};

struct SampleElement {
  Address address;
  std::size_t cls = 0;
};

struct Condensation {
  Rank rank = 0;
  std::vector<SampleElement> sample;
  std::vector<std::vector<std::size_t>> classes;  // partition of sample indices, in order
  std::optional<std::size_t> count;               // absent: infinitely many classes
  std::vector<Term> galaxies;                     // families collapsing into one class
  bool stable = false;                            // same count at rank - 1
};

/// One rank-n analysis of a term. Construction builds the orbit tree; the
/// remaining queries are computed lazily.
class Analysis {
 public:
  Analysis(Engine& engine, Term t, Rank n);
  ~Analysis();
  Analysis(Analysis&&) noexcept;

  Term term() const;
  Rank rank() const;
  const std::vector<OneTypeClass>& classes() const;
  /// Class of the element with the given cut triple, if it occurs.
  std::optional<std::size_t> find_class(std::uint32_t left, const ColorSet& colors, std::uint32_t right) const;

  /// Convex unions of classes, including the empty set and the full set.
  const std::vector<ClassSet>& definable_convex_sets();
  bool is_convex(const ClassSet& s) const;
  /// Largest proper definable final (initial) segment.
  ClassSet largest_proper_final();
  ClassSet largest_proper_initial();

  bool self_additive();
  const std::vector<ConvexNType>& convex_types();
  Condensation condensation();

  /// Top-level sum children (or the whole term as child 0) touched by the classes.
  std::vector<std::size_t> region_of(const ClassSet& s) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<OneTypeClass> one_types(Engine& engine, Term t, Rank n);
std::vector<ClassSet> definable_convex_sets(Engine& engine, Term t, Rank n);
/// Throws PreconditionError for Empty or one-point terms.
bool self_additive_at(Engine& engine, Term t, Rank n);
/// Throws PreconditionError unless t is self-additive at rank n.
Condensation condensation_at(Engine& engine, Term t, Rank n);
std::vector<ConvexNType> convex_types(Engine& engine, Term t, Rank n);

struct ConvexBlock {
  Term left, block, right;
};

/// Locates `block` as a run of consecutive top-level sum parts of t.
std::optional<ConvexBlock> find_block(Term t, Term block, std::size_t occurrence = 0);
/// left + d + right; throws PreconditionError unless left + block + right == t.
Term splice(Term t, const ConvexBlock& cut, Term d);
/// Deletes the regions of the given convex types (ids from convex_types).
Term drop_convex(Engine& engine, Term t, Rank n, const std::vector<std::size_t>& typeIds);

struct Budgets {
  Rank rankBudget = 6;
  int depthBudget = 3;
};

enum class VerdictKind { Categorical, FiniteModels, RealsLike, SetsOfRealsLike, BorelComplete, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<int> models;  // FiniteModels only
  std::string certificate;
  Budgets budgets;
};

std::string verdict_name(VerdictKind k);

/// A budgeted proof that th(t) is not categorical (a Borel completeness
/// certificate), or absent.
std::optional<std::string> noncategorical_certificate(Engine& engine, Term t, Budgets budgets);

Verdict classify(Engine& engine, Term t, Budgets budgets);

}  // namespace clo
