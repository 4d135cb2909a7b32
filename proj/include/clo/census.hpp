#pragma once

// The exemplar theories as parametric families of truncated countable models,
// with rank-budgeted invariants and pairwise verification.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clo/analysis.hpp"
#include "clo/engine.hpp"
#include "clo/term.hpp"

namespace clo {

enum class FamilyKind { Zeta, Eta, Tn, StepPoints, FullRationals };

struct ExampleFamily {
  FamilyKind kind = FamilyKind::Zeta;
  int n = 3;      // Tn: number of models
  int k0 = 1;     // StepPoints: integer cuts in the window
  int n0 = 3;     // StepPoints: named points k + 1/m per block (m = 2..n0+1)
  int depth = 1;  // FullRationals: cut slots

  static ExampleFamily zeta() { return {FamilyKind::Zeta}; }
  static ExampleFamily eta() { return {FamilyKind::Eta}; }
  static ExampleFamily tn(int n) { return {FamilyKind::Tn, n}; }
  static ExampleFamily step_points(int k0, int n0) { return {FamilyKind::StepPoints, 3, k0, n0}; }
  static ExampleFamily full_rationals(int depth) { return {FamilyKind::FullRationals, 3, 1, 3, depth}; }

  std::string name() const;
  /// Throws GuardError outside n <= 8, k0 <= 4, n0 <= 6, depth <= 16.
  void check() const;
};

struct ExpectedClass {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<int> models;
};
ExpectedClass expected_class(const ExampleFamily& f);
std::string to_string(const ExpectedClass& c);

struct TruncatedModel {
  Term term;
  std::map<std::string, std::string> constantMap;  // constant name -> marker color
  std::string label;                                // how the model was chosen
};

/// Shapes an irrational cut can be realized with in a dense order.
inline const std::vector<std::string> kCompletionShapes{"1", "η", "1+η", "η+1", "1+η+1"};

struct Completion {
  int slot = 0;
  std::string shape;  // one of kCompletionShapes
};

/// Tn: trunc+1 named constants; one model per profile "cofinal", "gap", "P<j>".
/// StepPoints: one model per subset of realized cuts. FullRationals: one model
/// per assignment of a shape (or nothing) to each slot, up to a guard.
std::vector<TruncatedModel> generate_models(const ExampleFamily& f, int trunc);

TruncatedModel tn_model(int n, int trunc, const std::string& profile);
TruncatedModel step_points_model(int k0, int n0, const std::vector<int>& realizedCuts);
/// Repeated choices collapse; conflicting shapes for one slot throw PreconditionError.
TruncatedModel full_rationals_model(int depth, const std::vector<Completion>& choices);

struct ModelInvariant {
  std::vector<std::string> parts;  // sorted, duplicate-free
  std::string to_string() const;
  bool operator==(const ModelInvariant&) const = default;
};

ModelInvariant invariant(Engine& engine, const ExampleFamily& f, const TruncatedModel& m, Rank n);

struct FamilyReport {
  ExampleFamily family;
  int trunc = 0;
  Rank rank = 0;
  std::size_t generated = 0;
  std::size_t modelCount = 0;  // ≡_rank classes among the generated models
  ExpectedClass expectedClass;
  bool invariantInjective = false;
  bool pass = false;
  std::vector<std::string> labels;
  std::vector<std::string> invariants;
  std::vector<std::vector<std::optional<Rank>>> pairMatrix;  // distinguishing ranks
};

/// `parallel` spreads the pairwise engine runs over hardware threads.
FamilyReport verify_family(Engine& engine, const ExampleFamily& f, int trunc, Rank n, bool parallel = false);

}  // namespace clo
