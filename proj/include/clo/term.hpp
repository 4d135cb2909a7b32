#pragma once

// Finite presentations of countable colored linear orders.
//
// Terms are hash-consed: structurally equal terms share one immutable node,
// so equality and hashing are O(1) and values are safe to share between
// threads. Nodes live for the lifetime of the process.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clo {

/// Finite set of color identifiers, interned. Equality is identity.
class ColorSet {
 public:
  ColorSet();
  ColorSet(std::initializer_list<std::string> names);
  explicit ColorSet(std::vector<std::string> names);

  const std::vector<std::string>& names() const;
  std::uint32_t id() const { return id_; }
  bool empty() const { return names().empty(); }
  std::size_t size() const { return names().size(); }
  bool contains(std::string_view name) const;
  ColorSet united(const ColorSet& other) const;

  /// "a b c" (space separated, sorted).
  std::string to_string() const;

  friend bool operator==(const ColorSet& a, const ColorSet& b) { return a.id_ == b.id_; }
  /// Lexicographic on sorted names; independent of interning order.
  friend std::strong_ordering operator<=>(const ColorSet& a, const ColorSet& b);

 private:
  std::uint32_t id_;
};

enum class Kind : std::uint8_t { Empty, Pt, Sum, Omega, OmegaStar, Zeta, Shuffle };

std::string_view kind_name(Kind k);

namespace detail {
struct Node;
}

class Term {
 public:
  /// The empty order.
  Term();

  Kind kind() const;
  bool is_empty() const { return kind() == Kind::Empty; }
  const ColorSet& colors() const;          // Pt only
  std::span<const Term> children() const;  // Sum parts, Shuffle args, or the single body
  Term body() const;                       // Omega, OmegaStar, Zeta

  std::uint64_t id() const;
  std::size_t hash() const;
  std::size_t depth() const;
  std::size_t node_count() const;
  bool is_canonical() const;
  /// True when no Omega/OmegaStar/Zeta/Shuffle node occurs.
  bool is_finite() const;
  /// Number of points; meaningful only when is_finite().
  std::size_t finite_size() const;

  // Canonicalizing constructors. Arguments are expected to be canonical.
  static Term empty();
  static Term point(ColorSet colors);
  static Term sum(std::vector<Term> parts);
  static Term sum(Term a, Term b) { return sum(std::vector<Term>{a, b}); }
  static Term omega(Term body);
  static Term omega_star(Term body);
  static Term zeta(Term body);
  static Term shuffle(std::vector<Term> args);

  /// Builds a node exactly as given (no flattening or dedup). Only arity is
  /// checked: Sum needs >= 2 parts, Shuffle >= 1 arg, the others one body.
  static Term raw(Kind kind, std::vector<Term> children, ColorSet colors = {});

  friend bool operator==(Term a, Term b) { return a.node_ == b.node_; }

 private:
  explicit Term(const detail::Node* n) : node_(n) {}
  static Term intern(Kind kind, ColorSet colors, std::vector<Term> children);
  const detail::Node* node_;
};

struct TermHash {
  std::size_t operator()(Term t) const { return t.hash(); }
};

/// Fixed total structural order (independent of interning order).
std::strong_ordering structural_compare(Term a, Term b);

struct StructuralLess {
  bool operator()(Term a, Term b) const { return structural_compare(a, b) < 0; }
};

Term canonicalize(Term t);

/// The k-fold sum a + ... + a (Empty for k = 0).
Term repeat(Term a, std::uint64_t k);
/// fin(n): the n-element chain of uncolored points.
Term fin(std::uint64_t n);
Term eta();
Term omega();
Term zeta();

ColorSet colors_of(Term t);

/// Canonical text: parse(print(t)) == t for canonical t.
std::string print(Term t);

/// Parses and canonicalizes. Throws ParseError or ArityError.
Term parse(std::string_view text);

struct NamedTerm {
  std::string name;  // empty when the line was a bare term
  Term term;
};

/// Term files: one term per line, or "name = term"; '#' starts a comment.
std::vector<NamedTerm> parse_term_file(std::string_view contents);

/// Structural limits checked on construction (default depth 32).
struct TermLimits {
  std::size_t max_depth = 32;
  std::size_t max_nodes = std::size_t{1} << 22;
};
TermLimits term_limits();
void set_term_limits(TermLimits limits);

}  // namespace clo

template <>
struct std::hash<clo::Term> {
  std::size_t operator()(clo::Term t) const noexcept { return t.hash(); }
};
