#pragma once

// Rank-bounded elementary equivalence for term-presented orders.
//
// A rank-n class is identified with the set of triples
// (class_{n-1}(left), colors, class_{n-1}(right)) over all ways of splitting
// the order at one element: Spoiler's first move splits both orders at the
// chosen points and the rest of the game is played independently on the two
// sides. Classes are interned per engine, so equivalence is id equality.

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "clo/address.hpp"
#include "clo/term.hpp"

namespace clo {

using Rank = int;

struct SplitTriple {
  Term left;
  ColorSet point;
  Term right;
  Address address;  // one concrete element realizing the split

  /// Address is ignored: two splits are the same when the parts agree.
  bool same_parts(const SplitTriple& o) const {
    return left == o.left && point == o.point && right == o.right;
  }
};

struct Characteristic {
  Rank rank = 0;
  std::uint32_t classId = 0;
  bool operator==(const Characteristic&) const = default;
};

struct EngineOptions {
  std::optional<std::uint64_t> cap_override;
  int cap_shift = 0;  // cap(n) = 2^(n + cap_shift)
  Rank max_rank = 8;
  std::optional<std::size_t> memo_limit;
  // false: compute classes by recursing on term splits only (slow, literal).
  bool compositional = true;
};

enum class ReplyOutcome { ColorMismatch, Left, Right };

struct GameNode;

struct GameReply {
  SplitTriple reply;
  ReplyOutcome outcome = ReplyOutcome::ColorMismatch;
  std::shared_ptr<const GameNode> next;  // Left/Right only
};

/// Spoiler's move in the game on (a, b) with `rounds` rounds left. Every
/// split of the other order is listed as a reply with a refutation; an
/// empty reply list means the other order is empty.
struct GameNode {
  Term a, b;
  Rank rounds = 0;
  int side = 0;  // 0: Spoiler plays in a, 1: in b
  SplitTriple move;
  std::vector<GameReply> replies;
};

using GameTranscript = std::shared_ptr<const GameNode>;

class Engine {
 public:
  explicit Engine(EngineOptions opts = {});
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const EngineOptions& options() const { return opts_; }
  std::uint64_t cap(Rank n) const;

  std::vector<SplitTriple> splits(Term t, Rank n);

  Characteristic n_theory(Term t, Rank n);
  bool ef_equiv(Term a, Term b, Rank n);
  /// Least n <= max with a, b inequivalent at rank n.
  std::optional<Rank> distinguishing_rank(Term a, Term b, Rank max);
  /// Least n0 <= budget such that the verdict is the same at every rank in [n0, budget].
  Rank stable_from(Term a, Term b, Rank budget);

  /// Spoiler strategy; throws PreconditionError when a and b are equivalent at rank n.
  GameTranscript witness(Term a, Term b, Rank n);

  /// Class ids for the parts of a decomposition, combined by sum composition.
  std::uint32_t class_of(Term t, Rank n);
  std::uint32_t compose(std::uint32_t x, std::uint32_t y, Rank n);
  std::uint32_t empty_class(Rank n);

  std::size_t class_count() const;
  std::size_t memo_size() const;
  void clear_memo();

 private:
  using Triple = std::array<std::uint32_t, 3>;  // left class, color id, right class
  struct ClassInfo {
    Rank rank;
    std::vector<Triple> triples;
  };

  void check_rank(Rank n) const;
  std::uint32_t intern(Rank n, std::vector<Triple> triples);
  const std::vector<Triple>& triples_of(std::uint32_t id) const;
  std::uint32_t project(std::uint32_t id, Rank n);
  std::uint32_t power(std::uint32_t x, std::uint64_t k, Rank n);
  std::uint32_t compute_compositional(Term t, Rank n);
  std::uint32_t compute_literal(Term t, Rank n);
  void maybe_trim();
  using WitnessMemo = std::map<std::tuple<std::uint64_t, std::uint64_t, Rank>, GameTranscript>;
  GameTranscript witness_rec(Term a, Term b, Rank n, WitnessMemo& seen);
  Triple triple_of(const SplitTriple& s, Rank n);

  EngineOptions opts_;
  mutable std::mutex mu_;
  struct KeyHash {
    std::size_t operator()(const ClassInfo& k) const;
  };
  struct KeyEq {
    bool operator()(const ClassInfo& a, const ClassInfo& b) const {
      return a.rank == b.rank && a.triples == b.triples;
    }
  };

  std::deque<ClassInfo> classes_;
  std::unordered_map<ClassInfo, std::uint32_t, KeyHash, KeyEq> class_index_;
  std::unordered_map<std::uint64_t, std::uint32_t> term_memo_;    // (term id, rank)
  std::unordered_map<std::uint64_t, std::uint32_t> compose_memo_;  // (x, y)
  std::unordered_map<std::uint32_t, std::uint32_t> project_memo_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const std::vector<SplitTriple>>> split_memo_;
};

/// Replays a transcript using only split enumeration; true when every
/// Duplicator reply is refuted and every branch ends in a mismatch.
bool check_transcript(Engine& engine, const GameTranscript& tr);

}  // namespace clo
