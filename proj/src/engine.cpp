#include "clo/engine.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "clo/error.hpp"

namespace clo {

namespace {

std::uint64_t term_key(Term t, Rank n) { return (t.id() << 5) | static_cast<std::uint64_t>(n); }

struct PartsKey {
  std::uint64_t l, c, r;
  bool operator==(const PartsKey&) const = default;
};
struct PartsKeyHash {
  std::size_t operator()(const PartsKey& k) const {
    return (k.l * 0x9e3779b97f4a7c15ULL) ^ (k.c << 17) ^ (k.r * 0xff51afd7ed558ccdULL);
  }
};

class SplitSet {
 public:
  void add(SplitTriple s) {
    if (seen_.insert({s.left.id(), s.point.id(), s.right.id()}).second) out_.push_back(std::move(s));
  }
  std::vector<SplitTriple> take() { return std::move(out_); }

 private:
  std::unordered_set<PartsKey, PartsKeyHash> seen_;
  std::vector<SplitTriple> out_;
};

}  // namespace

std::size_t Engine::KeyHash::operator()(const ClassInfo& k) const {
  std::size_t h = static_cast<std::size_t>(k.rank) * 0x9e3779b97f4a7c15ULL;
  for (const auto& t : k.triples)
    for (auto v : t) h = (h ^ v) * 0x100000001b3ULL + (h >> 31);
  return h;
}

Engine::Engine(EngineOptions opts) : opts_(opts) {
  if (opts_.max_rank < 0 || opts_.max_rank > 30) throw BudgetError("max rank out of range");
  if (opts_.cap_override && *opts_.cap_override == 0) throw BudgetError("cap must be positive");
  intern(0, {});  // id 0: the single rank-0 class
}

std::uint64_t Engine::cap(Rank n) const {
  if (opts_.cap_override) return *opts_.cap_override;
  int e = std::clamp(n + opts_.cap_shift, 0, 40);
  return std::uint64_t{1} << e;
}

void Engine::check_rank(Rank n) const {
  if (n < 0) throw BudgetError("negative rank");
  if (n > opts_.max_rank)
    throw BudgetError("rank " + std::to_string(n) + " exceeds budget " + std::to_string(opts_.max_rank));
}

std::uint32_t Engine::intern(Rank n, std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  ClassInfo key{n, std::move(triples)};
  std::lock_guard lock(mu_);
  auto it = class_index_.find(key);
  if (it != class_index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(classes_.size());
  classes_.push_back(key);
  class_index_.emplace(std::move(key), id);
  return id;
}

const std::vector<Engine::Triple>& Engine::triples_of(std::uint32_t id) const {
  std::lock_guard lock(mu_);
  return classes_.at(id).triples;
}

std::uint32_t Engine::empty_class(Rank n) { return n == 0 ? 0 : intern(n, {}); }

std::size_t Engine::class_count() const {
  std::lock_guard lock(mu_);
  return classes_.size();
}

std::size_t Engine::memo_size() const {
  std::lock_guard lock(mu_);
  return term_memo_.size() + compose_memo_.size() + project_memo_.size() + split_memo_.size();
}

void Engine::clear_memo() {
  std::lock_guard lock(mu_);
  term_memo_.clear();
  compose_memo_.clear();
  project_memo_.clear();
  split_memo_.clear();
}

void Engine::maybe_trim() {
  if (!opts_.memo_limit) return;
  std::size_t size;
  {
    std::lock_guard lock(mu_);
    size = term_memo_.size() + compose_memo_.size() + project_memo_.size() + split_memo_.size();
  }
  if (size > *opts_.memo_limit) clear_memo();
}

// ---------------------------------------------------------------------------
// Splits

std::vector<SplitTriple> Engine::splits(Term t, Rank n) {
  check_rank(n);
  std::uint64_t key = term_key(t, n);
  {
    std::lock_guard lock(mu_);
    auto it = split_memo_.find(key);
    if (it != split_memo_.end()) return *it->second;
  }

  SplitSet out;
  switch (t.kind()) {
    case Kind::Empty:
      break;
    case Kind::Pt:
      out.add({Term::empty(), t.colors(), Term::empty(), Address{}});
      break;
    case Kind::Sum: {
      auto kids = t.children();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        std::vector<Term> before(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(i));
        std::vector<Term> after(kids.begin() + static_cast<std::ptrdiff_t>(i) + 1, kids.end());
        Term pre = Term::sum(before), post = Term::sum(after);
        for (auto& s : splits(kids[i], n))
          out.add({Term::sum(pre, s.left), s.point, Term::sum(s.right, post),
                   s.address.prefixed(SumIndex{i})});
      }
      break;
    }
    case Kind::Omega: {
      Term a = t.body();
      auto inner = splits(a, n);
      for (std::uint64_t k = 0; k <= cap(n); ++k) {
        Term pre = repeat(a, k);
        for (auto& s : inner)
          out.add({Term::sum(pre, s.left), s.point, Term::sum(s.right, t),
                   s.address.prefixed(OmegaIndex{k})});
      }
      break;
    }
    case Kind::OmegaStar: {
      Term a = t.body();
      auto inner = splits(a, n);
      for (std::uint64_t k = 0; k <= cap(n); ++k) {
        Term post = repeat(a, k);
        for (auto& s : inner)
          out.add({Term::sum(t, s.left), s.point, Term::sum(s.right, post),
                   s.address.prefixed(OmegaStarIndex{k})});
      }
      break;
    }
    case Kind::Zeta: {
      Term a = t.body();
      Term ws = Term::omega_star(a), w = Term::omega(a);
      for (auto& s : splits(a, n))
        out.add({Term::sum(ws, s.left), s.point, Term::sum(s.right, w), s.address.prefixed(ZetaIndex{0})});
      break;
    }
    case Kind::Shuffle:
      for (Term arg : t.children())
        for (auto& s : splits(arg, n))
          out.add({Term::sum(t, s.left), s.point, Term::sum(s.right, t),
                   s.address.prefixed(ShufflePos{Rational(0), arg})});
      break;
  }

  auto result = std::make_shared<const std::vector<SplitTriple>>(out.take());
  {
    std::lock_guard lock(mu_);
    split_memo_.emplace(key, result);
  }
  maybe_trim();
  return *result;
}

// ---------------------------------------------------------------------------
// Classes

std::uint32_t Engine::project(std::uint32_t id, Rank n) {
  if (n <= 1) return 0;
  {
    std::lock_guard lock(mu_);
    auto it = project_memo_.find(id);
    if (it != project_memo_.end()) return it->second;
  }
  std::vector<Triple> lower;
  for (const auto& [l, c, r] : triples_of(id)) lower.push_back({project(l, n - 1), c, project(r, n - 1)});
  std::uint32_t out = intern(n - 1, std::move(lower));
  std::lock_guard lock(mu_);
  project_memo_.emplace(id, out);
  return out;
}

std::uint32_t Engine::compose(std::uint32_t x, std::uint32_t y, Rank n) {
  if (n == 0) return 0;
  std::uint64_t key = (std::uint64_t{x} << 32) | y;
  {
    std::lock_guard lock(mu_);
    auto it = compose_memo_.find(key);
    if (it != compose_memo_.end()) return it->second;
  }
  std::uint32_t px = project(x, n), py = project(y, n);
  std::vector<Triple> out;
  for (const auto& [l, c, r] : triples_of(x)) out.push_back({l, c, compose(r, py, n - 1)});
  for (const auto& [l, c, r] : triples_of(y)) out.push_back({compose(px, l, n - 1), c, r});
  std::uint32_t id = intern(n, std::move(out));
  {
    std::lock_guard lock(mu_);
    compose_memo_.emplace(key, id);
  }
  maybe_trim();
  return id;
}

std::uint32_t Engine::power(std::uint32_t x, std::uint64_t k, Rank n) {
  std::uint32_t acc = empty_class(n);
  for (std::uint64_t i = 0; i < k; ++i) acc = compose(acc, x, n);
  return acc;
}

std::uint32_t Engine::compute_compositional(Term t, Rank n) {
  const Rank m = n - 1;
  std::vector<Triple> out;
  switch (t.kind()) {
    case Kind::Empty:
      return empty_class(n);
    case Kind::Pt: {
      std::uint32_t e = empty_class(m);
      return intern(n, {{e, t.colors().id(), e}});
    }
    case Kind::Sum: {
      std::uint32_t acc = empty_class(n);
      for (Term k : t.children()) acc = compose(acc, class_of(k, n), n);
      return acc;
    }
    case Kind::Omega: {
      Term a = t.body();
      std::uint32_t ac = class_of(a, m), w = class_of(t, m), pre = empty_class(m);
      auto inner = triples_of(class_of(a, n));
      for (std::uint64_t k = 0; k <= cap(n); ++k) {
        for (const auto& [l, c, r] : inner) out.push_back({compose(pre, l, m), c, compose(r, w, m)});
        pre = compose(pre, ac, m);
      }
      break;
    }
    case Kind::OmegaStar: {
      Term a = t.body();
      std::uint32_t ac = class_of(a, m), ws = class_of(t, m), post = empty_class(m);
      auto inner = triples_of(class_of(a, n));
      for (std::uint64_t k = 0; k <= cap(n); ++k) {
        for (const auto& [l, c, r] : inner) out.push_back({compose(ws, l, m), c, compose(r, post, m)});
        post = compose(ac, post, m);
      }
      break;
    }
    case Kind::Zeta: {
      Term a = t.body();
      std::uint32_t ws = class_of(Term::omega_star(a), m), w = class_of(Term::omega(a), m);
      for (const auto& [l, c, r] : triples_of(class_of(a, n)))
        out.push_back({compose(ws, l, m), c, compose(r, w, m)});
      break;
    }
    case Kind::Shuffle: {
      std::uint32_t s = class_of(t, m);
      for (Term arg : t.children())
        for (const auto& [l, c, r] : triples_of(class_of(arg, n)))
          out.push_back({compose(s, l, m), c, compose(r, s, m)});
      break;
    }
  }
  return intern(n, std::move(out));
}

std::uint32_t Engine::compute_literal(Term t, Rank n) {
  std::vector<Triple> out;
  for (const auto& s : splits(t, n)) out.push_back(triple_of(s, n));
  return intern(n, std::move(out));
}

Engine::Triple Engine::triple_of(const SplitTriple& s, Rank n) {
  return {class_of(s.left, n - 1), s.point.id(), class_of(s.right, n - 1)};
}

std::uint32_t Engine::class_of(Term t, Rank n) {
  check_rank(n);
  if (n == 0) return 0;
  std::uint64_t key = term_key(t, n);
  {
    std::lock_guard lock(mu_);
    auto it = term_memo_.find(key);
    if (it != term_memo_.end()) return it->second;
  }
  std::uint32_t id = opts_.compositional ? compute_compositional(t, n) : compute_literal(t, n);
  {
    std::lock_guard lock(mu_);
    term_memo_.emplace(key, id);
  }
  maybe_trim();
  return id;
}

Characteristic Engine::n_theory(Term t, Rank n) { return {n, class_of(t, n)}; }

bool Engine::ef_equiv(Term a, Term b, Rank n) {
  // Interned terms are equal only when they denote the same order.
  if (a == b) {
    check_rank(n);
    return true;
  }
  return class_of(a, n) == class_of(b, n);
}

std::optional<Rank> Engine::distinguishing_rank(Term a, Term b, Rank max) {
  check_rank(max);
  for (Rank n = 0; n <= max; ++n)
    if (!ef_equiv(a, b, n)) return n;
  return std::nullopt;
}

Rank Engine::stable_from(Term a, Term b, Rank budget) {
  bool v = ef_equiv(a, b, budget);
  Rank n0 = budget;
  while (n0 > 0 && ef_equiv(a, b, n0 - 1) == v) --n0;
  return n0;
}

// ---------------------------------------------------------------------------
// Witnesses

GameTranscript Engine::witness(Term a, Term b, Rank n) {
  check_rank(n);
  if (ef_equiv(a, b, n))
    throw PreconditionError("no Spoiler strategy: the orders are equivalent at rank " + std::to_string(n));
  WitnessMemo seen;
  return witness_rec(a, b, n, seen);
}

GameTranscript Engine::witness_rec(Term a, Term b, Rank n, WitnessMemo& seen) {
  auto key = std::make_tuple(a.id(), b.id(), n);
  if (auto it = seen.find(key); it != seen.end()) return it->second;

  auto sa = splits(a, n), sb = splits(b, n);
  auto triples = [&](const std::vector<SplitTriple>& ss) {
    std::set<Triple> out;
    for (const auto& s : ss) out.insert(triple_of(s, n));
    return out;
  };
  std::set<Triple> ta = triples(sa), tb = triples(sb);

  auto node = std::make_shared<GameNode>();
  node->a = a;
  node->b = b;
  node->rounds = n;
  bool found = false;
  for (int side = 0; side < 2 && !found; ++side) {
    const auto& mine = side == 0 ? sa : sb;
    const auto& theirs = side == 0 ? tb : ta;
    for (const auto& s : mine) {
      if (!theirs.contains(triple_of(s, n))) {
        node->side = side;
        node->move = s;
        found = true;
        break;
      }
    }
  }
  if (!found) throw Error("internal: split triples agree although classes differ");

  const auto& move = node->move;
  const auto& replies = node->side == 0 ? sb : sa;
  for (const auto& r : replies) {
    GameReply reply{r, ReplyOutcome::ColorMismatch, nullptr};
    if (r.point != move.point) {
      node->replies.push_back(std::move(reply));
      continue;
    }
    const SplitTriple& pa = node->side == 0 ? move : r;
    const SplitTriple& pb = node->side == 0 ? r : move;
    if (!ef_equiv(pa.left, pb.left, n - 1)) {
      reply.outcome = ReplyOutcome::Left;
      reply.next = witness_rec(pa.left, pb.left, n - 1, seen);
    } else {
      reply.outcome = ReplyOutcome::Right;
      reply.next = witness_rec(pa.right, pb.right, n - 1, seen);
    }
    node->replies.push_back(std::move(reply));
  }
  seen.emplace(key, node);
  return node;
}

namespace {

bool contains_parts(const std::vector<SplitTriple>& ss, const SplitTriple& s) {
  return std::any_of(ss.begin(), ss.end(), [&](const SplitTriple& x) { return x.same_parts(s); });
}

bool check_node(Engine& engine, const GameNode* node, std::set<const GameNode*>& ok) {
  if (!node) return false;
  if (ok.contains(node)) return true;
  if (node->rounds < 1 || (node->side != 0 && node->side != 1)) return false;
  Term mine = node->side == 0 ? node->a : node->b;
  Term other = node->side == 0 ? node->b : node->a;
  if (!contains_parts(engine.splits(mine, node->rounds), node->move)) return false;

  auto expected = engine.splits(other, node->rounds);
  if (expected.size() != node->replies.size()) return false;
  for (const auto& s : expected) {
    auto it = std::find_if(node->replies.begin(), node->replies.end(),
                           [&](const GameReply& r) { return r.reply.same_parts(s); });
    if (it == node->replies.end()) return false;
  }

  for (const auto& r : node->replies) {
    const SplitTriple& pa = node->side == 0 ? node->move : r.reply;
    const SplitTriple& pb = node->side == 0 ? r.reply : node->move;
    switch (r.outcome) {
      case ReplyOutcome::ColorMismatch:
        if (r.reply.point == node->move.point) return false;
        break;
      case ReplyOutcome::Left:
      case ReplyOutcome::Right: {
        bool left = r.outcome == ReplyOutcome::Left;
        const GameNode* next = r.next.get();
        if (!next || next->rounds != node->rounds - 1) return false;
        if (next->a != (left ? pa.left : pa.right) || next->b != (left ? pb.left : pb.right)) return false;
        if (!check_node(engine, next, ok)) return false;
        break;
      }
    }
  }
  ok.insert(node);
  return true;
}

}  // namespace

bool check_transcript(Engine& engine, const GameTranscript& tr) {
  std::set<const GameNode*> ok;
  return check_node(engine, tr.get(), ok);
}

}  // namespace clo
