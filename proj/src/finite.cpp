#include "clo/finite.hpp"

#include <unordered_map>

#include "clo/error.hpp"

namespace clo {

namespace {

void expand_into(Term t, std::vector<ColorSet>& out) {
  switch (t.kind()) {
    case Kind::Empty:
      return;
    case Kind::Pt:
      out.push_back(t.colors());
      return;
    case Kind::Sum:
      for (Term c : t.children()) expand_into(c, out);
      return;
    default:
      throw PreconditionError("finite_expand: term contains a " + std::string(kind_name(t.kind())) + " node");
  }
}

// Positions are the chosen pairs in play order; a position is encoded as a
// string of bytes (pair count, then a,b per pair, then rounds left).
class Game {
 public:
  Game(const FiniteOrder& a, const FiniteOrder& b) : a_(a), b_(b) {}

  bool duplicator_wins(std::vector<std::pair<int, int>>& pos, Rank rounds) {
    if (rounds == 0) return true;
    std::string key;
    key.push_back(static_cast<char>(rounds));
    for (auto [x, y] : pos) {
      key.push_back(static_cast<char>(x));
      key.push_back(static_cast<char>(y));
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    bool wins = true;
    for (int side = 0; side < 2 && wins; ++side) {
      int mine = static_cast<int>(side == 0 ? a_.size : b_.size);
      int theirs = static_cast<int>(side == 0 ? b_.size : a_.size);
      for (int x = 0; x < mine && wins; ++x) {
        bool answered = false;
        for (int y = 0; y < theirs && !answered; ++y) {
          int ea = side == 0 ? x : y, eb = side == 0 ? y : x;
          if (!consistent(pos, ea, eb)) continue;
          pos.emplace_back(ea, eb);
          answered = duplicator_wins(pos, rounds - 1);
          pos.pop_back();
        }
        wins = answered;
      }
    }
    memo_.emplace(std::move(key), wins);
    return wins;
  }

 private:
  bool consistent(const std::vector<std::pair<int, int>>& pos, int x, int y) const {
    if (a_.coloring[x] != b_.coloring[y]) return false;
    for (auto [p, q] : pos)
      if ((x < p) != (y < q) || (x == p) != (y == q)) return false;
    return true;
  }

  const FiniteOrder& a_;
  const FiniteOrder& b_;
  std::unordered_map<std::string, bool> memo_;
};

}  // namespace

FiniteOrder finite_expand(Term t) {
  FiniteOrder o;
  expand_into(t, o.coloring);
  o.size = o.coloring.size();
  return o;
}

Term to_term(const FiniteOrder& o) {
  std::vector<Term> parts;
  for (const auto& c : o.coloring) parts.push_back(Term::point(c));
  return Term::sum(std::move(parts));
}

bool ef_oracle(const FiniteOrder& a, const FiniteOrder& b, Rank n, OracleCaps caps) {
  if (a.size != a.coloring.size() || b.size != b.coloring.size())
    throw PreconditionError("finite order size does not match its coloring");
  if (a.size > caps.max_size || b.size > caps.max_size)
    throw GuardError("oracle size cap " + std::to_string(caps.max_size) + " exceeded");
  if (n < 0 || n > caps.max_rank) throw GuardError("oracle rank cap " + std::to_string(caps.max_rank) + " exceeded");
  Game g(a, b);
  std::vector<std::pair<int, int>> pos;
  return g.duplicator_wins(pos, n);
}

}  // namespace clo
