#include "clo/categoricity.hpp"

#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "clo/error.hpp"

namespace clo {

namespace {

MnCertPtr make(MnCert::Rule rule, Term t, std::vector<MnCertPtr> parts) {
  auto c = std::make_shared<MnCert>();
  c->rule = rule;
  c->term = t;
  for (const auto& p : parts) c->level = std::max(c->level, p->level + 1);
  c->parts = std::move(parts);
  return c;
}

MnCertPtr cert_rec(Term t, std::unordered_map<std::uint64_t, MnCertPtr>& memo) {
  if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
  MnCertPtr out;
  switch (t.kind()) {
    case Kind::Pt:
      out = make(MnCert::Rule::Point, t, {});
      break;
    case Kind::Shuffle: {
      std::vector<MnCertPtr> parts;
      for (Term a : t.children()) {
        auto c = cert_rec(a, memo);
        if (!c) break;
        parts.push_back(c);
      }
      if (parts.size() == t.children().size()) out = make(MnCert::Rule::Shuffle, t, std::move(parts));
      break;
    }
    case Kind::Sum: {
      auto kids = t.children();
      std::size_t m = kids.size();
      std::vector<MnCertPtr> leaf(m);
      for (std::size_t i = 0; i < m; ++i)
        if (!(leaf[i] = cert_rec(kids[i], memo))) return memo[t.id()] = nullptr;
      // best[i][j]: cheapest derivation of kids[i..j] as nested binary sums.
      std::vector<std::vector<MnCertPtr>> best(m, std::vector<MnCertPtr>(m));
      for (std::size_t i = 0; i < m; ++i) best[i][i] = leaf[i];
      for (std::size_t len = 2; len <= m; ++len) {
        for (std::size_t i = 0; i + len <= m; ++i) {
          std::size_t j = i + len - 1;
          std::size_t cut = i;
          int h = std::numeric_limits<int>::max();
          for (std::size_t k = i; k < j; ++k) {
            int hk = 1 + std::max(best[i][k]->level, best[k + 1][j]->level);
            if (hk < h) h = hk, cut = k;
          }
          Term part = Term::sum(std::vector<Term>(kids.begin() + static_cast<std::ptrdiff_t>(i),
                                                  kids.begin() + static_cast<std::ptrdiff_t>(j) + 1));
          best[i][j] = make(MnCert::Rule::Sum, part, {best[i][cut], best[cut + 1][j]});
        }
      }
      out = best[0][m - 1];
      break;
    }
    default:
      break;
  }
  return memo[t.id()] = out;
}

std::vector<ColorSet> subsets(const ColorSet& alphabet) {
  const auto& names = alphabet.names();
  std::vector<ColorSet> out;
  for (std::uint32_t mask = 0; mask < (1u << names.size()); ++mask) {
    std::vector<std::string> pick;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (mask & (1u << i)) pick.push_back(names[i]);
    out.emplace_back(pick);
  }
  return out;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

}  // namespace

MnCertPtr syntactic_cert(Term t) {
  std::unordered_map<std::uint64_t, MnCertPtr> memo;
  return cert_rec(t, memo);
}

std::optional<int> syntactic_rank(Term t) {
  auto c = syntactic_cert(t);
  if (!c) return std::nullopt;
  return c->level;
}

bool valid_cert(const MnCertPtr& cert) {
  if (!cert) return false;
  int level = 0;
  for (const auto& p : cert->parts) {
    if (!valid_cert(p)) return false;
    level = std::max(level, p->level + 1);
  }
  if (level != cert->level) return false;
  std::vector<Term> terms;
  for (const auto& p : cert->parts) terms.push_back(p->term);
  switch (cert->rule) {
    case MnCert::Rule::Point:
      return cert->parts.empty() && cert->term.kind() == Kind::Pt;
    case MnCert::Rule::Sum:
      return cert->parts.size() == 2 && cert->term == Term::sum(terms);
    case MnCert::Rule::Shuffle:
      return !cert->parts.empty() && cert->term == Term::shuffle(terms);
  }
  return false;
}

std::uint64_t mn_count(int k, int n) {
  if (k < 0 || n < 0 || k > 62) throw GuardError("color count or level out of range");
  std::uint64_t m = std::uint64_t{1} << k;
  const std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
  for (int i = 0; i < n; ++i) {
    std::uint64_t sq = m > 0xffffffffULL ? inf : m * m;
    std::uint64_t sh = m >= 64 ? inf : (std::uint64_t{1} << m) - 1;
    m = sat_add(sat_add(m, sq), sh);
  }
  return m;
}

std::vector<Term> enumerate_Mn(const ColorSet& alphabet, int n) {
  if (alphabet.size() > 3 || n < 0 || n > 3)
    throw GuardError("enumeration limited to at most 3 colors and level 3");
  std::uint64_t total = mn_count(static_cast<int>(alphabet.size()), n);
  if (total > kEnumerationGuard)
    throw GuardError("enumeration of " + (total == std::numeric_limits<std::uint64_t>::max()
                                              ? std::string("astronomically many")
                                              : std::to_string(total)) +
                     " derivations exceeds the guard");
  std::vector<Term> level;
  for (const auto& c : subsets(alphabet)) level.push_back(Term::point(c));
  for (int i = 0; i < n; ++i) {
    std::vector<Term> next = level;
    std::size_t m = level.size();
    next.reserve(static_cast<std::size_t>(mn_count(static_cast<int>(alphabet.size()), i + 1)));
    for (Term a : level)
      for (Term b : level) next.push_back(Term::sum(a, b));
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<Term> args;
      for (std::size_t j = 0; j < m; ++j)
        if (mask & (std::uint64_t{1} << j)) args.push_back(level[j]);
      next.push_back(Term::shuffle(std::move(args)));
    }
    level = std::move(next);
  }
  return level;
}

std::vector<Term> enumerate_Mn(int k, int n) {
  if (k < 0 || k > 3) throw GuardError("enumeration limited to at most 3 colors");
  static const std::vector<std::string> names{"a", "b", "c"};
  return enumerate_Mn(ColorSet(std::vector<std::string>(names.begin(), names.begin() + k)), n);
}

std::optional<CatCandidate> find_candidate(Engine& engine, Term t, Rank n, int depthBudget) {
  ColorSet alphabet = colors_of(t);
  if (alphabet.size() > 3) return std::nullopt;
  std::unordered_set<Term> seen;
  for (int level = 0; level <= std::min(depthBudget, 3); ++level) {
    if (mn_count(static_cast<int>(alphabet.size()), level) > kEnumerationGuard) break;
    for (Term b : enumerate_Mn(alphabet, level)) {
      if (!seen.insert(b).second) continue;
      if (engine.ef_equiv(t, b, n)) return CatCandidate{b, n, level};
    }
  }
  return std::nullopt;
}

}  // namespace clo
