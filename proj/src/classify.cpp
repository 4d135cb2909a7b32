#include <algorithm>
#include <set>

#include "clo/analysis.hpp"
#include "clo/error.hpp"

namespace clo {

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Categorical:
      return "Categorical";
    case VerdictKind::FiniteModels:
      return "FiniteModels";
    case VerdictKind::RealsLike:
      return "RealsLike";
    case VerdictKind::SetsOfRealsLike:
      return "SetsOfRealsLike";
    case VerdictKind::BorelComplete:
      return "BorelComplete";
    case VerdictKind::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

namespace {

constexpr int kMaxNesting = 3;

bool trivial(Term t) { return t.is_empty() || t.kind() == Kind::Pt; }

std::optional<std::string> certify(Engine& engine, Term t, Rank n, int nesting);

// Self-additive orders: some element class lies in a single condensation
// class, or a galaxy is itself a model with one class.
std::optional<std::string> condensation_certificate(Engine& engine, Term t, Rank n) {
  Analysis an(engine, t, n);
  if (!an.self_additive()) return std::nullopt;
  Condensation c;
  try {
    c = an.condensation();
  } catch (const BudgetError&) {
    return std::nullopt;
  }
  std::vector<std::set<std::size_t>> where(an.classes().size());
  for (std::size_t k = 0; k < c.classes.size(); ++k)
    for (auto i : c.classes[k]) where[c.sample[i].cls].insert(k);
  for (std::size_t cls = 0; cls < where.size(); ++cls)
    if (where[cls].size() == 1) return "unique ∼-class";

  for (Term g : c.galaxies) {
    if (g == t || trivial(g) || syntactic_rank(g) || !engine.ef_equiv(g, t, n)) continue;
    Analysis ag(engine, g, n);
    if (!ag.self_additive()) continue;
    try {
      if (ag.condensation().count == std::size_t{1})
        return "galaxy submodel " + print(g) + " has a unique ∼-class";
    } catch (const BudgetError&) {
    }
  }
  return std::nullopt;
}

std::optional<std::string> certify(Engine& engine, Term t, Rank n, int nesting) {
  if (trivial(t) || syntactic_rank(t)) return std::nullopt;
  if (auto c = condensation_certificate(engine, t, n)) return c;
  if (nesting >= kMaxNesting) return std::nullopt;

  Analysis an(engine, t, n);
  const auto& types = an.convex_types();
  for (const auto& ty : types) {
    if (!ty.limit || !ty.descriptor || *ty.descriptor == t) continue;
    if (auto c = certify(engine, *ty.descriptor, n, nesting + 1))
      return "non-categorical " + ty.limitKind + " (" + print(*ty.descriptor) + ": " + *c + ")";
  }

  if (t.kind() != Kind::Sum) return std::nullopt;
  auto parts = t.children();
  for (const auto& ty : types) {
    if (!ty.isolatedAtRank) continue;
    auto region = an.region_of(ty.memberClasses);
    if (region.empty() || region.back() - region.front() + 1 != region.size()) continue;
    // The type must fill these parts exactly.
    bool exact = true;
    for (std::size_t c = 0; c < an.classes().size() && exact; ++c) {
      bool member = std::binary_search(ty.memberClasses.begin(), ty.memberClasses.end(), c);
      for (const auto& rep : an.classes()[c].members) {
        std::size_t top = std::get<SumIndex>(rep.address.path.at(0)).index;
        bool in_region = top >= region.front() && top <= region.back();
        if (in_region != member) {
          exact = false;
          break;
        }
      }
    }
    if (!exact) continue;
    Term local = Term::sum(std::vector<Term>(parts.begin() + static_cast<std::ptrdiff_t>(region.front()),
                                             parts.begin() + static_cast<std::ptrdiff_t>(region.back()) + 1));
    if (local == t || local.node_count() >= t.node_count()) continue;
    if (auto c = certify(engine, local, n, nesting + 1))
      return "non-categorical convex piece (" + print(local) + ": " + *c + ")";
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> noncategorical_certificate(Engine& engine, Term t, Budgets budgets) {
  return certify(engine, t, budgets.rankBudget, 0);
}

CatVerdict is_categorical(Engine& engine, Term t, Rank rankBudget, int depthBudget) {
  if (t.is_empty()) return CatCategorical{nullptr, 0};
  if (auto cert = syntactic_cert(t)) return CatCategorical{cert, cert->level};
  if (auto c = certify(engine, t, rankBudget, 0)) return CatNotCategorical{*c};
  if (auto cand = find_candidate(engine, t, rankBudget, depthBudget)) return *cand;
  return CatUnknown{};
}

Verdict classify(Engine& engine, Term t, Budgets budgets) {
  Verdict v;
  v.budgets = budgets;
  if (trivial(t)) {
    v.kind = VerdictKind::Categorical;
    v.certificate = t.is_empty() ? "empty order" : "one-point order";
    return v;
  }
  if (auto cert = syntactic_cert(t)) {
    if (cert->level <= budgets.depthBudget) {
      v.kind = VerdictKind::Categorical;
      v.certificate = "M_" + std::to_string(cert->level) + " derivation";
      return v;
    }
    v.certificate = "derivation of level " + std::to_string(cert->level) + " exceeds depth budget";
    return v;
  }
  if (auto c = certify(engine, t, budgets.rankBudget, 0)) {
    v.kind = VerdictKind::BorelComplete;
    v.certificate = *c;
    return v;
  }
  if (auto cand = find_candidate(engine, t, budgets.rankBudget, budgets.depthBudget))
    v.certificate = "equivalent at rank " + std::to_string(cand->atRank) + " to the M_" +
                    std::to_string(cand->level) + " member " + print(cand->witness) + " (not a proof)";
  else
    v.certificate = "no certificate within budgets";
  return v;
}

}  // namespace clo
