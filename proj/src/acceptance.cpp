#include "clo/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "clo/analysis.hpp"
#include "clo/categoricity.hpp"
#include "clo/census.hpp"
#include "clo/codec.hpp"
#include "clo/engine.hpp"
#include "clo/error.hpp"
#include "clo/finite.hpp"
#include "clo/gen.hpp"

namespace clo {

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& what) {
    if (pass) detail << "first failure: " << what << "; ";
    pass = false;
  }
};

std::vector<FiniteOrder> two_colored_orders(std::size_t maxSize) {
  std::vector<FiniteOrder> out;
  ColorSet a{"a"}, b{"b"};
  for (std::size_t n = 0; n <= maxSize; ++n)
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      FiniteOrder o{n, {}};
      for (std::size_t i = 0; i < n; ++i) o.coloring.push_back((mask >> i) & 1u ? b : a);
      out.push_back(std::move(o));
    }
  return out;
}

void oracle_equivalence(Outcome& o) {
  Engine engine;
  auto orders = two_colored_orders(6);
  std::vector<Term> terms;
  for (const auto& x : orders) terms.push_back(to_term(x));
  std::size_t pairs = 0, checks = 0;
  for (std::size_t i = 0; i < orders.size(); ++i)
    for (std::size_t j = i; j < orders.size(); ++j, ++pairs)
      for (Rank n = 0; n <= 3; ++n, ++checks)
        if (engine.ef_equiv(terms[i], terms[j], n) != ef_oracle(orders[i], orders[j], n))
          o.fail(print(terms[i]) + " vs " + print(terms[j]) + " at rank " + std::to_string(n));
  o.detail << orders.size() << " orders, " << pairs << " pairs, " << checks << " rank checks";
}

void chain_law(Outcome& o) {
  Engine engine;
  std::size_t checks = 0;
  for (Rank n = 0; n <= 4; ++n)
    for (std::uint64_t a = 0; a <= 20; ++a)
      for (std::uint64_t b = 0; b <= 20; ++b, ++checks) {
        std::uint64_t t = (std::uint64_t{1} << n) - 1;
        bool closed = a == b || (a >= t && b >= t);
        if (engine.ef_equiv(fin(a), fin(b), n) != closed)
          o.fail("fin(" + std::to_string(a) + ") vs fin(" + std::to_string(b) + ") at rank " + std::to_string(n));
      }
  o.detail << checks << " checks";
}

void self_additivity(Outcome& o) {
  Engine engine;
  for (Rank n = 1; n <= 6; ++n) {
    if (!self_additive_at(engine, zeta(), n)) o.fail("zeta at rank " + std::to_string(n));
    if (!self_additive_at(engine, eta(), n)) o.fail("eta at rank " + std::to_string(n));
  }
  for (const char* text : {"omega", "z(pt[]) + pt[] + z(pt[])"})
    if (self_additive_at(engine, parse(text), 2)) o.fail(std::string(text) + " self-additive at rank 2");
  o.detail << "zeta, eta at ranks 1..6; omega, z+1+z at rank 2";
}

void condensation_recovery(Outcome& o) {
  Engine engine;
  for (int k = 1; k <= 5; ++k) {
    Term t = repeat(zeta(), static_cast<std::uint64_t>(k));
    std::optional<Condensation> found;
    for (Rank n = 2; n <= 6 && !found; ++n) {
      auto c = condensation_at(engine, t, n);
      if (c.stable && c.count) found = c;
    }
    if (!found) {
      o.fail(std::to_string(k) + "-fold zeta never stabilizes");
      continue;
    }
    o.detail << k << "→" << *found->count << "@" << found->rank << " ";
    if (*found->count != static_cast<std::size_t>(k)) o.fail(std::to_string(k) + "-fold zeta");
  }
}

void mn_counting(Outcome& o) {
  Engine engine;
  for (int k = 0; k <= 1; ++k) {
    std::uint64_t expected = std::uint64_t{1} << k;
    for (int n = 0; n <= 2; ++n) {
      if (n > 0) expected = expected + expected * expected + ((std::uint64_t{1} << expected) - 1);
      if (mn_count(k, n) != expected) o.fail("mn_count(" + std::to_string(k) + "," + std::to_string(n) + ")");
      auto terms = enumerate_Mn(k, n);
      if (terms.size() != expected)
        o.fail("|enumerate_Mn(" + std::to_string(k) + "," + std::to_string(n) + ")| = " +
               std::to_string(terms.size()));
      o.detail << "k=" << k << ",n=" << n << ":" << terms.size() << " ";
    }
  }
  std::size_t sides = 0;
  for (int k = 0; k <= 1; ++k)
    for (int n = 0; n <= 2; ++n) {
      std::set<Term, StructuralLess> seen;
      for (Term t : enumerate_Mn(k, n)) {
        if (!seen.insert(t).second) continue;
        for (const auto& s : engine.splits(t, 1))
          for (Term side : {s.left, s.right}) {
            if (side.is_empty()) continue;
            ++sides;
            auto r = syntactic_rank(side);
            if (!r || *r > 2 * n + 1) o.fail("split side " + print(side) + " of " + print(t));
          }
      }
    }
  o.detail << "; " << sides << " split sides within 2n+1";
}

bool definite(VerdictKind k) { return k != VerdictKind::Unknown; }

void classification(Outcome& o) {
  Engine engine;
  Budgets b;
  auto expect = [&](Term t, VerdictKind k) {
    auto v = classify(engine, t, b);
    if (v.kind != k) o.fail(print(t) + " classified " + verdict_name(v.kind));
    if (k == VerdictKind::BorelComplete && v.certificate.empty()) o.fail(print(t) + " without certificate");
  };
  expect(eta(), VerdictKind::Categorical);
  expect(parse("sh(pt[a],pt[b])"), VerdictKind::Categorical);
  for (std::uint64_t k = 0; k <= 5; ++k) expect(fin(k), VerdictKind::Categorical);
  expect(zeta(), VerdictKind::BorelComplete);
  expect(omega(), VerdictKind::BorelComplete);

  const std::vector<std::string> corpus{
      "eta",          "sh(pt[a],pt[b])",     "sh(pt[a],pt[b],pt[c])", "fin(4)",          "zeta",
      "omega",        "w*(pt[])",            "z(pt[]) + pt[] + z(pt[])", "omega + w*(pt[])", "zeta + zeta",
      "eta + pt[] + eta", "pt[] + eta",      "omega + eta",           "z(fin(2))",       "sh(pt[],fin(2))",
      "w(pt[a] + pt[b])", "eta + pt[a] + eta", "sh(zeta)",            "z(eta)",          "pt[a] + sh(pt[a],pt[b]) + pt[b]"};
  std::vector<Budgets> grid;
  for (Rank r = 2; r <= 6; ++r)
    for (int d = 0; d <= 3; ++d) grid.push_back({r, d});
  std::size_t verdicts = 0;
  for (const auto& text : corpus) {
    Term t = parse(text);
    std::vector<VerdictKind> v;
    for (const auto& g : grid) v.push_back(classify(engine, t, g).kind);
    verdicts += v.size();
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid[i].rankBudget <= grid[j].rankBudget && grid[i].depthBudget <= grid[j].depthBudget &&
            definite(v[i]) && v[j] != v[i])
          o.fail(text + " moves from " + verdict_name(v[i]) + " to " + verdict_name(v[j]));
  }
  o.detail << corpus.size() << " corpus terms, " << verdicts << " verdicts over " << grid.size() << " budgets";
}

void census_tn(Outcome& o) {
  Engine engine;
  for (int n = 3; n <= 5; ++n) {
    auto r = verify_family(engine, ExampleFamily::tn(n), 4, 6);
    std::set<std::string> profiles(r.invariants.begin(), r.invariants.end());
    o.detail << "T" << n << ":" << r.modelCount << " ";
    if (r.modelCount != static_cast<std::size_t>(n)) o.fail("T" + std::to_string(n) + " model count");
    if (!r.invariantInjective || profiles.size() != r.generated || r.generated != r.modelCount)
      o.fail("T" + std::to_string(n) + " profiles do not biject with models");
  }
}

void census_shadows(Outcome& o, std::mt19937_64& rng) {
  Engine engine;
  for (int window = 1; window <= 4; ++window) {
    auto r = verify_family(engine, ExampleFamily::step_points(window, 3), 0, 5);
    o.detail << "window " << window << ":" << r.modelCount << " ";
    if (r.modelCount != (std::size_t{1} << window) || !r.invariantInjective)
      o.fail("step-points window " + std::to_string(window));
  }
  for (int depth = 1; depth <= 2; ++depth) {
    auto r = verify_family(engine, ExampleFamily::full_rationals(depth), 0, 6);
    if (!r.pass) o.fail("full-rationals(" + std::to_string(depth) + ") not injective");
  }
  auto f = ExampleFamily::full_rationals(3);
  std::size_t perms = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Completion> choices;
    for (int j = 0; j < 3; ++j)
      if (gen::pick(rng, 0, 3))
        choices.push_back({j, kCompletionShapes[static_cast<std::size_t>(
                                  gen::pick(rng, 0, static_cast<int>(kCompletionShapes.size()) - 1))]});
    auto base = invariant(engine, f, full_rationals_model(3, choices), 6);
    for (int p = 0; p < 5; ++p, ++perms) {
      auto list = choices;
      if (!list.empty()) list.push_back(list[static_cast<std::size_t>(gen::pick(rng, 0, int(list.size()) - 1))]);
      std::shuffle(list.begin(), list.end(), rng);
      if (!(invariant(engine, f, full_rationals_model(3, list), 6) == base))
        o.fail("full-rationals invariant depends on choice order");
    }
  }
  o.detail << "; " << perms << " reordered completion lists";
}

FinStructure relabel(const FinStructure& s, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(s.universe));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  FinStructure out{s.universe, s.language, {}};
  for (const auto& table : s.tables) {
    std::set<Tuple> t;
    for (const auto& tup : table) {
      Tuple image;
      for (int v : tup) image.push_back(perm[static_cast<std::size_t>(v)]);
      t.insert(image);
    }
    out.tables.push_back(std::move(t));
  }
  return out;
}

void fs_codec(Outcome& o, std::mt19937_64& rng) {
  Language lang{{"R", 2}};
  auto ix = type_indexing(lang, 3);
  for (int n = 0; n <= 3; ++n) {
    auto types = atomic_types(lang, n);
    auto lo = ix.eTable[static_cast<std::size_t>(n)], hi = ix.eTable[static_cast<std::size_t>(n) + 1];
    if (hi - lo != types.size()) o.fail("band " + std::to_string(n) + " size");
    std::set<std::uint64_t> ks;
    for (const auto& p : types) ks.insert(ix.k(p));
    if (ks.size() != types.size() || *ks.begin() != lo || *ks.rbegin() != hi - 1)
      o.fail("band " + std::to_string(n) + " is not a bijection");
  }
  std::vector<FinStructure> all;
  for (int u = 1; u <= 3; ++u)
    for (auto& s : structures_up_to_iso(lang, u)) all.push_back(std::move(s));
  Engine engine;
  TruncParams p{2, 2};
  std::size_t pairs = 0;
  int worst = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (int trial = 0; trial < 2; ++trial, ++pairs) {
      auto r = verify_reduction(engine, all[i], relabel(all[i], rng), p, 6);
      if (!r.consistent || !r.isoOracle) o.fail("relabelled copy of " + to_json(all[i]));
    }
    for (std::size_t j = i + 1; j < all.size(); ++j, ++pairs) {
      auto r = verify_reduction(engine, all[i], all[j], p, 6);
      if (!r.consistent || r.isoOracle) o.fail(to_json(all[i]) + " vs " + to_json(all[j]));
      if (r.distinguishingRank) worst = std::max(worst, static_cast<int>(*r.distinguishingRank));
    }
  }
  o.detail << all.size() << " structures, " << pairs << " pairs, largest distinguishing rank " << worst
           << "; e = " << ix.eTable[1] << "," << ix.eTable[2] << "," << ix.eTable[3] << "," << ix.eTable[4];
}

// Pool of random terms grouped by rank-n class, for drawing equivalent pairs.
struct Pool {
  std::vector<std::vector<Term>> classes;
  Term draw(std::size_t cls, std::mt19937_64& rng) const {
    const auto& c = classes[cls];
    return c[static_cast<std::size_t>(gen::pick(rng, 0, static_cast<int>(c.size()) - 1))];
  }
  std::size_t any(std::mt19937_64& rng) const {
    return static_cast<std::size_t>(gen::pick(rng, 0, static_cast<int>(classes.size()) - 1));
  }
};

Pool make_pool(Engine& engine, Rank n, std::mt19937_64& rng) {
  std::map<std::uint32_t, std::vector<Term>> by;
  std::set<Term, StructuralLess> seen;
  for (int i = 0; i < 400; ++i) {
    Term t = gen::random_term(rng, 2, 2);
    if (seen.insert(t).second) by[engine.n_theory(t, n).classId].push_back(t);
  }
  // Classes with several members first so equivalent pairs are not all identical.
  Pool pool;
  for (auto& [id, ts] : by)
    if (ts.size() > 1) pool.classes.push_back(ts);
  if (pool.classes.empty())
    for (auto& [id, ts] : by) pool.classes.push_back(ts);
  return pool;
}

void algebraic_laws(Outcome& o, std::mt19937_64& rng, std::size_t cases) {
  Engine engine;
  std::map<Rank, Pool> pools;
  for (Rank n = 1; n <= 3; ++n) pools[n] = make_pool(engine, n, rng);
  std::size_t done[4] = {0, 0, 0, 0}, distinct = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    Rank n = static_cast<Rank>(gen::pick(rng, 1, 3));
    const Pool& pool = pools[n];
    switch (c % 4) {
      case 0: {  // sum congruence
        auto i = pool.any(rng), j = pool.any(rng);
        Term a = pool.draw(i, rng), b = pool.draw(i, rng), x = pool.draw(j, rng), y = pool.draw(j, rng);
        distinct += a != b || x != y;
        if (!engine.ef_equiv(Term::sum(a, x), Term::sum(b, y), n))
          o.fail("sum congruence: " + print(a) + " | " + print(b) + " | " + print(x) + " | " + print(y));
        break;
      }
      case 1: {  // shuffle permutation and duplication
        std::vector<Term> args;
        int m = gen::pick(rng, 1, 3);
        for (int k = 0; k < m; ++k) args.push_back(gen::random_term(rng, 1, 2));
        auto other = args;
        other.push_back(args[static_cast<std::size_t>(gen::pick(rng, 0, m - 1))]);
        std::shuffle(other.begin(), other.end(), rng);
        Term s1 = Term::raw(Kind::Shuffle, args), s2 = Term::raw(Kind::Shuffle, other);
        if (canonicalize(s1) != canonicalize(s2) || !engine.ef_equiv(s1, s2, n))
          o.fail("shuffle invariance: " + print(canonicalize(s1)));
        break;
      }
      case 2: {  // splice preserves the rank-n class
        auto i = pool.any(rng);
        Term block = pool.draw(i, rng), d = pool.draw(i, rng);
        Term left = gen::random_term(rng, 2, 2), right = gen::random_term(rng, 2, 2);
        Term t = Term::sum({left, block, right});
        distinct += block != d;
        Term s = splice(t, ConvexBlock{left, block, right}, d);
        if (!engine.ef_equiv(s, t, n)) o.fail("splice: " + print(t) + " with " + print(d));
        break;
      }
      default: {  // monotonicity in the rank
        auto i = pool.any(rng);
        Term a = pool.draw(i, rng), b = gen::pick(rng, 0, 1) ? pool.draw(i, rng) : gen::random_term(rng, 2, 2);
        for (Rank k = 1; k <= n; ++k)
          if (engine.ef_equiv(a, b, k) && !engine.ef_equiv(a, b, k - 1))
            o.fail("monotonicity: " + print(a) + " vs " + print(b));
        break;
      }
    }
    ++done[c % 4];
  }
  o.detail << done[0] << " congruence, " << done[1] << " shuffle, " << done[2] << " splice, " << done[3]
           << " monotonicity cases; " << distinct << " congruence/splice cases use distinct terms";
}

}  // namespace

std::string criterion_name(int id) {
  static const char* names[] = {"oracle equivalence",   "chain law",           "self-additivity facts",
                                "condensation recovery", "M_n counting",        "classification regression",
                                "census Tn",            "census shadows",      "fs codec",
                                "algebraic laws"};
  if (id < 1 || id > kCriterionCount) throw PreconditionError("no acceptance criterion " + std::to_string(id));
  return names[id - 1];
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> results;
  std::mt19937_64 rng(options.seed);
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!options.only.empty() && !options.only.count(id)) continue;
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      switch (id) {
        case 1: oracle_equivalence(o); break;
        case 2: chain_law(o); break;
        case 3: self_additivity(o); break;
        case 4: condensation_recovery(o); break;
        case 5: mn_counting(o); break;
        case 6: classification(o); break;
        case 7: census_tn(o); break;
        case 8: census_shadows(o, rng); break;
        case 9: fs_codec(o, rng); break;
        case 10: algebraic_laws(o, rng, options.propertyCases); break;
      }
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    CriterionResult r{id, criterion_name(id), o.pass, o.detail.str(),
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()};
    if (progress) progress(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace clo
