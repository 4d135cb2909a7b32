#include "clo/codec.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "json.hpp"

#include "clo/error.hpp"

namespace clo {

namespace {

using nlohmann::json;

constexpr std::size_t kTypeGuard = 1'000'000;
constexpr int kFactGuard = 20;
constexpr int kIsoGuard = 4;
constexpr int kStructureBitGuard = 16;

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// All tuples over {0..c-1} of length r, in lexicographic order.
std::vector<Tuple> all_tuples(int c, int r) {
  std::vector<Tuple> out;
  Tuple t(static_cast<std::size_t>(r), 0);
  if (r > 0 && c == 0) return out;
  while (true) {
    out.push_back(t);
    int i = r - 1;
    while (i >= 0 && t[static_cast<std::size_t>(i)] == c - 1) t[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++t[static_cast<std::size_t>(i)];
  }
  return out;
}

// Restricted growth strings of length n in lexicographic order.
void rgs(int n, std::vector<int>& cur, int maxSoFar, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= maxSoFar + 1; ++v) {
    cur.push_back(v);
    rgs(n, cur, std::max(maxSoFar, v), out);
    cur.pop_back();
  }
}

int class_count(const std::vector<int>& classes) {
  return classes.empty() ? 0 : *std::max_element(classes.begin(), classes.end()) + 1;
}

int fact_count(const Language& lang, int c) {
  std::uint64_t f = 0;
  for (const auto& r : lang) f += ipow(static_cast<std::uint64_t>(c), r.arity);
  if (f > static_cast<std::uint64_t>(kFactGuard)) throw GuardError("too many atomic facts per type");
  return static_cast<int>(f);
}

void check_language(const Language& lang) {
  for (const auto& r : lang)
    if (r.arity < 1) throw PreconditionError("relation " + r.name + " must have positive arity");
}

}  // namespace

void validate(const FinStructure& s) {
  if (s.universe < 0) throw PreconditionError("negative universe size");
  check_language(s.language);
  if (s.tables.size() != s.language.size()) throw PreconditionError("one table per relation symbol expected");
  for (std::size_t r = 0; r < s.language.size(); ++r)
    for (const auto& t : s.tables[r]) {
      if (static_cast<int>(t.size()) != s.language[r].arity)
        throw PreconditionError("tuple of wrong arity in " + s.language[r].name);
      for (int v : t)
        if (v < 0 || v >= s.universe) throw PreconditionError("tuple entry out of range in " + s.language[r].name);
    }
}

FinStructure parse_structure(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  FinStructure s;
  try {
    s.universe = j.at("universe").get<int>();
    for (const auto& rel : j.value("relations", json::array())) {
      s.language.push_back({rel.at("name").get<std::string>(), rel.at("arity").get<int>()});
      std::set<Tuple> table;
      for (const auto& t : rel.value("tuples", json::array())) table.insert(t.get<Tuple>());
      s.tables.push_back(std::move(table));
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("bad structure: ") + e.what());
  }
  validate(s);
  return s;
}

std::string to_json(const FinStructure& s) {
  json rels = json::array();
  for (std::size_t r = 0; r < s.language.size(); ++r) {
    json tuples = json::array();
    for (const auto& t : s.tables[r]) tuples.push_back(t);
    json rel = json::object();
    rel["arity"] = s.language[r].arity;
    rel["name"] = s.language[r].name;
    rel["tuples"] = tuples;
    rels.push_back(rel);
  }
  json j = json::object();
  j["relations"] = rels;
  j["universe"] = s.universe;
  return j.dump();
}

std::string to_string(const AtomicType& p, const Language& lang) {
  std::vector<std::string> parts;
  auto var = [](int i) { return "x" + std::to_string(i + 1); };
  for (int i = 0; i < p.arity; ++i)
    for (int j = i + 1; j < p.arity; ++j)
      parts.push_back(var(i) + (p.classes[static_cast<std::size_t>(i)] == p.classes[static_cast<std::size_t>(j)]
                                    ? "="
                                    : "≠") +
                      var(j));
  // First variable in each class names it.
  std::vector<int> rep;
  for (int i = 0; i < p.arity; ++i)
    if (p.classes[static_cast<std::size_t>(i)] == static_cast<int>(rep.size())) rep.push_back(i);
  std::size_t f = 0;
  for (const auto& r : lang)
    for (const auto& t : all_tuples(static_cast<int>(rep.size()), r.arity)) {
      std::string atom = r.name + "(";
      for (std::size_t i = 0; i < t.size(); ++i) atom += (i ? "," : "") + var(rep[static_cast<std::size_t>(t[i])]);
      atom += ")";
      parts.push_back((p.facts[f++] ? "" : "¬") + atom);
    }
  if (parts.empty()) return "⊤";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out;
}

std::vector<AtomicType> atomic_types(const Language& lang, int n) {
  if (n < 0 || n > 3) throw GuardError("atomic types are enumerated for arity at most 3");
  check_language(lang);
  std::vector<std::vector<int>> patterns;
  std::vector<int> cur;
  rgs(n, cur, -1, patterns);
  std::vector<AtomicType> out;
  for (const auto& classes : patterns) {
    int f = fact_count(lang, class_count(classes));
    std::uint64_t total = std::uint64_t{1} << f;
    if (out.size() + total > kTypeGuard) throw GuardError("too many atomic types");
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      AtomicType p{n, classes, std::vector<bool>(static_cast<std::size_t>(f))};
      for (int i = 0; i < f; ++i) p.facts[static_cast<std::size_t>(i)] = (mask >> (f - 1 - i)) & 1u;
      out.push_back(std::move(p));
    }
  }
  return out;
}

TypeIndexing type_indexing(const Language& lang, int maxN) {
  if (maxN < 0 || maxN > 3) throw GuardError("type indexing is limited to arity 3");
  TypeIndexing ix;
  ix.language = lang;
  ix.maxN = maxN;
  ix.eTable.push_back(0);
  for (int n = 0; n <= maxN; ++n) {
    ix.bands.push_back(atomic_types(lang, n));
    ix.eTable.push_back(ix.eTable.back() + ix.bands.back().size());
  }
  return ix;
}

std::uint64_t TypeIndexing::k(const AtomicType& p) const {
  if (p.arity < 0 || p.arity > maxN) throw PreconditionError("type arity outside the indexed bands");
  const auto& band = bands[static_cast<std::size_t>(p.arity)];
  auto it = std::lower_bound(band.begin(), band.end(), p);
  if (it == band.end() || *it != p) throw PreconditionError("not a complete atomic type of this language");
  return eTable[static_cast<std::size_t>(p.arity)] + static_cast<std::uint64_t>(it - band.begin());
}

AtomicType otp(const FinStructure& a, const Tuple& tuple) {
  AtomicType p;
  p.arity = static_cast<int>(tuple.size());
  std::vector<int> reps;
  for (int v : tuple) {
    if (v < 0 || v >= a.universe) throw PreconditionError("tuple entry out of range");
    auto it = std::find(reps.begin(), reps.end(), v);
    if (it == reps.end()) {
      p.classes.push_back(static_cast<int>(reps.size()));
      reps.push_back(v);
    } else {
      p.classes.push_back(static_cast<int>(it - reps.begin()));
    }
  }
  for (std::size_t r = 0; r < a.language.size(); ++r)
    for (const auto& t : all_tuples(static_cast<int>(reps.size()), a.language[r].arity)) {
      Tuple image;
      for (int c : t) image.push_back(reps[static_cast<std::size_t>(c)]);
      p.facts.push_back(a.tables[r].count(image) > 0);
    }
  return p;
}

Term j_block(std::uint64_t k) { return Term::sum({eta(), fin(2 + k), eta()}); }

namespace {

void check_params(int universe, TruncParams p) {
  if (universe < 1) throw PreconditionError("universe must be nonempty");
  if (p.depth < 1 || p.mix < 1) throw PreconditionError("depth and mixing must be at least 1");
  std::size_t total = 0, level = 1;
  std::size_t width = static_cast<std::size_t>(universe) * static_cast<std::size_t>(p.mix);
  for (int i = 0; i <= p.depth; ++i) {
    total += level;
    if (total > kIndexGuard) throw GuardError("index order exceeds " + std::to_string(kIndexGuard) + " nodes");
    level *= width;
  }
}

}  // namespace

std::vector<IndexNode> build_index_order(int universe, TruncParams p) {
  check_params(universe, p);
  std::vector<IndexNode> out;
  std::function<void(Tuple&)> visit = [&](Tuple& label) {
    out.push_back({label, out.size()});
    if (static_cast<int>(label.size()) == p.depth) return;
    for (int round = 0; round < p.mix; ++round)
      for (int a = 0; a < universe; ++a) {
        label.push_back(a);
        visit(label);
        label.pop_back();
      }
  };
  Tuple root;
  visit(root);
  return out;
}

Term encode(const FinStructure& a, TruncParams p) {
  validate(a);
  check_params(a.universe, p);
  TypeIndexing ix = type_indexing(a.language, p.depth);
  auto block = [&](const Tuple& label) { return j_block(ix.k(otp(a, label))); };

  if (p.layout == Layout::RoundRobin) {
    std::vector<Term> parts;
    for (const auto& node : build_index_order(a.universe, p)) parts.push_back(block(node.label));
    return canonicalize(Term::sum(std::move(parts)));
  }

  std::function<Term(Tuple&)> code = [&](Tuple& label) -> Term {
    Term head = block(label);
    if (static_cast<int>(label.size()) == p.depth) return head;
    std::vector<Term> children;
    for (int x = 0; x < a.universe; ++x) {
      label.push_back(x);
      children.push_back(code(label));
      label.pop_back();
    }
    if (p.layout == Layout::Dense) return Term::sum(head, Term::shuffle(std::move(children)));
    // Child codes depend only on the isomorphism type of the extended tuple,
    // so ordering by code keeps the layout invariant under relabelling.
    std::stable_sort(children.begin(), children.end(), StructuralLess{});
    std::vector<Term> parts{head};
    for (int round = 0; round < p.mix; ++round) parts.insert(parts.end(), children.begin(), children.end());
    return Term::sum(std::move(parts));
  };
  Tuple root;
  return canonicalize(code(root));
}

namespace {

std::vector<std::set<Tuple>> permuted(const FinStructure& s, const std::vector<int>& perm) {
  std::vector<std::set<Tuple>> out;
  for (const auto& table : s.tables) {
    std::set<Tuple> t;
    for (const auto& tup : table) {
      Tuple image;
      for (int v : tup) image.push_back(perm[static_cast<std::size_t>(v)]);
      t.insert(std::move(image));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

bool isomorphic(const FinStructure& a, const FinStructure& b) {
  validate(a);
  validate(b);
  if (a.universe > kIsoGuard || b.universe > kIsoGuard)
    throw GuardError("isomorphism oracle is limited to universes of size " + std::to_string(kIsoGuard));
  if (a.universe != b.universe || a.language != b.language) return false;
  std::vector<int> perm(static_cast<std::size_t>(a.universe));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permuted(a, perm) == b.tables) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<FinStructure> structures_up_to_iso(const Language& lang, int universe) {
  check_language(lang);
  if (universe < 0 || universe > kIsoGuard) throw GuardError("universe too large for enumeration");
  std::vector<std::vector<Tuple>> slots;
  int bits = 0;
  for (const auto& r : lang) {
    slots.push_back(all_tuples(universe, r.arity));
    bits += static_cast<int>(slots.back().size());
  }
  if (bits > kStructureBitGuard) throw GuardError("too many structures to enumerate");

  std::vector<std::vector<int>> perms;
  std::vector<int> perm(static_cast<std::size_t>(universe));
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<FinStructure> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    FinStructure s{universe, lang, {}};
    int bit = 0;
    for (const auto& ts : slots) {
      std::set<Tuple> table;
      for (const auto& t : ts)
        if ((mask >> bit++) & 1u) table.insert(t);
      s.tables.push_back(std::move(table));
    }
    // Keep the least relabelling of each isomorphism class.
    bool least = true;
    for (const auto& q : perms)
      if (permuted(s, q) < s.tables) {
        least = false;
        break;
      }
    if (least) out.push_back(std::move(s));
  }
  return out;
}

ReductionReport verify_reduction(Engine& engine, const FinStructure& a, const FinStructure& b, TruncParams p,
                                 Rank rankBudget) {
  ReductionReport r;
  r.isoOracle = isomorphic(a, b);
  Term ca = encode(a, p), cb = encode(b, p);
  r.distinguishingRank = engine.distinguishing_rank(ca, cb, rankBudget);
  r.codesEquivalentAtBudget = !r.distinguishingRank;
  r.consistent = r.isoOracle ? r.codesEquivalentAtBudget : r.distinguishingRank.has_value();
  return r;
}

}  // namespace clo
