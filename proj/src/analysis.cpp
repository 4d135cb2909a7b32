#include "clo/analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "clo/error.hpp"

namespace clo {

namespace {

constexpr std::size_t kMaxLeaves = 20000;
constexpr std::size_t kMaxSample = 400;

// Membership pattern of a class set along the order: collapsed runs of
// In/Out, or Broken once the set is certainly not convex.
struct Pattern {
  bool broken = false;
  std::string runs;  // over 'I' and 'O', no two equal neighbours

  static Pattern of(char c) { return {false, std::string(1, c)}; }
  bool uniform() const { return !broken && runs.size() <= 1; }

  void append(const Pattern& p) {
    if (broken) return;
    if (p.broken) {
      broken = true;
      return;
    }
    for (char c : p.runs)
      if (runs.empty() || runs.back() != c) runs.push_back(c);
    if (std::count(runs.begin(), runs.end(), 'I') > 1) broken = true;
  }
};

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

struct Analysis::Impl {
  enum class Shape { Leaf, Seq, Rep, Shuf };
  struct Node {
    Shape shape = Shape::Leaf;
    std::size_t leaf = 0;
    std::vector<std::size_t> kids;
    std::size_t depth = 0;               // index of the path step that a copy varies
    std::vector<AddressStep> dup;        // Rep: one step; Shuf: one per kid
    Term term;
  };
  struct Leaf {
    Address address;
    ColorSet colors;
    std::uint32_t left = 0, right = 0;
    std::size_t cls = 0;
    std::size_t top = 0;  // top-level sum child
  };
  struct LimitMark {
    std::size_t cls;
    Term descriptor;
    std::string kind;
  };

  Engine& engine;
  Term t;
  Rank n;
  std::vector<Node> nodes;
  std::vector<Leaf> leaves;
  std::vector<OneTypeClass> classes;
  std::map<std::array<std::uint32_t, 3>, std::size_t> class_index;
  std::vector<LimitMark> limits;
  std::size_t root = 0;

  std::optional<std::vector<ClassSet>> convex_sets;
  std::optional<std::vector<ConvexNType>> types;

  Impl(Engine& e, Term term, Rank rank) : engine(e), t(term), n(rank) {
    if (n < 1) throw BudgetError("analysis needs rank >= 1");
    root = build(t, engine.empty_class(n), engine.empty_class(n), Address{}, false, "");
  }

  std::uint32_t cls(Term x) { return engine.class_of(x, n); }
  std::uint32_t comp(std::uint32_t a, std::uint32_t b) { return engine.compose(a, b, n); }

  std::size_t add_node(Node node) {
    nodes.push_back(std::move(node));
    return nodes.size() - 1;
  }

  std::size_t build(Term x, std::uint32_t L, std::uint32_t R, const Address& at, bool unbounded,
                    const std::string& family) {
    Node node;
    node.term = x;
    node.depth = at.path.size();
    switch (x.kind()) {
      case Kind::Empty:
        node.shape = Shape::Seq;
        break;
      case Kind::Pt: {
        if (leaves.size() >= kMaxLeaves) throw BudgetError("analysis exceeds the orbit limit");
        std::array<std::uint32_t, 3> key{L, x.colors().id(), R};
        auto [it, fresh] = class_index.emplace(key, classes.size());
        if (fresh)
          classes.push_back({Characteristic{n, L}, x.colors(), Characteristic{n, R}, {}});
        classes[it->second].members.push_back({at, unbounded, family});
        std::size_t top = 0;
        if (t.kind() == Kind::Sum && !at.path.empty()) top = std::get<SumIndex>(at.path[0]).index;
        leaves.push_back({at, x.colors(), L, R, it->second, top});
        node.shape = Shape::Leaf;
        node.leaf = leaves.size() - 1;
        break;
      }
      case Kind::Sum: {
        node.shape = Shape::Seq;
        auto kids = x.children();
        std::vector<std::uint32_t> suffix(kids.size() + 1);
        suffix[kids.size()] = R;
        for (std::size_t i = kids.size(); i-- > 0;) suffix[i] = comp(cls(kids[i]), suffix[i + 1]);
        std::uint32_t left = L;
        for (std::size_t i = 0; i < kids.size(); ++i) {
          node.kids.push_back(build(kids[i], left, suffix[i + 1], at.then(SumIndex{i}), unbounded, family));
          left = comp(left, cls(kids[i]));
        }
        break;
      }
      case Kind::Omega: {
        node.shape = Shape::Seq;
        Term a = x.body();
        std::uint32_t ac = cls(a), right = comp(cls(x), R), left = L;
        std::uint64_t cap = engine.cap(n);
        std::size_t first_begin = leaves.size(), first_end = 0;
        for (std::uint64_t k = 0; k <= cap; ++k) {
          node.kids.push_back(build(a, left, right, at.then(OmegaIndex{k}), unbounded, family));
          if (k == 0) first_end = leaves.size();
          left = comp(left, ac);
        }
        std::string fam = "w copies >= " + std::to_string(cap + 1) + " at " + to_string(at);
        std::size_t tail_begin = leaves.size();
        Node rep;
        rep.shape = Shape::Rep;
        rep.term = Term::zeta(a);
        rep.depth = at.path.size();
        rep.dup = {OmegaIndex{cap + 2}};
        rep.kids.push_back(build(a, left, right, at.then(OmegaIndex{cap + 1}), true, fam));
        mark_limit(first_begin, first_end, tail_begin, a, "ω-tail");
        node.kids.push_back(add_node(std::move(rep)));
        break;
      }
      case Kind::OmegaStar: {
        node.shape = Shape::Seq;
        Term a = x.body();
        std::uint32_t ac = cls(a), left = comp(L, cls(x));
        std::uint64_t cap = engine.cap(n);
        std::vector<std::uint32_t> rights(cap + 3);
        rights[0] = R;
        for (std::uint64_t k = 1; k < rights.size(); ++k) rights[k] = comp(ac, rights[k - 1]);
        std::string fam = "w* copies >= " + std::to_string(cap + 1) + " at " + to_string(at);
        std::size_t tail_begin = leaves.size();
        Node rep;
        rep.shape = Shape::Rep;
        rep.term = Term::zeta(a);
        rep.depth = at.path.size();
        rep.dup = {OmegaStarIndex{cap + 1}};
        rep.kids.push_back(build(a, left, rights[cap + 2], at.then(OmegaStarIndex{cap + 2}), true, fam));
        std::size_t tail_end = leaves.size();
        node.kids.push_back(add_node(std::move(rep)));
        std::size_t last_begin = 0;
        for (std::uint64_t k = cap + 1; k-- > 0;) {
          if (k == 0) last_begin = leaves.size();
          node.kids.push_back(build(a, left, rights[k], at.then(OmegaStarIndex{k}), unbounded, family));
        }
        mark_limit(last_begin, leaves.size(), tail_begin, a, "ω*-tail", tail_end);
        break;
      }
      case Kind::Zeta: {
        node.shape = Shape::Rep;
        Term a = x.body();
        std::uint32_t left = comp(L, cls(Term::omega_star(a))), right = comp(cls(Term::omega(a)), R);
        node.dup = {ZetaIndex{1}};
        node.kids.push_back(build(a, left, right, at.then(ZetaIndex{0}), true, "z copies at " + to_string(at)));
        break;
      }
      case Kind::Shuffle: {
        node.shape = Shape::Shuf;
        std::uint32_t s = cls(x), left = comp(L, s), right = comp(s, R);
        auto args = x.children();
        std::string fam = "shuffle copies at " + to_string(at);
        for (std::size_t i = 0; i < args.size(); ++i) {
          auto pos = static_cast<std::int64_t>(i);
          node.kids.push_back(build(args[i], left, right, at.then(ShufflePos{Rational(pos), args[i]}), true, fam));
          node.dup.push_back(ShufflePos{Rational(pos + static_cast<std::int64_t>(args.size())), args[i]});
        }
        break;
      }
    }
    return add_node(std::move(node));
  }

  // The copies far out in an omega family are a limit when their classes
  // differ from those of the copy at the finite end.
  void mark_limit(std::size_t end_begin, std::size_t end_end, std::size_t tail_begin, Term body,
                  const std::string& kind, std::size_t tail_end = 0) {
    if (tail_end == 0) tail_end = leaves.size();
    bool differ = (end_end - end_begin) != (tail_end - tail_begin);
    for (std::size_t i = 0; !differ && i < end_end - end_begin; ++i)
      differ = leaves[end_begin + i].cls != leaves[tail_begin + i].cls;
    if (!differ) return;
    for (std::size_t i = tail_begin; i < tail_end; ++i) limits.push_back({leaves[i].cls, Term::zeta(body), kind});
  }

  Pattern pattern(std::size_t id, const std::vector<char>& in) const {
    const Node& node = nodes[id];
    switch (node.shape) {
      case Shape::Leaf:
        return Pattern::of(in[leaves[node.leaf].cls] ? 'I' : 'O');
      case Shape::Seq: {
        Pattern p;
        for (auto k : node.kids) {
          p.append(pattern(k, in));
          if (p.broken) break;
        }
        return p;
      }
      case Shape::Rep: {
        Pattern p = pattern(node.kids[0], in);
        if (!p.uniform()) p.broken = true;
        return p;
      }
      case Shape::Shuf: {
        Pattern out;
        for (auto k : node.kids) {
          Pattern p = pattern(k, in);
          if (!p.uniform() || (!p.runs.empty() && !out.runs.empty() && p.runs != out.runs)) return {true, ""};
          if (!p.runs.empty()) out = p;
        }
        return out;
      }
    }
    return {true, ""};
  }

  Pattern pattern_of(const ClassSet& s) const {
    std::vector<char> in(classes.size(), 0);
    for (auto c : s) in.at(c) = 1;
    return pattern(root, in);
  }

  ClassSet all() const {
    ClassSet s(classes.size());
    std::iota(s.begin(), s.end(), 0);
    return s;
  }

  const std::vector<ClassSet>& definable() {
    if (convex_sets) return *convex_sets;
    std::set<ClassSet> candidates{ClassSet{}, all()};
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      std::vector<char> seen(classes.size(), 0);
      ClassSet cur;
      for (std::size_t j = i; j < leaves.size(); ++j) {
        std::size_t c = leaves[j].cls;
        if (seen[c]) continue;
        seen[c] = 1;
        cur.insert(std::upper_bound(cur.begin(), cur.end(), c), c);
        candidates.insert(cur);
      }
    }
    std::vector<ClassSet> out;
    for (const auto& s : candidates)
      if (s.empty() || s.size() == classes.size() || !pattern_of(s).broken) out.push_back(s);
    std::stable_sort(out.begin(), out.end(), [](const ClassSet& a, const ClassSet& b) { return a.size() < b.size(); });
    convex_sets = std::move(out);
    return *convex_sets;
  }

  // Largest proper definable segment at one end: suffixes of the orbit order
  // for final segments, prefixes for initial ones.
  ClassSet largest_proper_end(bool final_segment) {
    ClassSet best;
    std::vector<char> seen(classes.size(), 0);
    ClassSet cur;
    const std::string want = final_segment ? "OI" : "IO";
    for (std::size_t step = 0; step < leaves.size(); ++step) {
      std::size_t j = final_segment ? leaves.size() - 1 - step : step;
      std::size_t c = leaves[j].cls;
      if (seen[c]) continue;
      seen[c] = 1;
      cur.insert(std::upper_bound(cur.begin(), cur.end(), c), c);
      if (cur.size() == classes.size()) break;
      Pattern p = pattern_of(cur);
      if (!p.broken && p.runs == want && cur.size() > best.size()) best = cur;
    }
    return best;
  }

  const std::vector<ConvexNType>& convex() {
    if (types) return *types;
    const auto& sets = definable();
    std::map<std::vector<char>, std::vector<std::size_t>> by_signature;
    std::vector<std::vector<char>> sig(classes.size(), std::vector<char>(sets.size(), 0));
    for (std::size_t s = 0; s < sets.size(); ++s)
      for (auto c : sets[s]) sig[c][s] = 1;
    std::vector<ConvexNType> out;
    std::map<std::vector<char>, std::size_t> type_of;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      auto [it, fresh] = type_of.emplace(sig[c], out.size());
      if (fresh) {
        out.push_back({});
        out.back().id = out.size() - 1;
      }
      out[it->second].memberClasses.push_back(c);
    }
    std::set<ClassSet> definable_set(sets.begin(), sets.end());
    for (auto& ty : out) {
      for (const auto& mark : limits) {
        if (std::binary_search(ty.memberClasses.begin(), ty.memberClasses.end(), mark.cls)) {
          ty.limit = true;
          if (!ty.descriptor) {
            ty.descriptor = mark.descriptor;
            ty.limitKind = mark.kind;
          }
        }
      }
      ty.isolatedAtRank = !ty.limit && definable_set.contains(ty.memberClasses);
    }
    types = std::move(out);
    return *types;
  }

  // Elements sampled along the order, with every unbounded family played twice.
  struct Sample {
    std::vector<std::size_t> leaf;
    std::vector<Address> address;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> twins;  // family node, i, j
  };

  Sample sample(std::size_t id) const {
    const Node& node = nodes[id];
    Sample out;
    auto append = [&](const Sample& s, std::optional<std::pair<std::size_t, AddressStep>> replace) {
      std::size_t off = out.leaf.size();
      for (std::size_t i = 0; i < s.leaf.size(); ++i) {
        out.leaf.push_back(s.leaf[i]);
        Address a = s.address[i];
        if (replace) a.path.at(replace->first) = replace->second;
        out.address.push_back(std::move(a));
      }
      for (auto [f, i, j] : s.twins) out.twins.emplace_back(f, i + off, j + off);
      if (out.leaf.size() > kMaxSample) throw BudgetError("condensation sample exceeds " + std::to_string(kMaxSample));
    };
    switch (node.shape) {
      case Shape::Leaf:
        out.leaf.push_back(node.leaf);
        out.address.push_back(leaves[node.leaf].address);
        break;
      case Shape::Seq:
        for (auto k : node.kids) append(sample(k), std::nullopt);
        break;
      case Shape::Rep: {
        Sample s = sample(node.kids[0]);
        append(s, std::nullopt);
        std::size_t off = s.leaf.size();
        append(s, std::make_pair(node.depth, node.dup[0]));
        for (std::size_t i = 0; i < off; ++i) out.twins.emplace_back(id, i, i + off);
        break;
      }
      case Shape::Shuf: {
        std::vector<Sample> parts;
        for (auto k : node.kids) parts.push_back(sample(k));
        std::vector<std::size_t> first;
        for (const auto& s : parts) {
          first.push_back(out.leaf.size());
          append(s, std::nullopt);
        }
        for (std::size_t k = 0; k < parts.size(); ++k) {
          std::size_t off = out.leaf.size();
          append(parts[k], std::make_pair(node.depth, node.dup[k]));
          for (std::size_t i = 0; i < parts[k].leaf.size(); ++i) out.twins.emplace_back(id, first[k] + i, off + i);
        }
        break;
      }
    }
    return out;
  }
};

Analysis::Analysis(Engine& engine, Term t, Rank n) : impl_(std::make_unique<Impl>(engine, t, n)) {}
Analysis::~Analysis() = default;
Analysis::Analysis(Analysis&&) noexcept = default;

Term Analysis::term() const { return impl_->t; }
Rank Analysis::rank() const { return impl_->n; }
const std::vector<OneTypeClass>& Analysis::classes() const { return impl_->classes; }

std::optional<std::size_t> Analysis::find_class(std::uint32_t left, const ColorSet& colors,
                                                std::uint32_t right) const {
  auto it = impl_->class_index.find({left, colors.id(), right});
  if (it == impl_->class_index.end()) return std::nullopt;
  return it->second;
}

const std::vector<ClassSet>& Analysis::definable_convex_sets() { return impl_->definable(); }

bool Analysis::is_convex(const ClassSet& s) const { return !impl_->pattern_of(s).broken; }

ClassSet Analysis::largest_proper_final() { return impl_->largest_proper_end(true); }
ClassSet Analysis::largest_proper_initial() { return impl_->largest_proper_end(false); }

bool Analysis::self_additive() {
  Term t = impl_->t;
  if (t.is_empty() || t.kind() == Kind::Pt)
    throw PreconditionError("self-additivity needs an order with more than one point");
  return impl_->definable().size() == 2;
}

const std::vector<ConvexNType>& Analysis::convex_types() { return impl_->convex(); }

std::vector<std::size_t> Analysis::region_of(const ClassSet& s) const {
  std::set<std::size_t> tops;
  for (const auto& leaf : impl_->leaves)
    if (std::binary_search(s.begin(), s.end(), leaf.cls)) tops.insert(leaf.top);
  return {tops.begin(), tops.end()};
}

Condensation Analysis::condensation() {
  if (!self_additive())
    throw PreconditionError("condensation is defined for self-additive orders; " + print(impl_->t) +
                            " has a proper definable convex set at rank " + std::to_string(impl_->n));
  Impl& im = *impl_;
  Engine& e = im.engine;
  const Rank n = im.n;
  Term t = im.t;
  auto s = im.sample(im.root);
  const std::size_t m = s.leaf.size();

  Condensation out;
  out.rank = n;
  std::vector<std::uint32_t> left(m), right(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.sample.push_back({s.address[i], im.leaves[s.leaf[i]].cls});
    left[i] = e.class_of(left_of(t, s.address[i]), n);
    right[i] = e.class_of(right_of(t, s.address[i]), n);
  }

  std::map<std::uint64_t, std::unique_ptr<Analysis>> cache;
  auto analysis_of = [&](Term x) -> Analysis& {
    auto& slot = cache[x.id()];
    if (!slot) slot = std::make_unique<Analysis>(e, x, n);
    return *slot;
  };

  DisjointSets ds(m);
  for (std::size_t a = 0; a < m; ++a) {
    Term L = left_of(t, s.address[a]);
    if (!L.is_empty()) {
      Analysis& al = analysis_of(L);
      ClassSet fin = al.largest_proper_final();
      if (!fin.empty())
        for (std::size_t b = 0; b < a; ++b) {
          if (ds.find(a) == ds.find(b)) continue;
          std::uint32_t mid = e.class_of(between(t, s.address[b], s.address[a]), n);
          auto c = al.find_class(left[b], im.leaves[s.leaf[b]].colors, mid);
          if (c && std::binary_search(fin.begin(), fin.end(), *c)) ds.unite(a, b);
        }
    }
    Term R = right_of(t, s.address[a]);
    if (!R.is_empty()) {
      Analysis& ar = analysis_of(R);
      ClassSet init = ar.largest_proper_initial();
      if (!init.empty())
        for (std::size_t b = a + 1; b < m; ++b) {
          if (ds.find(a) == ds.find(b)) continue;
          std::uint32_t mid = e.class_of(between(t, s.address[a], s.address[b]), n);
          auto c = ar.find_class(mid, im.leaves[s.leaf[b]].colors, right[b]);
          if (c && std::binary_search(init.begin(), init.end(), *c)) ds.unite(a, b);
        }
    }
  }

  std::map<std::size_t, std::size_t> comp_index;
  for (std::size_t i = 0; i < m; ++i) {
    auto [it, fresh] = comp_index.emplace(ds.find(i), out.classes.size());
    if (fresh) out.classes.emplace_back();
    out.classes[it->second].push_back(i);
  }

  std::map<std::size_t, bool> merged;
  for (auto [f, i, j] : s.twins) {
    bool same = ds.find(i) == ds.find(j);
    auto [it, fresh] = merged.emplace(f, same);
    if (!fresh) it->second = it->second && same;
  }
  bool finite = true;
  std::set<Term, StructuralLess> galaxies;
  for (auto [f, ok] : merged) {
    if (ok)
      galaxies.insert(im.nodes[f].term);
    else
      finite = false;
  }
  if (finite) out.count = out.classes.size();
  out.galaxies.assign(galaxies.begin(), galaxies.end());

  if (n >= 2) {
    Analysis lower(e, t, n - 1);
    bool lower_sa = lower.self_additive();
    if (lower_sa) {
      Condensation below = lower.condensation();
      out.stable = below.count == out.count;
    }
  }
  return out;
}

std::vector<OneTypeClass> one_types(Engine& engine, Term t, Rank n) { return Analysis(engine, t, n).classes(); }

std::vector<ClassSet> definable_convex_sets(Engine& engine, Term t, Rank n) {
  Analysis a(engine, t, n);
  return a.definable_convex_sets();
}

bool self_additive_at(Engine& engine, Term t, Rank n) { return Analysis(engine, t, n).self_additive(); }

Condensation condensation_at(Engine& engine, Term t, Rank n) { return Analysis(engine, t, n).condensation(); }

std::vector<ConvexNType> convex_types(Engine& engine, Term t, Rank n) {
  Analysis a(engine, t, n);
  return a.convex_types();
}

// ---------------------------------------------------------------------------
// Splicing

namespace {

std::vector<Term> parts_of(Term t) {
  if (t.is_empty()) return {};
  if (t.kind() == Kind::Sum) return {t.children().begin(), t.children().end()};
  return {t};
}

}  // namespace

std::optional<ConvexBlock> find_block(Term t, Term block, std::size_t occurrence) {
  auto parts = parts_of(t);
  auto want = parts_of(block);
  if (want.empty()) return std::nullopt;
  std::size_t seen = 0;
  for (std::size_t i = 0; i + want.size() <= parts.size(); ++i) {
    if (!std::equal(want.begin(), want.end(), parts.begin() + static_cast<std::ptrdiff_t>(i))) continue;
    if (seen++ < occurrence) continue;
    auto at = [&](std::size_t a, std::size_t b) {
      return Term::sum(std::vector<Term>(parts.begin() + static_cast<std::ptrdiff_t>(a),
                                         parts.begin() + static_cast<std::ptrdiff_t>(b)));
    };
    return ConvexBlock{at(0, i), block, at(i + want.size(), parts.size())};
  }
  return std::nullopt;
}

Term splice(Term t, const ConvexBlock& cut, Term d) {
  if (Term::sum({cut.left, cut.block, cut.right}) != t)
    throw PreconditionError("invalid context: left + block + right does not reassemble the term");
  return Term::sum({cut.left, d, cut.right});
}

Term drop_convex(Engine& engine, Term t, Rank n, const std::vector<std::size_t>& typeIds) {
  if (typeIds.empty()) return t;
  Analysis an(engine, t, n);
  const auto& types = an.convex_types();
  ClassSet drop;
  for (auto id : typeIds) {
    if (id >= types.size()) throw PreconditionError("no convex type with id " + std::to_string(id));
    drop.insert(drop.end(), types[id].memberClasses.begin(), types[id].memberClasses.end());
  }
  std::sort(drop.begin(), drop.end());
  auto parts = parts_of(t);
  std::vector<int> state(parts.size(), -1);  // -1 untouched, 0 keep, 1 drop
  for (std::size_t c = 0; c < an.classes().size(); ++c) {
    bool in = std::binary_search(drop.begin(), drop.end(), c);
    for (const auto& rep : an.classes()[c].members) {
      std::size_t top = 0;
      if (t.kind() == Kind::Sum) top = std::get<SumIndex>(rep.address.path.at(0)).index;
      int want = in ? 1 : 0;
      if (state[top] != -1 && state[top] != want)
        throw PreconditionError("region not term-contiguous: part " + std::to_string(top) +
                                " mixes dropped and kept classes");
      state[top] = want;
    }
  }
  std::vector<Term> kept;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (state[i] != 1) kept.push_back(parts[i]);
  return Term::sum(std::move(kept));
}

}  // namespace clo
