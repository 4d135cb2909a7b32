#include "clo/census.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <functional>
#include <set>

#include "clo/address.hpp"
#include "clo/error.hpp"

namespace clo {

namespace {

constexpr std::size_t kModelGuard = 256;

Term pt(std::vector<std::string> colors = {}) { return Term::point(ColorSet(std::move(colors))); }

Term dense(int colors) {
  std::vector<Term> args;
  for (int j = 0; j < colors; ++j) args.push_back(pt({"P" + std::to_string(j)}));
  return Term::shuffle(std::move(args));
}

// The elements of the orbit tree satisfying `in`, left to right.
struct Region {
  std::vector<OrbitRep> reps;
  std::vector<ColorSet> colors;
  bool empty() const { return reps.empty(); }
  bool first_bounded() const { return !reps.empty() && !reps.front().unbounded; }
  bool last_bounded() const { return !reps.empty() && !reps.back().unbounded; }
};

Region region(Analysis& an, const std::function<bool(const Address&, const ColorSet&)>& in) {
  Term t = an.term();
  Region r;
  for (const auto& c : an.classes())
    for (const auto& m : c.members)
      if (in(m.address, c.colors)) r.reps.push_back(m);
  std::sort(r.reps.begin(), r.reps.end(),
            [&](const OrbitRep& a, const OrbitRep& b) { return compare(t, a.address, b.address) == Order::LT; });
  for (const auto& m : r.reps) r.colors.push_back(color_at(t, m.address));
  return r;
}

bool left_has(Term t, const Address& a, const std::string& color) {
  return colors_of(left_of(t, a)).contains(color);
}
bool right_has(Term t, const Address& a, const std::string& color) {
  return colors_of(right_of(t, a)).contains(color);
}

std::string shape_of(const Region& r) {
  if (r.reps.size() == 1 && r.first_bounded()) return "1";
  std::string s = "η";
  if (r.first_bounded()) s = "1+" + s;
  if (r.last_bounded()) s += "+1";
  return s;
}

Term step_block(int k, int n0, bool realized) {
  std::vector<Term> parts{eta()};
  if (realized) parts.push_back(pt());
  parts.push_back(Term::omega_star(Term::sum(eta(), pt({"s" + std::to_string(k) + "w"}))));
  for (int m = n0 + 1; m >= 2; --m) {
    parts.push_back(eta());
    parts.push_back(pt({"s" + std::to_string(k) + "n" + std::to_string(m)}));
  }
  return Term::sum(std::move(parts));
}

}  // namespace

std::string ExampleFamily::name() const {
  switch (kind) {
    case FamilyKind::Zeta:
      return "zeta";
    case FamilyKind::Eta:
      return "eta";
    case FamilyKind::Tn:
      return "tn(" + std::to_string(n) + ")";
    case FamilyKind::StepPoints:
      return "step-points(" + std::to_string(k0) + "," + std::to_string(n0) + ")";
    case FamilyKind::FullRationals:
      return "full-rationals(" + std::to_string(depth) + ")";
  }
  return "?";
}

void ExampleFamily::check() const {
  switch (kind) {
    case FamilyKind::Tn:
      if (n < 3 || n > 8) throw GuardError("tn requires 3 <= n <= 8");
      break;
    case FamilyKind::StepPoints:
      if (k0 < 1 || k0 > 4 || n0 < 1 || n0 > 6) throw GuardError("step-points requires 1 <= K0 <= 4, 1 <= N0 <= 6");
      break;
    case FamilyKind::FullRationals:
      if (depth < 1 || depth > 16) throw GuardError("full-rationals requires 1 <= depth <= 16");
      break;
    default:
      break;
  }
}

ExpectedClass expected_class(const ExampleFamily& f) {
  switch (f.kind) {
    case FamilyKind::Zeta:
      return {VerdictKind::BorelComplete, std::nullopt};
    case FamilyKind::Eta:
      return {VerdictKind::Categorical, std::nullopt};
    case FamilyKind::Tn:
      return {VerdictKind::FiniteModels, f.n};
    case FamilyKind::StepPoints:
      return {VerdictKind::RealsLike, std::nullopt};
    case FamilyKind::FullRationals:
      return {VerdictKind::SetsOfRealsLike, std::nullopt};
  }
  return {};
}

std::string to_string(const ExpectedClass& c) {
  auto s = verdict_name(c.kind);
  if (c.models) s += "(" + std::to_string(*c.models) + ")";
  return s;
}

TruncatedModel tn_model(int n, int trunc, const std::string& profile) {
  ExampleFamily::tn(n).check();
  if (trunc < 0) throw PreconditionError("truncation must be nonnegative");
  Term d = dense(n - 2);
  TruncatedModel m;
  std::vector<Term> parts{d};
  for (int i = 0; i <= trunc; ++i) {
    std::string c = "c" + std::to_string(i);
    parts.push_back(pt({"P0", c}));
    parts.push_back(d);
    m.constantMap[c] = c;
  }
  // The constants past the truncation share one marker.
  parts.push_back(Term::omega(Term::sum(pt({"P0", "cw"}), d)));
  if (profile == "gap") {
    parts.push_back(d);
  } else if (profile != "cofinal") {
    int j = -1;
    if (profile.size() > 1 && profile[0] == 'P') j = std::stoi(profile.substr(1));
    if (j < 0 || j > n - 3) throw PreconditionError("unknown tn profile " + profile);
    parts.push_back(pt({profile}));
    parts.push_back(d);
  }
  m.term = canonicalize(Term::sum(std::move(parts)));
  m.label = profile;
  return m;
}

TruncatedModel step_points_model(int k0, int n0, const std::vector<int>& realizedCuts) {
  ExampleFamily::step_points(k0, n0).check();
  std::vector<Term> blocks;
  TruncatedModel m;
  for (int k = 0; k < k0; ++k) {
    blocks.push_back(step_block(k, n0, true));
    for (int j = 2; j <= n0 + 1; ++j)
      m.constantMap["c(" + std::to_string(k) + "+1/" + std::to_string(j) + ")"] =
          "s" + std::to_string(k) + "n" + std::to_string(j);
  }
  blocks.push_back(eta());
  Term t = canonicalize(Term::sum(std::move(blocks)));

  std::set<int> keep(realizedCuts.begin(), realizedCuts.end());
  for (int k : keep)
    if (k < 0 || k >= k0) throw PreconditionError("cut index out of window");
  // Omitted cuts: splice the realizing point out of the full model.
  for (int k = 0; k < k0; ++k) {
    if (keep.count(k)) continue;
    Term tail = Term::omega_star(Term::sum(eta(), pt({"s" + std::to_string(k) + "w"})));
    auto cut = find_block(t, Term::sum(pt(), tail));
    if (!cut) throw Error("realized cut " + std::to_string(k) + " not found");
    t = canonicalize(splice(t, *cut, tail));
  }
  m.term = t;
  std::string label = "{";
  for (int k : keep) label += (label.size() > 1 ? "," : "") + std::to_string(k);
  m.label = label + "}";
  return m;
}

TruncatedModel full_rationals_model(int depth, const std::vector<Completion>& choices) {
  ExampleFamily::full_rationals(depth).check();
  std::map<int, std::string> at;
  for (const auto& c : choices) {
    if (c.slot < 0 || c.slot >= depth) throw PreconditionError("completion slot out of range");
    if (std::find(kCompletionShapes.begin(), kCompletionShapes.end(), c.shape) == kCompletionShapes.end())
      throw PreconditionError("unknown completion shape " + c.shape);
    auto [it, fresh] = at.emplace(c.slot, c.shape);
    if (!fresh && it->second != c.shape) throw PreconditionError("conflicting completions for one slot");
  }
  TruncatedModel m;
  std::vector<Term> parts{eta()};
  for (int j = 0; j <= depth; ++j) {
    std::string q = "q" + std::to_string(j);
    parts.push_back(pt({q}));
    parts.push_back(eta());
    m.constantMap[q] = q;
    if (j == depth) break;
    std::string s = std::to_string(j);
    parts.push_back(Term::omega(Term::sum(eta(), pt({"r" + s + "a"}))));
    if (auto it = at.find(j); it != at.end()) {
      const auto& shape = it->second;
      if (shape == "1") parts.push_back(pt());
      if (shape.starts_with("1+")) parts.push_back(pt());
      if (shape != "1") parts.push_back(eta());
      if (shape.ends_with("+1")) parts.push_back(pt());
    }
    parts.push_back(Term::omega_star(Term::sum(eta(), pt({"r" + s + "b"}))));
    parts.push_back(eta());
  }
  m.term = canonicalize(Term::sum(std::move(parts)));
  std::string label = "{";
  for (const auto& [slot, shape] : at) label += (label.size() > 1 ? "," : "") + std::to_string(slot) + ":" + shape;
  m.label = label + "}";
  return m;
}

std::vector<TruncatedModel> generate_models(const ExampleFamily& f, int trunc) {
  f.check();
  std::vector<TruncatedModel> out;
  switch (f.kind) {
    case FamilyKind::Zeta:
      out.push_back({zeta(), {}, "zeta"});
      break;
    case FamilyKind::Eta:
      out.push_back({eta(), {}, "eta"});
      break;
    case FamilyKind::Tn:
      out.push_back(tn_model(f.n, trunc, "cofinal"));
      out.push_back(tn_model(f.n, trunc, "gap"));
      for (int j = 0; j <= f.n - 3; ++j) out.push_back(tn_model(f.n, trunc, "P" + std::to_string(j)));
      break;
    case FamilyKind::StepPoints:
      for (int mask = 0; mask < (1 << f.k0); ++mask) {
        std::vector<int> cuts;
        for (int k = 0; k < f.k0; ++k)
          if (mask >> k & 1) cuts.push_back(k);
        out.push_back(step_points_model(f.k0, f.n0, cuts));
      }
      break;
    case FamilyKind::FullRationals: {
      std::size_t options = kCompletionShapes.size() + 1, total = 1;
      for (int j = 0; j < f.depth; ++j)
        if ((total *= options) > kModelGuard)
          throw GuardError("full-rationals generates more than " + std::to_string(kModelGuard) + " models");
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<Completion> choices;
        std::size_t rest = code;
        for (int j = 0; j < f.depth; ++j, rest /= options)
          if (rest % options) choices.push_back({j, kCompletionShapes[rest % options - 1]});
        out.push_back(full_rationals_model(f.depth, choices));
      }
      break;
    }
  }
  return out;
}

std::string ModelInvariant::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + "}";
}

ModelInvariant invariant(Engine& engine, const ExampleFamily& f, const TruncatedModel& m, Rank n) {
  f.check();
  Analysis an(engine, m.term, n);
  Term t = m.term;
  std::set<std::string> parts;
  switch (f.kind) {
    case FamilyKind::Zeta:
    case FamilyKind::Eta:
      parts.insert("classes=" + std::to_string(an.classes().size()));
      break;
    case FamilyKind::Tn: {
      // Elements above every constant.
      auto above = region(an, [&](const Address& a, const ColorSet& c) {
        return !c.contains("cw") && !right_has(t, a, "cw");
      });
      if (above.empty())
        parts.insert("cofinal");
      else if (above.first_bounded())
        parts.insert(above.colors.front().to_string());
      else
        parts.insert("gap");
      break;
    }
    case FamilyKind::StepPoints:
      for (int k = 0; k < f.k0; ++k) {
        std::string tail = "s" + std::to_string(k) + "w", prev = "s" + std::to_string(k - 1) + "n2";
        auto below = region(an, [&](const Address& a, const ColorSet& c) {
          return c.empty() && right_has(t, a, tail) && !left_has(t, a, tail) && (k == 0 || left_has(t, a, prev));
        });
        if (below.last_bounded()) parts.insert(std::to_string(k));
      }
      break;
    case FamilyKind::FullRationals:
      for (int j = 0; j < f.depth; ++j) {
        std::string s = std::to_string(j);
        auto cut = region(an, [&](const Address& a, const ColorSet& c) {
          return c.empty() && !right_has(t, a, "r" + s + "a") && right_has(t, a, "r" + s + "b") &&
                 !left_has(t, a, "r" + s + "b");
        });
        if (!cut.empty()) parts.insert(s + ":" + shape_of(cut));
      }
      break;
  }
  return {std::vector<std::string>(parts.begin(), parts.end())};
}

FamilyReport verify_family(Engine& engine, const ExampleFamily& f, int trunc, Rank n, bool parallel) {
  FamilyReport r;
  r.family = f;
  r.trunc = trunc;
  r.rank = n;
  r.expectedClass = expected_class(f);
  auto models = generate_models(f, trunc);
  r.generated = models.size();

  std::vector<ModelInvariant> inv;
  std::set<std::uint32_t> theories;
  for (const auto& m : models) {
    r.labels.push_back(m.label);
    inv.push_back(invariant(engine, f, m, n));
    r.invariants.push_back(inv.back().to_string());
    theories.insert(engine.n_theory(m.term, n).classId);
  }
  r.modelCount = theories.size();

  r.pairMatrix.assign(models.size(), std::vector<std::optional<Rank>>(models.size()));
  auto row = [&](std::size_t i) {
    for (std::size_t j = i + 1; j < models.size(); ++j)
      r.pairMatrix[i][j] = engine.distinguishing_rank(models[i].term, models[j].term, n);
  };
  if (parallel) {
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next++) < models.size();) row(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t i = 0; i < models.size(); ++i) row(i);
  }
  r.invariantInjective = true;
  for (std::size_t i = 0; i < models.size(); ++i)
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      r.pairMatrix[j][i] = r.pairMatrix[i][j];
      if ((inv[i] == inv[j]) != !r.pairMatrix[i][j].has_value()) r.invariantInjective = false;
    }

  switch (f.kind) {
    case FamilyKind::Zeta:
    case FamilyKind::Eta:
      r.pass = r.modelCount == 1 && classify(engine, models[0].term, Budgets{n, 3}).kind == r.expectedClass.kind;
      break;
    case FamilyKind::Tn:
      r.pass = r.modelCount == static_cast<std::size_t>(f.n) && r.invariantInjective;
      break;
    case FamilyKind::StepPoints:
    case FamilyKind::FullRationals:
      r.pass = r.modelCount == r.generated && r.invariantInjective;
      break;
  }
  return r;
}

}  // namespace clo
