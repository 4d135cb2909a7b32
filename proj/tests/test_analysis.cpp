#include <doctest.h>

#include "clo/analysis.hpp"
#include "clo/error.hpp"

using namespace clo;

TEST_CASE("one-type classes") {
  Engine e;
  for (Rank n = 1; n <= 5; ++n) CHECK(one_types(e, eta(), n).size() == 1);
  CHECK(one_types(e, parse("sh(pt[a],pt[b])"), 3).size() == 2);
  CHECK(one_types(e, omega(), 1).size() == 2);
  CHECK(one_types(e, zeta(), 4).size() == 1);
}

TEST_CASE("definable convex sets") {
  Engine e;
  CHECK(definable_convex_sets(e, eta(), 3).size() == 2);
  CHECK(definable_convex_sets(e, omega(), 1).size() == 4);
  CHECK(definable_convex_sets(e, zeta(), 4).size() == 2);
}

TEST_CASE("self-additivity") {
  Engine e;
  for (Rank n = 1; n <= 6; ++n) {
    CHECK(self_additive_at(e, zeta(), n));
    CHECK(self_additive_at(e, eta(), n));
  }
  CHECK(!self_additive_at(e, omega(), 1));
  CHECK(!self_additive_at(e, parse("z(pt[]) + pt[] + z(pt[])"), 2));
  CHECK(!self_additive_at(e, parse("pt[] + eta"), 1));
  CHECK(!self_additive_at(e, parse("pt[] + eta"), 2));
  CHECK_THROWS_AS(self_additive_at(e, Term::point({}), 2), PreconditionError);
  CHECK_THROWS_AS(self_additive_at(e, Term::empty(), 2), PreconditionError);
}

TEST_CASE("condensation") {
  Engine e;
  for (Rank n = 2; n <= 4; ++n) CHECK(condensation_at(e, zeta(), n).count == std::size_t{1});
  auto q = condensation_at(e, eta(), 3);
  CHECK(!q.count.has_value());
  for (const auto& cls : q.classes) CHECK(cls.size() == 1);
  CHECK_THROWS_AS(condensation_at(e, omega(), 2), PreconditionError);
  for (int k = 1; k <= 5; ++k) {
    Term t = repeat(zeta(), k);
    auto c = condensation_at(e, t, 4);
    CHECK(c.count == std::size_t(k));
  }
}

TEST_CASE("convex types") {
  Engine e;
  auto q = convex_types(e, eta(), 3);
  REQUIRE(q.size() == 1);
  CHECK(q[0].isolatedAtRank);
  auto w = convex_types(e, omega(), 2);
  int limits = 0;
  for (const auto& ty : w) {
    if (ty.limit) {
      ++limits;
      CHECK(ty.descriptor == zeta());
      CHECK(!ty.isolatedAtRank);
    } else {
      CHECK(ty.isolatedAtRank);
    }
  }
  CHECK(limits == 1);
  CHECK(w.size() >= 2);
  auto ab = convex_types(e, parse("sh(pt[a],pt[b])"), 3);
  REQUIRE(ab.size() == 1);
  CHECK(ab[0].memberClasses.size() == 2);
}

TEST_CASE("splice and drop") {
  Engine e;
  Term t = parse("omega + zeta");
  auto cut = find_block(t, zeta());
  REQUIRE(cut);
  CHECK(splice(t, *cut, parse("zeta + zeta")) == parse("omega + zeta + zeta"));
  Term u = parse("pt[a] + eta + pt[b]");
  auto c2 = find_block(u, eta());
  REQUIRE(c2);
  CHECK(splice(u, *c2, parse("eta + pt[c] + eta")) == parse("pt[a] + eta + pt[c] + eta + pt[b]"));
  CHECK_THROWS_AS(splice(u, ConvexBlock{eta(), eta(), eta()}, eta()), PreconditionError);

  auto types = convex_types(e, u, 3);
  std::optional<std::size_t> b_type;
  for (const auto& ty : types)
    for (auto c : ty.memberClasses)
      if (one_types(e, u, 3)[c].colors == ColorSet{"b"}) b_type = ty.id;
  REQUIRE(b_type);
  CHECK(drop_convex(e, u, 3, {*b_type}) == parse("pt[a] + eta"));
  CHECK(drop_convex(e, u, 3, {}) == u);

  Term v = parse("eta + pt[c] + eta");
  auto vt = convex_types(e, v, 3);
  auto vc = one_types(e, v, 3);
  for (const auto& ty : vt)
    if (ty.memberClasses.size() == 1 && vc[ty.memberClasses[0]].colors == ColorSet{"c"}) {
      Term d = drop_convex(e, v, 3, {ty.id});
      CHECK(d == parse("eta + eta"));
      CHECK(e.ef_equiv(d, eta(), 5));
    }
}

TEST_CASE("classification") {
  Engine e;
  Budgets b;
  CHECK(classify(e, eta(), b).kind == VerdictKind::Categorical);
  CHECK(classify(e, parse("sh(pt[a],pt[b])"), b).kind == VerdictKind::Categorical);
  for (int k = 0; k <= 5; ++k) CHECK(classify(e, fin(k), b).kind == VerdictKind::Categorical);
  auto z = classify(e, zeta(), b);
  CHECK(z.kind == VerdictKind::BorelComplete);
  CHECK(z.certificate == "unique ∼-class");
  auto w = classify(e, omega(), b);
  CHECK(w.kind == VerdictKind::BorelComplete);
  CHECK(w.certificate.starts_with("non-categorical ω-tail"));
  CHECK(classify(e, parse("sh(pt[a],pt[b],pt[c])"), Budgets{2, 0}).kind == VerdictKind::Unknown);
}
