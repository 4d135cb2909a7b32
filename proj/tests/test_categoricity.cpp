#include <doctest.h>

#include <unordered_set>

#include "clo/categoricity.hpp"
#include "clo/error.hpp"

using namespace clo;

TEST_CASE("syntactic rank") {
  CHECK(syntactic_rank(parse("pt[a]")) == 0);
  CHECK(syntactic_rank(eta()) == 1);
  CHECK(!syntactic_rank(zeta()).has_value());
  CHECK(!syntactic_rank(Term::empty()).has_value());
  CHECK(syntactic_rank(fin(2)) == 1);
  CHECK(syntactic_rank(fin(3)) == 2);
  CHECK(syntactic_rank(fin(4)) == 2);
  CHECK(syntactic_rank(fin(5)) == 3);
  CHECK(syntactic_rank(parse("sh(pt[] + pt[]) + pt[a]")) == 3);
  CHECK(syntactic_rank(parse("pt[] + pt[] + sh(pt[] + pt[])")) == 3);
  auto cert = syntactic_cert(parse("pt[a] + sh(pt[b], pt[] + pt[c]) + pt[]"));
  CHECK(valid_cert(cert));
}

TEST_CASE("enumeration counts") {
  CHECK(mn_count(0, 0) == 1);
  CHECK(mn_count(0, 1) == 3);
  CHECK(mn_count(0, 2) == 19);
  CHECK(mn_count(1, 0) == 2);
  CHECK(mn_count(1, 1) == 9);
  CHECK(mn_count(1, 2) == 601);
  auto l0 = enumerate_Mn(0, 0);
  CHECK(l0 == std::vector<Term>{Term::point({})});
  auto l1 = enumerate_Mn(0, 1);
  CHECK(l1 == std::vector<Term>{Term::point({}), fin(2), eta()});
  auto k1 = enumerate_Mn(1, 0);
  CHECK(k1 == std::vector<Term>{Term::point({}), Term::point({"a"})});
  for (int k = 0; k <= 1; ++k)
    for (int n = 0; n <= 2; ++n) {
      auto terms = enumerate_Mn(k, n);
      CHECK(terms.size() == mn_count(k, n));
      for (Term t : terms) CHECK(syntactic_rank(t).value() <= n);
    }
  CHECK_THROWS_AS(enumerate_Mn(2, 2), GuardError);
  CHECK_THROWS_AS(enumerate_Mn(4, 0), GuardError);
}

TEST_CASE("convex pieces of enumerated members stay low") {
  Engine e;
  for (int n = 0; n <= 2; ++n) {
    std::unordered_set<Term> seen;
    for (Term t : enumerate_Mn(1, n)) {
      if (!seen.insert(t).second) continue;
      for (const auto& s : e.splits(t, 1)) {
        if (!s.left.is_empty()) CHECK(syntactic_rank(s.left).value() <= 2 * n + 1);
        if (!s.right.is_empty()) CHECK(syntactic_rank(s.right).value() <= 2 * n + 1);
      }
    }
  }
}

TEST_CASE("enumerated members and the engine agree") {
  Engine e;
  std::vector<Term> distinct;
  std::unordered_set<Term> seen;
  for (Term t : enumerate_Mn(0, 2))
    if (seen.insert(t).second) distinct.push_back(t);
  for (std::size_t i = 0; i < distinct.size(); ++i)
    for (std::size_t j = i + 1; j < distinct.size(); ++j)
      if (!e.ef_equiv(distinct[i], distinct[j], 4)) {
        auto r = e.distinguishing_rank(distinct[i], distinct[j], 4);
        CHECK(r.has_value());
        CHECK(*r <= 4);
      }
}

TEST_CASE("categoricity verdicts") {
  Engine e;
  auto q = is_categorical(e, eta(), 4, 2);
  REQUIRE(std::holds_alternative<CatCategorical>(q));
  CHECK(std::get<CatCategorical>(q).cert->level == 1);
  CHECK(std::get<CatCategorical>(q).cert->rule == MnCert::Rule::Shuffle);
  CHECK(std::holds_alternative<CatNotCategorical>(is_categorical(e, zeta(), 4, 2)));
  CHECK(std::holds_alternative<CatNotCategorical>(is_categorical(e, parse("w(pt[a])"), 4, 2)));
  auto cand = find_candidate(e, parse("eta + pt[] + eta"), 4, 2);
  REQUIRE(cand);
  CHECK(cand->witness == eta());
}
