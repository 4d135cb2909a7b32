#include <doctest.h>

#include <random>

#include "clo/engine.hpp"
#include "clo/error.hpp"
#include "clo/finite.hpp"
#include "clo/gen.hpp"

using namespace clo;

namespace {

// fin(a) and fin(b) agree at rank n exactly when a = b or both are long.
bool chain_law(std::uint64_t a, std::uint64_t b, Rank n) {
  std::uint64_t t = (std::uint64_t{1} << n) - 1;
  return a == b || (a >= t && b >= t);
}

bool has_split(const std::vector<SplitTriple>& ss, Term l, ColorSet c, Term r) {
  for (auto& s : ss)
    if (s.left == l && s.point == c && s.right == r) return true;
  return false;
}

}  // namespace

TEST_CASE("splits follow the decomposition rules") {
  Engine e;
  auto z = e.splits(zeta(), 3);
  REQUIRE(z.size() == 1);
  CHECK(has_split(z, parse("w*(pt[])"), ColorSet{}, omega()));
  auto q = e.splits(eta(), 3);
  REQUIRE(q.size() == 1);
  CHECK(has_split(q, eta(), ColorSet{}, eta()));
  auto w = e.splits(omega(), 2);
  CHECK(w.size() == 5);
  for (std::uint64_t k = 0; k <= 4; ++k) CHECK(has_split(w, fin(k), ColorSet{}, omega()));
  CHECK(e.splits(Term::empty(), 2).empty());
  auto p = e.splits(parse("pt[a]"), 1);
  REQUIRE(p.size() == 1);
  CHECK(p[0].point == ColorSet{"a"});
  auto s = e.splits(parse("pt[a] + sh(pt[b])"), 1);
  CHECK(has_split(s, Term::empty(), ColorSet{"a"}, parse("sh(pt[b])")));
  CHECK(has_split(s, parse("pt[a] + sh(pt[b])"), ColorSet{"b"}, parse("sh(pt[b])")));
  for (auto& x : s) {
    CHECK(color_at(parse("pt[a] + sh(pt[b])"), x.address) == x.point);
    CHECK(left_of(parse("pt[a] + sh(pt[b])"), x.address) == x.left);
  }
}

TEST_CASE("split addresses name elements whose contexts match") {
  std::mt19937_64 rng(3);
  Engine e;
  for (int i = 0; i < 300; ++i) {
    Term t = gen::random_term(rng, 3);
    for (auto& s : e.splits(t, 2)) {
      CHECK(color_at(t, s.address) == s.point);
      CHECK(left_of(t, s.address) == s.left);
      CHECK(right_of(t, s.address) == s.right);
    }
  }
}

TEST_CASE("small equivalences") {
  Engine e;
  CHECK(e.ef_equiv(omega(), zeta(), 1));
  CHECK(!e.ef_equiv(omega(), zeta(), 2));
  CHECK(e.ef_equiv(fin(3), fin(4), 2));
  CHECK(!e.ef_equiv(fin(2), fin(3), 2));
  for (Rank n = 0; n <= 6; ++n) {
    CHECK(e.ef_equiv(eta(), parse("eta + pt[] + eta"), n));
    CHECK(e.ef_equiv(zeta(), parse("zeta + zeta"), n));
    CHECK(e.n_theory(zeta(), n) == e.n_theory(parse("w*(pt[]) + w(pt[])"), n));
    CHECK(e.n_theory(parse("sh(pt[a],pt[b])"), n) == e.n_theory(parse("sh(pt[b],pt[a])"), n));
  }
  CHECK(e.ef_equiv(Term::empty(), Term::point({}), 0));
  for (Rank n = 1; n <= 6; ++n) CHECK(!e.ef_equiv(Term::empty(), Term::point({}), n));
  CHECK(!e.ef_equiv(parse("pt[a]"), parse("pt[b]"), 1));
}

TEST_CASE("distinguishing rank") {
  Engine e;
  CHECK(e.distinguishing_rank(omega(), zeta(), 4) == 2);
  CHECK(e.distinguishing_rank(omega(), parse("omega + omega"), 4) == 3);
  CHECK(!e.distinguishing_rank(eta(), eta(), 8).has_value());
  CHECK_THROWS_AS(e.distinguishing_rank(eta(), eta(), 9), BudgetError);
  CHECK(e.stable_from(omega(), zeta(), 5) == 2);
  CHECK(e.stable_from(eta(), eta(), 5) == 0);
}

TEST_CASE("chain law") {
  Engine e;
  for (Rank n = 0; n <= 4; ++n)
    for (std::uint64_t a = 0; a <= 20; ++a)
      for (std::uint64_t b = 0; b <= 20; ++b) CHECK(e.ef_equiv(fin(a), fin(b), n) == chain_law(a, b, n));
}

TEST_CASE("witness transcripts") {
  Engine e;
  auto w = e.witness(omega(), zeta(), 2);
  CHECK(check_transcript(e, w));
  CHECK(w->rounds == 2);

  auto c = e.witness(parse("pt[a]"), parse("pt[b]"), 1);
  CHECK(check_transcript(e, c));
  REQUIRE(c->replies.size() == 1);
  CHECK(c->replies[0].outcome == ReplyOutcome::ColorMismatch);

  auto f = e.witness(fin(2), fin(3), 2);
  CHECK(check_transcript(e, f));

  auto none = e.witness(Term::point({}), Term::empty(), 1);
  CHECK(none->side == 0);
  CHECK(none->replies.empty());
  CHECK(check_transcript(e, none));

  CHECK_THROWS_AS(e.witness(eta(), eta(), 3), PreconditionError);
}

TEST_CASE("tampered transcripts are rejected") {
  Engine e;
  auto w = e.witness(fin(2), fin(3), 2);
  auto bad = std::make_shared<GameNode>(*w);
  bad->replies.pop_back();
  CHECK(!check_transcript(e, bad));
  auto wrong = std::make_shared<GameNode>(*w);
  wrong->rounds = 1;
  CHECK(!check_transcript(e, wrong));
}

TEST_CASE("random witnesses replay") {
  std::mt19937_64 rng(5);
  Engine e;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Term a = gen::random_term(rng, 3), b = gen::random_term(rng, 3);
    for (Rank n = 1; n <= 3; ++n) {
      if (e.ef_equiv(a, b, n)) continue;
      CHECK(check_transcript(e, e.witness(a, b, n)));
      ++checked;
      break;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("compositional classes agree with literal split recursion") {
  std::mt19937_64 rng(17);
  Engine fast;
  Engine slow(EngineOptions{.compositional = false});
  std::vector<Term> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(gen::random_term(rng, 3));
  for (Rank n = 0; n <= 3; ++n)
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i; j < pool.size(); ++j)
        CHECK(fast.ef_equiv(pool[i], pool[j], n) == slow.ef_equiv(pool[i], pool[j], n));
}

TEST_CASE("doubling the copy cap changes no verdict") {
  std::mt19937_64 rng(23);
  Engine base;
  Engine wide(EngineOptions{.cap_shift = 1});
  std::vector<Term> pool{omega(), zeta(), eta(), parse("omega + omega"), parse("w*(pt[a] + pt[b]) + w(pt[a])")};
  for (int i = 0; i < 60; ++i) pool.push_back(gen::random_term(rng, 3));
  for (Rank n = 0; n <= 4; ++n)
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j)
        CHECK(base.ef_equiv(pool[i], pool[j], n) == wide.ef_equiv(pool[i], pool[j], n));
}

TEST_CASE("memo limit clears without changing verdicts") {
  Engine small(EngineOptions{.memo_limit = 50});
  Engine big;
  std::vector<Term> pool{omega(), zeta(), eta(), parse("omega + omega"), parse("w(zeta) + pt[a]")};
  for (Rank n = 0; n <= 4; ++n)
    for (auto a : pool)
      for (auto b : pool) CHECK(small.ef_equiv(a, b, n) == big.ef_equiv(a, b, n));
  CHECK(small.memo_size() <= 50 + 64);
}

TEST_CASE("finite expansion and oracle") {
  FiniteOrder three = finite_expand(fin(3));
  CHECK(three.size == 3);
  FiniteOrder ab = finite_expand(parse("pt[a] + pt[b]"));
  CHECK(ab.coloring == std::vector<ColorSet>{ColorSet{"a"}, ColorSet{"b"}});
  CHECK(finite_expand(Term::empty()).size == 0);
  CHECK_THROWS_AS(finite_expand(omega()), PreconditionError);

  CHECK(ef_oracle(finite_expand(fin(3)), finite_expand(fin(4)), 2));
  CHECK(ef_oracle(finite_expand(fin(1)), finite_expand(fin(2)), 1));
  CHECK(!ef_oracle(finite_expand(fin(1)), finite_expand(fin(2)), 2));
  FiniteOrder a{1, {ColorSet{"a"}}}, b{1, {ColorSet{"b"}}};
  CHECK(!ef_oracle(a, b, 1));
  CHECK_THROWS_AS(ef_oracle(finite_expand(fin(9)), three, 1), GuardError);
  CHECK_THROWS_AS(ef_oracle(three, three, 5), GuardError);
}

TEST_CASE("oracle agreement on random finite pairs") {
  std::mt19937_64 rng(29);
  Engine e;
  auto random_order = [&] {
    FiniteOrder o;
    o.size = static_cast<std::size_t>(gen::pick(rng, 0, 6));
    for (std::size_t i = 0; i < o.size; ++i) o.coloring.push_back(gen::random_colors(rng, 2));
    return o;
  };
  for (int i = 0; i < 400; ++i) {
    FiniteOrder a = random_order(), b = random_order();
    for (Rank n = 0; n <= 3; ++n) CHECK(e.ef_equiv(to_term(a), to_term(b), n) == ef_oracle(a, b, n));
  }
}
