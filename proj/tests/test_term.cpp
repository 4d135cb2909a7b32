#include <doctest.h>

#include <random>

#include "clo/address.hpp"
#include "clo/error.hpp"
#include "clo/term.hpp"
#include "clo/gen.hpp"

using namespace clo;

TEST_CASE("parse builds the expected shapes") {
  Term p = Term::point({});
  CHECK(parse("sh(pt[])") == Term::shuffle({p}));
  CHECK(parse("z(pt[])") == Term::zeta(p));
  Term a = Term::point({"a"}), b = Term::point({"b"});
  Term t = parse("pt[a] + pt[a] + sh(pt[a],pt[b])");
  REQUIRE(t.kind() == Kind::Sum);
  CHECK(t.children().size() == 3);
  CHECK(t.children()[2] == Term::shuffle({a, b}));
  CHECK(parse("eta") == eta());
  CHECK(parse("omega") == omega());
  CHECK(parse("zeta") == zeta());
  CHECK(parse("fin(3)") == repeat(p, 3));
  CHECK(parse("fin(0)") == Term::empty());
  CHECK(parse(" w*( pt[b a] ) ") == Term::omega_star(Term::point({"a", "b"})));
  CHECK(parse("(pt[a] + pt[b]) + pt[c]") == parse("pt[a] + (pt[b] + pt[c])"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("sh()"), ArityError);
  CHECK_THROWS_AS(parse("pt[a"), ParseError);
  CHECK_THROWS_AS(parse("w(pt[])  +"), ParseError);
  CHECK_THROWS_AS(parse("foo"), ParseError);
  try {
    parse("pt[] + ?");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 7);
  }
}

TEST_CASE("canonicalize") {
  Term p = Term::point({});
  Term nested = Term::raw(Kind::Sum, {Term::raw(Kind::Sum, {p, p}), p});
  CHECK(!nested.is_canonical());
  CHECK(canonicalize(nested) == Term::sum({p, p, p}));
  Term a = Term::point({"a"}), b = Term::point({"b"});
  CHECK(canonicalize(Term::raw(Kind::Shuffle, {a, b, a})) == Term::shuffle({a, b}));
  CHECK(canonicalize(Term::raw(Kind::Sum, {Term::empty(), p})) == p);
  CHECK(Term::shuffle({b, a}) == Term::shuffle({a, b}));
}

TEST_CASE("colors_of") {
  CHECK(colors_of(parse("pt[a]")) == ColorSet{"a"});
  CHECK(colors_of(parse("sh(pt[a],pt[b])")) == ColorSet{"a", "b"});
  CHECK(colors_of(Term::empty()).empty());
}

TEST_CASE("print/parse round trip and idempotent canonicalization") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen::random_term(rng, 4);
    CHECK(t.is_canonical());
    CHECK(parse(print(t)) == t);
    CHECK(canonicalize(t) == t);
    Term r = gen::random_raw_term(rng, 4);
    CHECK(canonicalize(canonicalize(r)) == canonicalize(r));
  }
}

TEST_CASE("term files") {
  auto named = parse_term_file("# corpus\nA = zeta\n\nsh(pt[a]) # trailing\n");
  REQUIRE(named.size() == 2);
  CHECK(named[0].name == "A");
  CHECK(named[0].term == zeta());
  CHECK(named[1].name.empty());
}

TEST_CASE("address comparison") {
  Term two = parse("pt[] + pt[]");
  CHECK(compare(two, Address{{SumIndex{0}}}, Address{{SumIndex{1}}}) == Order::LT);
  CHECK(compare(zeta(), Address{{ZetaIndex{-3}}}, Address{{ZetaIndex{5}}}) == Order::LT);
  CHECK(compare(omega(), Address{{OmegaIndex{2}}}, Address{{OmegaIndex{2}}}) == Order::EQ);
  CHECK(compare(parse("w*(pt[])"), Address{{OmegaStarIndex{3}}}, Address{{OmegaStarIndex{0}}}) == Order::LT);
  Term p = Term::point({});
  CHECK(compare(eta(), Address{{ShufflePos{Rational(1, 3), p}}}, Address{{ShufflePos{Rational(1, 2), p}}}) ==
        Order::LT);
  CHECK_THROWS_AS(validate(two, Address{{SumIndex{2}}}), AddressError);
  CHECK_THROWS_AS(validate(omega(), Address{}), AddressError);
  Term ab = parse("sh(pt[a],pt[b])");
  CHECK_THROWS_AS(compare(ab, Address{{ShufflePos{Rational(0), parse("pt[a]")}}},
                          Address{{ShufflePos{Rational(0), parse("pt[b]")}}}),
                  AddressError);
}

TEST_CASE("address contexts") {
  Term t = parse("pt[a] + w(pt[b] + pt[c]) + pt[d]");
  Address x{{SumIndex{1}, OmegaIndex{2}, SumIndex{1}}};
  CHECK(color_at(t, x) == ColorSet{"c"});
  CHECK(left_of(t, x) == parse("pt[a] + pt[b] + pt[c] + pt[b] + pt[c] + pt[b]"));
  CHECK(right_of(t, x) == parse("w(pt[b] + pt[c]) + pt[d]"));
  Address y{{SumIndex{1}, OmegaIndex{4}, SumIndex{0}}};
  CHECK(between(t, x, y) == parse("pt[b] + pt[c]"));
  Address s{{SumIndex{2}}};
  CHECK(between(t, x, s) == parse("w(pt[b] + pt[c])"));

  Term ws = parse("w*(pt[a] + pt[b])");
  Address u{{OmegaStarIndex{3}, SumIndex{1}}}, v{{OmegaStarIndex{1}, SumIndex{0}}};
  CHECK(left_of(ws, u) == parse("w*(pt[a] + pt[b]) + pt[a]"));
  CHECK(right_of(ws, u) == parse("pt[a] + pt[b] + pt[a] + pt[b] + pt[a] + pt[b]"));
  CHECK(between(ws, u, v) == parse("pt[a] + pt[b]"));
  CHECK_THROWS_AS(between(ws, v, u), AddressError);
}

TEST_CASE("address comparison is a strict total order on samples") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Term t = gen::random_term(rng, 3);
    if (t.is_empty()) continue;
    std::vector<Address> as;
    for (int j = 0; j < 6; ++j) as.push_back(gen::random_address(rng, t));
    for (auto& x : as) {
      CHECK(compare(t, x, x) == Order::EQ);
      for (auto& y : as) {
        Order xy = compare(t, x, y), yx = compare(t, y, x);
        CHECK((xy == Order::LT) == (yx == Order::GT));
        CHECK((xy == Order::EQ) == (x == y));
        for (auto& z : as)
          if (xy == Order::LT && compare(t, y, z) == Order::LT) CHECK(compare(t, x, z) == Order::LT);
      }
    }
  }
}
