#include <doctest.h>

#include "clo/codec.hpp"
#include "clo/error.hpp"

using namespace clo;

namespace {

const Language kR{{"R", 2}};

FinStructure binary(int u, std::set<Tuple> r) { return FinStructure{u, kR, {std::move(r)}}; }

}  // namespace

TEST_CASE("atomic type enumeration") {
  CHECK(atomic_types(kR, 0).size() == 1);
  CHECK(atomic_types(kR, 1).size() == 2);
  CHECK(atomic_types({}, 2).size() == 2);
  // Equality patterns of a pair: one class (2 facts) or two classes (16 facts).
  CHECK(atomic_types(kR, 2).size() == 18);
  CHECK(atomic_types({}, 3).size() == 5);
  CHECK_THROWS_AS(atomic_types(kR, 4), GuardError);
  CHECK_THROWS_AS(atomic_types({{"T", 5}}, 3), GuardError);

  auto one = atomic_types(kR, 1);
  CHECK(to_string(one[0], kR) == "¬R(x1,x1)");
  CHECK(to_string(one[1], kR) == "R(x1,x1)");
  CHECK(to_string(atomic_types(kR, 0)[0], kR) == "⊤");
  for (int n = 0; n <= 3; ++n) {
    auto ts = atomic_types(kR, n);
    CHECK(std::is_sorted(ts.begin(), ts.end()));
    CHECK(std::adjacent_find(ts.begin(), ts.end()) == ts.end());
  }
}

TEST_CASE("type indexing bands") {
  auto e0 = type_indexing({}, 1);
  CHECK(e0.eTable[0] == 0);
  CHECK(e0.eTable[1] == 1);

  auto ix = type_indexing(kR, 3);
  REQUIRE(ix.eTable.size() == 5);
  CHECK(ix.eTable[1] == 1);
  CHECK(ix.eTable[2] == 3);
  CHECK(ix.eTable[3] == 21);
  for (int n = 0; n <= 3; ++n) {
    std::set<std::uint64_t> seen;
    for (const auto& p : atomic_types(kR, n)) {
      auto k = ix.k(p);
      CHECK(k >= ix.eTable[static_cast<std::size_t>(n)]);
      CHECK(k < ix.eTable[static_cast<std::size_t>(n) + 1]);
      seen.insert(k);
    }
    CHECK(seen.size() == ix.eTable[static_cast<std::size_t>(n) + 1] - ix.eTable[static_cast<std::size_t>(n)]);
  }
  std::set<std::uint64_t> arity1;
  for (const auto& p : atomic_types(kR, 1)) arity1.insert(ix.k(p));
  CHECK(arity1 == std::set<std::uint64_t>{1, 2});
}

TEST_CASE("otp") {
  auto loop = binary(1, {{0, 0}});
  CHECK(to_string(otp(loop, {0}), kR) == "R(x1,x1)");
  auto empty2 = binary(2, {});
  CHECK(to_string(otp(empty2, {0, 1}), kR) == "x1≠x2, ¬R(x1,x1), ¬R(x1,x2), ¬R(x2,x1), ¬R(x2,x2)");
  CHECK(otp(empty2, {}).arity == 0);
  CHECK(otp(empty2, {1, 1}) == otp(empty2, {0, 0}));
  CHECK_THROWS_AS(otp(empty2, {2}), PreconditionError);
}

TEST_CASE("j blocks") {
  CHECK(j_block(0) == parse("eta+fin(2)+eta"));
  CHECK(j_block(3) == parse("eta+fin(5)+eta"));
  Engine engine;
  for (std::uint64_t k = 0; k < 8; ++k) {
    auto kp = k + 1;
    int bound = 0;
    while ((std::uint64_t{1} << bound) < kp + 3) ++bound;
    auto r = engine.distinguishing_rank(j_block(k), j_block(kp), static_cast<Rank>(bound + 2));
    CHECK(r.has_value());
  }
}

TEST_CASE("index order") {
  CHECK(build_index_order(1, {1, 1}).size() == 2);
  auto five = build_index_order(2, {1, 2});
  REQUIRE(five.size() == 5);
  std::vector<Tuple> labels;
  for (const auto& n : five) labels.push_back(n.label);
  CHECK(labels == std::vector<Tuple>{{}, {0}, {1}, {0}, {1}});
  CHECK(build_index_order(2, {2, 1}).size() == 7);
  CHECK(build_index_order(2, {2, 1})[2].label == Tuple{0, 0});
  CHECK_THROWS_AS(build_index_order(0, {1, 1}), PreconditionError);
  CHECK_THROWS_AS(build_index_order(4, {4, 4}), GuardError);
}

TEST_CASE("structure json") {
  auto s = parse_structure(R"({"universe":2,"relations":[{"name":"R","arity":2,"tuples":[[1,0],[0,1],[0,1]]}]})");
  CHECK(s.universe == 2);
  CHECK(s.tables[0].size() == 2);
  CHECK(to_json(s) == R"({"relations":[{"arity":2,"name":"R","tuples":[[0,1],[1,0]]}],"universe":2})");
  CHECK(parse_structure(to_json(s)) == s);
  CHECK_THROWS_AS(parse_structure(R"({"universe":1,"relations":[{"name":"R","arity":2,"tuples":[[0,1]]}]})"),
                  PreconditionError);
  CHECK_THROWS_AS(parse_structure(R"({"universe":1,"relations":[{"name":"R","arity":2,"tuples":[[0]]}]})"),
                  PreconditionError);
  CHECK_THROWS_AS(parse_structure("{"), ParseError);
}

TEST_CASE("encode") {
  FinStructure point{1, {}, {}};
  auto k1 = type_indexing({}, 1).k(otp(point, {0}));
  CHECK(k1 == 1);
  auto expected = canonicalize(Term::sum(j_block(0), j_block(k1)));
  CHECK(encode(point, {1, 1, Layout::RoundRobin}) == expected);
  CHECK(encode(point, {1, 1, Layout::Canonical}) == expected);
  CHECK(encode(point, {1, 1, Layout::Dense}) == canonicalize(Term::sum(j_block(0), Term::shuffle({j_block(k1)}))));

  Engine engine;
  auto r = engine.distinguishing_rank(encode(binary(2, {}), {2, 2}),
                                      encode(binary(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}), {2, 2}), 6);
  CHECK(r.has_value());

  // Relabelling changes the label-ordered layout but not the canonical one.
  auto a = binary(2, {{0, 0}}), b = binary(2, {{1, 1}});
  CHECK(encode(a, {2, 2}) == encode(b, {2, 2}));
  CHECK(encode(a, {2, 2, Layout::Dense}) == encode(b, {2, 2, Layout::Dense}));
  CHECK(encode(a, {2, 2, Layout::RoundRobin}) != encode(b, {2, 2, Layout::RoundRobin}));
}

TEST_CASE("structures up to isomorphism") {
  CHECK(structures_up_to_iso(kR, 1).size() == 2);
  CHECK(structures_up_to_iso(kR, 2).size() == 10);
  CHECK(structures_up_to_iso(kR, 3).size() == 104);
  CHECK(structures_up_to_iso({}, 3).size() == 1);
  CHECK(isomorphic(binary(3, {{0, 1}}), binary(3, {{2, 0}})));
  CHECK_FALSE(isomorphic(binary(3, {{0, 1}}), binary(3, {{1, 0}, {0, 1}})));
  CHECK_FALSE(isomorphic(binary(2, {}), binary(3, {})));
}

TEST_CASE("verify reduction") {
  Engine engine;
  TruncParams p{2, 2};
  auto r = verify_reduction(engine, binary(3, {{0, 1}}), binary(3, {{2, 0}}), p, 6);
  CHECK(r.isoOracle);
  CHECK(r.codesEquivalentAtBudget);
  CHECK(r.consistent);
  // The shuffle layout forgets multiplicities at finite depth.
  auto d = verify_reduction(engine, binary(2, {}), binary(3, {}), {2, 2, Layout::Dense}, 6);
  CHECK_FALSE(d.isoOracle);
  CHECK_FALSE(d.consistent);
  auto c = verify_reduction(engine, binary(2, {}), binary(3, {}), p, 6);
  CHECK(c.consistent);
  CHECK(c.distinguishingRank.has_value());
}
