#include <doctest.h>

#include <algorithm>
#include <random>

#include "clo/census.hpp"
#include "clo/error.hpp"

using namespace clo;

TEST_CASE("model generation") {
  CHECK(generate_models(ExampleFamily::tn(3), 4).size() == 3);
  auto z = generate_models(ExampleFamily::zeta(), 0);
  REQUIRE(z.size() == 1);
  CHECK(z[0].term == zeta());
  CHECK(generate_models(ExampleFamily::step_points(1, 3), 0).size() == 2);
  CHECK(generate_models(ExampleFamily::full_rationals(2), 0).size() == 36);
  CHECK_THROWS_AS(generate_models(ExampleFamily::full_rationals(4), 0), GuardError);
  CHECK_THROWS_AS(generate_models(ExampleFamily::tn(9), 4), GuardError);
  CHECK_THROWS_AS(generate_models(ExampleFamily::step_points(5, 1), 0), GuardError);

  // Each constant's marker color sits on exactly one point.
  for (const auto& m : generate_models(ExampleFamily::tn(4), 3)) {
    CHECK(m.constantMap.size() == 4);
    for (const auto& [name, color] : m.constantMap) {
      auto text = print(m.term);
      std::size_t count = 0;
      for (auto p = text.find(color); p != std::string::npos; p = text.find(color, p + 1)) ++count;
      CHECK(count == 1);
    }
  }
}

TEST_CASE("tn invariants") {
  Engine engine;
  auto f = ExampleFamily::tn(4);
  CHECK(invariant(engine, f, tn_model(4, 4, "gap"), 6).to_string() == "{gap}");
  CHECK(invariant(engine, f, tn_model(4, 4, "P1"), 6).to_string() == "{P1}");
  CHECK(invariant(engine, f, tn_model(4, 4, "cofinal"), 6).to_string() == "{cofinal}");
  CHECK(invariant(engine, ExampleFamily::zeta(), {zeta(), {}, ""}, 4).to_string() == "{classes=1}");
  CHECK_THROWS_AS(tn_model(4, 4, "P2"), PreconditionError);
}

TEST_CASE("tn counts") {
  Engine engine;
  for (int n = 3; n <= 5; ++n) {
    auto r = verify_family(engine, ExampleFamily::tn(n), 4, 6);
    CHECK(r.modelCount == static_cast<std::size_t>(n));
    CHECK(r.invariantInjective);
    CHECK(r.pass);
    CHECK(to_string(r.expectedClass) == "FiniteModels(" + std::to_string(n) + ")");
  }
  auto r5 = verify_family(engine, ExampleFamily::tn(5), 6, 5);
  CHECK(r5.modelCount == 5);
  CHECK(r5.pass);
}

TEST_CASE("categorical and complete exemplars") {
  Engine engine;
  auto e = verify_family(engine, ExampleFamily::eta(), 0, 4);
  CHECK(e.modelCount == 1);
  CHECK(e.expectedClass.kind == VerdictKind::Categorical);
  CHECK(e.pass);
  auto z = verify_family(engine, ExampleFamily::zeta(), 0, 6);
  CHECK(z.expectedClass.kind == VerdictKind::BorelComplete);
  CHECK(z.pass);
}

TEST_CASE("step points") {
  Engine engine;
  auto r = verify_family(engine, ExampleFamily::step_points(1, 3), 0, 5);
  CHECK(r.invariantInjective);
  CHECK(r.expectedClass.kind == VerdictKind::RealsLike);
  CHECK(r.pass);
  CHECK(invariant(engine, ExampleFamily::step_points(3, 2), step_points_model(3, 2, {2, 0}), 5).to_string() ==
        "{0,2}");
  std::size_t previous = 0;
  for (int window = 1; window <= 4; ++window) {
    auto w = verify_family(engine, ExampleFamily::step_points(window, 2), 0, 5);
    CHECK(w.modelCount == (std::size_t{1} << window));
    CHECK(w.modelCount > previous);
    CHECK(w.pass);
    previous = w.modelCount;
  }
}

TEST_CASE("full rationals use set semantics") {
  Engine engine;
  auto f = ExampleFamily::full_rationals(3);
  std::vector<Completion> choices{{0, "η"}, {2, "1+η"}, {1, "1"}};
  auto base = invariant(engine, f, full_rationals_model(3, choices), 6);
  CHECK(base.to_string() == "{0:η,1:1,2:1+η}");
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto shuffled = choices;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.push_back(shuffled[trial % 3]);
    auto m = full_rationals_model(3, shuffled);
    CHECK(invariant(engine, f, m, 6) == base);
    CHECK(m.term == full_rationals_model(3, choices).term);
  }
  CHECK_THROWS_AS(full_rationals_model(3, {{0, "1"}, {0, "η"}}), PreconditionError);
  CHECK_THROWS_AS(full_rationals_model(3, {{3, "1"}}), PreconditionError);

  auto r = verify_family(engine, ExampleFamily::full_rationals(1), 0, 6);
  CHECK(r.modelCount == 6);
  CHECK(r.pass);
}

TEST_CASE("parallel verification matches serial") {
  Engine serial, threaded;
  auto f = ExampleFamily::full_rationals(2);
  auto a = verify_family(serial, f, 0, 5);
  auto b = verify_family(threaded, f, 0, 5, true);
  CHECK(a.pairMatrix == b.pairMatrix);
  CHECK(a.invariants == b.invariants);
  CHECK(b.pass);
}
