#pragma once

// Hand-rolled random generators for property tests and the acceptance suite.

#include <random>
#include <string>
#include <vector>

#include "clo/address.hpp"
#include "clo/term.hpp"

namespace clo::gen {

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline ColorSet random_colors(std::mt19937_64& rng, int ncolors = 2) {
  std::vector<std::string> names;
  for (int i = 0; i < ncolors; ++i)
    if (pick(rng, 0, 2) == 0) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return ColorSet(names);
}

inline Term random_term(std::mt19937_64& rng, int depth, int ncolors = 2) {
  int choice = depth <= 0 ? 0 : pick(rng, 0, 9);
  switch (choice) {
    case 0:
    case 1:
    case 2:
      return Term::point(random_colors(rng, ncolors));
    case 3:
    case 4:
    case 5: {
      std::vector<Term> parts;
      int m = pick(rng, 2, 3);
      for (int i = 0; i < m; ++i) parts.push_back(random_term(rng, depth - 1, ncolors));
      return Term::sum(parts);
    }
    case 6:
      return Term::omega(random_term(rng, depth - 1, ncolors));
    case 7:
      return Term::omega_star(random_term(rng, depth - 1, ncolors));
    case 8:
      return Term::zeta(random_term(rng, depth - 1, ncolors));
    default: {
      std::vector<Term> args;
      int m = pick(rng, 1, 3);
      for (int i = 0; i < m; ++i) args.push_back(random_term(rng, depth - 1, ncolors));
      return Term::shuffle(args);
    }
  }
}

/// Random non-canonical term: nested sums, empties and duplicate shuffle args.
inline Term random_raw_term(std::mt19937_64& rng, int depth) {
  int choice = depth <= 0 ? pick(rng, 0, 1) : pick(rng, 0, 5);
  std::vector<Term> kids;
  switch (choice) {
    case 0:
      return Term::empty();
    case 1:
      return Term::point(random_colors(rng));
    case 2:
    case 3:
      for (int i = 0, m = pick(rng, 2, 3); i < m; ++i) kids.push_back(random_raw_term(rng, depth - 1));
      return Term::raw(Kind::Sum, kids);
    case 4:
      for (int i = 0, m = pick(rng, 1, 3); i < m; ++i) kids.push_back(random_raw_term(rng, depth - 1));
      kids.push_back(kids.front());
      return Term::raw(Kind::Shuffle, kids);
    default: {
      Kind k = std::array{Kind::Omega, Kind::OmegaStar, Kind::Zeta}[pick(rng, 0, 2)];
      return Term::raw(k, {random_raw_term(rng, depth - 1)});
    }
  }
}

/// A random element of a nonempty canonical term.
inline Address random_address(std::mt19937_64& rng, Term t) {
  Address a;
  while (t.kind() != Kind::Pt) {
    switch (t.kind()) {
      case Kind::Sum: {
        auto i = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(t.children().size()) - 1));
        a.path.push_back(SumIndex{i});
        t = t.children()[i];
        break;
      }
      case Kind::Omega:
        a.path.push_back(OmegaIndex{static_cast<std::uint64_t>(pick(rng, 0, 3))});
        t = t.body();
        break;
      case Kind::OmegaStar:
        a.path.push_back(OmegaStarIndex{static_cast<std::uint64_t>(pick(rng, 0, 3))});
        t = t.body();
        break;
      case Kind::Zeta:
        a.path.push_back(ZetaIndex{pick(rng, -3, 3)});
        t = t.body();
        break;
      case Kind::Shuffle: {
        Term arg = t.children()[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(t.children().size()) - 1))];
        // Distinct positions per branch keep the addresses well formed.
        int idx = static_cast<int>(std::find(t.children().begin(), t.children().end(), arg) - t.children().begin());
        int slot = pick(rng, 0, 3);
        a.path.push_back(ShufflePos{Rational(slot * 8 + idx, 7), arg});
        t = arg;
        break;
      }
      default:
        return a;
    }
  }
  return a;
}

}  // namespace clo::gen
