#include "clo/address.hpp"

#include "clo/error.hpp"

namespace clo {

Address Address::then(AddressStep step) const {
  Address out = *this;
  out.path.push_back(std::move(step));
  return out;
}

Address Address::prefixed(AddressStep step) const {
  Address out;
  out.path.reserve(path.size() + 1);
  out.path.push_back(std::move(step));
  out.path.insert(out.path.end(), path.begin(), path.end());
  return out;
}

std::string to_string(const AddressStep& step) {
  struct V {
    std::string operator()(const SumIndex& s) const { return "sum:" + std::to_string(s.index); }
    std::string operator()(const OmegaIndex& s) const { return "w:" + std::to_string(s.copy); }
    std::string operator()(const OmegaStarIndex& s) const { return "w*:" + std::to_string(s.copy); }
    std::string operator()(const ZetaIndex& s) const { return "z:" + std::to_string(s.copy); }
    std::string operator()(const ShufflePos& s) const {
      std::string q = std::to_string(s.position.numerator());
      if (s.position.denominator() != 1) q += "/" + std::to_string(s.position.denominator());
      return "sh:" + q + "@" + print(s.branch);
    }
  };
  return std::visit(V{}, step);
}

std::string to_string(const Address& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.path.size(); ++i) {
    if (i) out += ", ";
    out += to_string(a.path[i]);
  }
  return out + "]";
}

namespace {

[[noreturn]] void bad(const std::string& why) { throw AddressError("invalid address: " + why); }

// The subterm a step descends into, after checking the step fits the node.
Term descend(Term node, const AddressStep& step) {
  switch (node.kind()) {
    case Kind::Sum:
      if (auto* s = std::get_if<SumIndex>(&step)) {
        if (s->index >= node.children().size()) bad("sum index out of range");
        return node.children()[s->index];
      }
      break;
    case Kind::Omega:
      if (std::holds_alternative<OmegaIndex>(step)) return node.body();
      break;
    case Kind::OmegaStar:
      if (std::holds_alternative<OmegaStarIndex>(step)) return node.body();
      break;
    case Kind::Zeta:
      if (std::holds_alternative<ZetaIndex>(step)) return node.body();
      break;
    case Kind::Shuffle:
      if (auto* s = std::get_if<ShufflePos>(&step)) {
        for (Term arg : node.children())
          if (arg == s->branch) return arg;
        bad("shuffle branch is not an argument");
      }
      break;
    default:
      bad("path continues below a " + std::string(kind_name(node.kind())) + " node");
  }
  bad("step " + to_string(step) + " does not fit a " + std::string(kind_name(node.kind())) + " node");
}

Term leaf(Term t, const Address& a) {
  Term node = t;
  for (const auto& step : a.path) node = descend(node, step);
  if (node.kind() != Kind::Pt) bad("path does not end at a point");
  return node;
}

// -1, 0, 1 for steps taken at the same node.
int compare_steps(const AddressStep& x, const AddressStep& y) {
  auto sign = [](auto a, auto b) { return a < b ? -1 : (b < a ? 1 : 0); };
  if (auto* a = std::get_if<SumIndex>(&x)) return sign(a->index, std::get<SumIndex>(y).index);
  if (auto* a = std::get_if<OmegaIndex>(&x)) return sign(a->copy, std::get<OmegaIndex>(y).copy);
  if (auto* a = std::get_if<OmegaStarIndex>(&x))
    return sign(std::get<OmegaStarIndex>(y).copy, a->copy);
  if (auto* a = std::get_if<ZetaIndex>(&x)) return sign(a->copy, std::get<ZetaIndex>(y).copy);
  const auto& a = std::get<ShufflePos>(x);
  const auto& b = std::get<ShufflePos>(y);
  int c = sign(a.position, b.position);
  if (c == 0 && a.branch != b.branch) bad("two branches at one shuffle position");
  return c;
}

Term left_at(Term node, const Address& a, std::size_t i) {
  if (i == a.path.size()) return Term::empty();
  const auto& step = a.path[i];
  Term child = descend(node, step);
  Term inner = left_at(child, a, i + 1);
  switch (node.kind()) {
    case Kind::Sum: {
      auto kids = node.children();
      std::size_t idx = std::get<SumIndex>(step).index;
      std::vector<Term> parts(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(idx));
      parts.push_back(inner);
      return Term::sum(std::move(parts));
    }
    case Kind::Omega:
      return Term::sum(repeat(child, std::get<OmegaIndex>(step).copy), inner);
    case Kind::OmegaStar:
    case Kind::Zeta:
      return Term::sum(Term::omega_star(child), inner);
    case Kind::Shuffle:
      return Term::sum(node, inner);
    default:
      bad("unreachable");
  }
}

Term right_at(Term node, const Address& a, std::size_t i) {
  if (i == a.path.size()) return Term::empty();
  const auto& step = a.path[i];
  Term child = descend(node, step);
  Term inner = right_at(child, a, i + 1);
  switch (node.kind()) {
    case Kind::Sum: {
      auto kids = node.children();
      std::size_t idx = std::get<SumIndex>(step).index;
      std::vector<Term> parts{inner};
      parts.insert(parts.end(), kids.begin() + static_cast<std::ptrdiff_t>(idx) + 1, kids.end());
      return Term::sum(std::move(parts));
    }
    case Kind::Omega:
    case Kind::Zeta:
      return Term::sum(inner, Term::omega(child));
    case Kind::OmegaStar:
      return Term::sum(inner, repeat(child, std::get<OmegaStarIndex>(step).copy));
    case Kind::Shuffle:
      return Term::sum(inner, node);
    default:
      bad("unreachable");
  }
}

Term between_at(Term node, const Address& x, const Address& y, std::size_t i) {
  const auto& sx = x.path[i];
  const auto& sy = y.path[i];
  if (compare_steps(sx, sy) == 0) return between_at(descend(node, sx), x, y, i + 1);
  Term cx = descend(node, sx);
  Term cy = descend(node, sy);
  Term rx = right_at(cx, x, i + 1);
  Term ly = left_at(cy, y, i + 1);
  switch (node.kind()) {
    case Kind::Sum: {
      auto kids = node.children();
      std::size_t a = std::get<SumIndex>(sx).index, b = std::get<SumIndex>(sy).index;
      std::vector<Term> parts{rx};
      for (std::size_t j = a + 1; j < b; ++j) parts.push_back(kids[j]);
      parts.push_back(ly);
      return Term::sum(std::move(parts));
    }
    case Kind::Omega: {
      auto gap = std::get<OmegaIndex>(sy).copy - std::get<OmegaIndex>(sx).copy - 1;
      return Term::sum({rx, repeat(cx, gap), ly});
    }
    case Kind::OmegaStar: {
      auto gap = std::get<OmegaStarIndex>(sx).copy - std::get<OmegaStarIndex>(sy).copy - 1;
      return Term::sum({rx, repeat(cx, gap), ly});
    }
    case Kind::Zeta: {
      auto gap = static_cast<std::uint64_t>(std::get<ZetaIndex>(sy).copy - std::get<ZetaIndex>(sx).copy - 1);
      return Term::sum({rx, repeat(cx, gap), ly});
    }
    case Kind::Shuffle:
      return Term::sum({rx, node, ly});
    default:
      bad("unreachable");
  }
}

}  // namespace

void validate(Term t, const Address& a) { leaf(t, a); }

ColorSet color_at(Term t, const Address& a) { return leaf(t, a).colors(); }

Order compare(Term t, const Address& x, const Address& y) {
  validate(t, x);
  validate(t, y);
  Term node = t;
  for (std::size_t i = 0; i < x.path.size(); ++i) {
    int c = compare_steps(x.path[i], y.path[i]);
    if (c < 0) return Order::LT;
    if (c > 0) return Order::GT;
    node = descend(node, x.path[i]);
  }
  return Order::EQ;
}

Term left_of(Term t, const Address& a) {
  validate(t, a);
  return left_at(t, a, 0);
}

Term right_of(Term t, const Address& a) {
  validate(t, a);
  return right_at(t, a, 0);
}

Term between(Term t, const Address& x, const Address& y) {
  if (compare(t, x, y) != Order::LT) throw AddressError("between requires x < y");
  return between_at(t, x, y, 0);
}

}  // namespace clo
