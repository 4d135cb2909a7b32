#include "clo/term.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <deque>
#include <map>
#include <mutex>
#include <unordered_map>

#include "clo/error.hpp"

namespace clo {

// ---------------------------------------------------------------------------
// Color sets

namespace {

struct ColorTable {
  std::mutex mu;
  std::deque<std::vector<std::string>> sets;
  std::map<std::vector<std::string>, std::uint32_t> index;

  std::uint32_t intern(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::lock_guard lock(mu);
    auto it = index.find(names);
    if (it != index.end()) return it->second;
    auto id = static_cast<std::uint32_t>(sets.size());
    sets.push_back(names);
    index.emplace(std::move(names), id);
    return id;
  }

  const std::vector<std::string>& get(std::uint32_t id) {
    std::lock_guard lock(mu);
    return sets[id];
  }
};

ColorTable& color_table() {
  static ColorTable table;
  return table;
}

}  // namespace

ColorSet::ColorSet() {
  static const std::uint32_t empty_id = color_table().intern({});
  id_ = empty_id;
}
ColorSet::ColorSet(std::initializer_list<std::string> names)
    : id_(color_table().intern(std::vector<std::string>(names))) {}
ColorSet::ColorSet(std::vector<std::string> names) : id_(color_table().intern(std::move(names))) {}

const std::vector<std::string>& ColorSet::names() const { return color_table().get(id_); }

bool ColorSet::contains(std::string_view name) const {
  const auto& n = names();
  return std::binary_search(n.begin(), n.end(), name);
}

ColorSet ColorSet::united(const ColorSet& other) const {
  std::vector<std::string> all = names();
  all.insert(all.end(), other.names().begin(), other.names().end());
  return ColorSet(std::move(all));
}

std::string ColorSet::to_string() const {
  std::string out;
  for (const auto& n : names()) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

std::strong_ordering operator<=>(const ColorSet& a, const ColorSet& b) {
  if (a.id_ == b.id_) return std::strong_ordering::equal;
  const auto& x = a.names();
  const auto& y = b.names();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Empty: return "Empty";
    case Kind::Pt: return "Pt";
    case Kind::Sum: return "Sum";
    case Kind::Omega: return "OmegaSum";
    case Kind::OmegaStar: return "OmegaStarSum";
    case Kind::Zeta: return "ZetaSum";
    case Kind::Shuffle: return "Shuffle";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Nodes and interning

namespace detail {

struct Node {
  Kind kind;
  ColorSet colors;
  std::vector<Term> kids;
  std::size_t hash;
  std::uint64_t id;
  std::size_t depth;
  std::size_t nodes;
  bool canonical;
  bool finite;
  std::size_t points;
};

}  // namespace detail

namespace {

struct NodeKey {
  Kind kind;
  std::uint32_t colors;
  std::vector<std::uint64_t> kids;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ULL ^ k.colors;
    for (auto id : k.kids) h = (h ^ id) * 0x100000001b3ULL + (h >> 29);
    return h;
  }
};

struct Interner {
  std::mutex mu;
  std::deque<detail::Node> nodes;
  std::unordered_map<NodeKey, const detail::Node*, NodeKeyHash> index;
};

Interner& interner() {
  static Interner in;
  return in;
}

std::atomic<std::size_t> g_max_depth{32};
std::atomic<std::size_t> g_max_nodes{std::size_t{1} << 22};

}  // namespace

TermLimits term_limits() { return {g_max_depth.load(), g_max_nodes.load()}; }

void set_term_limits(TermLimits limits) {
  g_max_depth = limits.max_depth;
  g_max_nodes = limits.max_nodes;
}

Term Term::intern(Kind kind, ColorSet colors, std::vector<Term> children) {
  NodeKey key{kind, colors.id(), {}};
  key.kids.reserve(children.size());
  for (Term c : children) key.kids.push_back(c.id());

  std::size_t depth = 1, nodes = 1, points = kind == Kind::Pt ? 1 : 0;
  bool finite = kind == Kind::Empty || kind == Kind::Pt || kind == Kind::Sum;
  for (Term c : children) {
    depth = std::max(depth, c.depth() + 1);
    nodes += c.node_count();
    finite = finite && c.is_finite();
    points += c.finite_size();
  }
  if (depth > g_max_depth.load())
    throw BudgetError("term depth " + std::to_string(depth) + " exceeds limit " +
                      std::to_string(g_max_depth.load()));
  if (nodes > g_max_nodes.load()) throw BudgetError("term size exceeds limit");

  bool canonical = true;
  for (Term c : children) canonical = canonical && c.is_canonical();
  switch (kind) {
    case Kind::Sum:
      for (Term c : children)
        canonical = canonical && c.kind() != Kind::Sum && !c.is_empty();
      break;
    case Kind::Omega:
    case Kind::OmegaStar:
    case Kind::Zeta:
      canonical = canonical && !children[0].is_empty();
      break;
    case Kind::Shuffle:
      for (std::size_t i = 0; i < children.size(); ++i) {
        canonical = canonical && !children[i].is_empty();
        if (i > 0) canonical = canonical && structural_compare(children[i - 1], children[i]) < 0;
      }
      break;
    default:
      break;
  }

  auto& in = interner();
  std::lock_guard lock(in.mu);
  auto it = in.index.find(key);
  if (it != in.index.end()) return Term(it->second);
  std::size_t h = NodeKeyHash{}(key);
  in.nodes.push_back(detail::Node{kind, colors, std::move(children), h, in.nodes.size(), depth, nodes,
                                  canonical, finite, points});
  const detail::Node* n = &in.nodes.back();
  in.index.emplace(std::move(key), n);
  return Term(n);
}

Term::Term() : node_(nullptr) {
  static const detail::Node* empty = intern(Kind::Empty, ColorSet{}, {}).node_;
  node_ = empty;
}

Kind Term::kind() const { return node_->kind; }
const ColorSet& Term::colors() const { return node_->colors; }
std::span<const Term> Term::children() const { return node_->kids; }
Term Term::body() const { return node_->kids.at(0); }
std::uint64_t Term::id() const { return node_->id; }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::depth() const { return node_->depth; }
std::size_t Term::node_count() const { return node_->nodes; }
bool Term::is_canonical() const { return node_->canonical; }
bool Term::is_finite() const { return node_->finite; }
std::size_t Term::finite_size() const { return node_->points; }

Term Term::empty() { return Term(); }

Term Term::point(ColorSet colors) { return intern(Kind::Pt, colors, {}); }

namespace {
void flatten_into(Term t, std::vector<Term>& out) {
  if (t.is_empty()) return;
  if (t.kind() == Kind::Sum) {
    for (Term c : t.children()) flatten_into(c, out);
    return;
  }
  out.push_back(t);
}
}  // namespace

Term Term::sum(std::vector<Term> parts) {
  std::vector<Term> flat;
  flat.reserve(parts.size());
  for (Term p : parts) flatten_into(p, flat);
  if (flat.empty()) return empty();
  if (flat.size() == 1) return flat.front();
  return intern(Kind::Sum, ColorSet{}, std::move(flat));
}

Term Term::omega(Term body) {
  if (body.is_empty()) return empty();
  return intern(Kind::Omega, ColorSet{}, {body});
}

Term Term::omega_star(Term body) {
  if (body.is_empty()) return empty();
  return intern(Kind::OmegaStar, ColorSet{}, {body});
}

Term Term::zeta(Term body) {
  if (body.is_empty()) return empty();
  return intern(Kind::Zeta, ColorSet{}, {body});
}

Term Term::shuffle(std::vector<Term> args) {
  std::erase_if(args, [](Term t) { return t.is_empty(); });
  if (args.empty()) return empty();
  std::sort(args.begin(), args.end(), StructuralLess{});
  args.erase(std::unique(args.begin(), args.end()), args.end());
  return intern(Kind::Shuffle, ColorSet{}, std::move(args));
}

Term Term::raw(Kind kind, std::vector<Term> children, ColorSet colors) {
  switch (kind) {
    case Kind::Empty:
    case Kind::Pt:
      if (!children.empty()) throw ArityError(std::string(kind_name(kind)) + " takes no children");
      break;
    case Kind::Sum:
      if (children.size() < 2) throw ArityError("Sum needs at least two parts");
      break;
    case Kind::Omega:
    case Kind::OmegaStar:
    case Kind::Zeta:
      if (children.size() != 1) throw ArityError(std::string(kind_name(kind)) + " takes one body");
      break;
    case Kind::Shuffle:
      if (children.empty()) throw ArityError("empty shuffle");
      break;
  }
  if (kind != Kind::Pt) colors = ColorSet{};
  return intern(kind, colors, std::move(children));
}

std::strong_ordering structural_compare(Term a, Term b) {
  if (a == b) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  if (a.kind() == Kind::Pt) return a.colors() <=> b.colors();
  auto x = a.children();
  auto y = b.children();
  if (x.size() != y.size()) return x.size() <=> y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto c = structural_compare(x[i], y[i]);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Term canonicalize(Term t) {
  if (t.is_canonical()) return t;
  std::vector<Term> kids;
  for (Term c : t.children()) kids.push_back(canonicalize(c));
  switch (t.kind()) {
    case Kind::Empty: return t;
    case Kind::Pt: return t;
    case Kind::Sum: return Term::sum(std::move(kids));
    case Kind::Omega: return Term::omega(kids[0]);
    case Kind::OmegaStar: return Term::omega_star(kids[0]);
    case Kind::Zeta: return Term::zeta(kids[0]);
    case Kind::Shuffle: return Term::shuffle(std::move(kids));
  }
  return t;
}

Term repeat(Term a, std::uint64_t k) {
  if (a.is_empty() || k == 0) return Term::empty();
  if (k == 1) return a;
  return Term::sum(std::vector<Term>(k, a));
}

Term fin(std::uint64_t n) { return repeat(Term::point({}), n); }
Term eta() { return Term::shuffle({Term::point({})}); }
Term omega() { return Term::omega(Term::point({})); }
Term zeta() { return Term::zeta(Term::point({})); }

namespace {
void collect_colors(Term t, std::vector<std::string>& out) {
  if (t.kind() == Kind::Pt) {
    const auto& n = t.colors().names();
    out.insert(out.end(), n.begin(), n.end());
  }
  for (Term c : t.children()) collect_colors(c, out);
}
}  // namespace

ColorSet colors_of(Term t) {
  std::vector<std::string> all;
  collect_colors(t, all);
  return ColorSet(std::move(all));
}

// ---------------------------------------------------------------------------
// Printing

namespace {
void print_into(Term t, std::string& out) {
  switch (t.kind()) {
    case Kind::Empty: out += "empty"; return;
    case Kind::Pt:
      out += "pt[";
      out += t.colors().to_string();
      out += ']';
      return;
    case Kind::Sum: {
      bool first = true;
      for (Term c : t.children()) {
        if (!first) out += " + ";
        first = false;
        bool paren = c.kind() == Kind::Sum;
        if (paren) out += '(';
        print_into(c, out);
        if (paren) out += ')';
      }
      return;
    }
    case Kind::Omega: out += "w("; break;
    case Kind::OmegaStar: out += "w*("; break;
    case Kind::Zeta: out += "z("; break;
    case Kind::Shuffle: {
      out += "sh(";
      bool first = true;
      for (Term c : t.children()) {
        if (!first) out += ',';
        first = false;
        print_into(c, out);
      }
      out += ')';
      return;
    }
  }
  print_into(t.body(), out);
  out += ')';
}
}  // namespace

std::string print(Term t) {
  std::string out;
  print_into(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse_all() {
    Term t = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return t;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Term parse_sum() {
    std::vector<Term> parts{parse_primary()};
    while (peek('+')) {
      ++pos_;
      parts.push_back(parse_primary());
    }
    return Term::sum(std::move(parts));
  }

  Term parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    if (s_[pos_] == '(') {
      ++pos_;
      Term t = parse_sum();
      expect(')');
      return t;
    }
    std::size_t start = pos_;
    std::string w = word();
    if (w.empty()) throw ParseError("expected a term", start);
    if (w == "empty") return Term::empty();
    if (w == "eta") return eta();
    if (w == "omega") return omega();
    if (w == "zeta") return zeta();
    if (w == "pt") return parse_point();
    if (w == "fin") {
      expect('(');
      skip_ws();
      std::size_t nstart = pos_;
      std::string digits = word();
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw ParseError("fin expects a natural number", nstart);
      if (digits.size() > 6) throw ParseError("fin argument too large", nstart);
      expect(')');
      return fin(std::stoull(digits));
    }
    if (w == "w" && pos_ < s_.size() && s_[pos_] == '*') {
      ++pos_;
      return Term::omega_star(parse_body());
    }
    if (w == "w") return Term::omega(parse_body());
    if (w == "z") return Term::zeta(parse_body());
    if (w == "sh") {
      expect('(');
      if (peek(')')) throw ArityError("parse error at " + std::to_string(pos_) + ": empty shuffle");
      std::vector<Term> args{parse_sum()};
      while (peek(',')) {
        ++pos_;
        args.push_back(parse_sum());
      }
      expect(')');
      return Term::shuffle(std::move(args));
    }
    throw ParseError("unknown term '" + w + "'", start);
  }

  Term parse_body() {
    expect('(');
    if (peek(')')) throw ArityError("parse error at " + std::to_string(pos_) + ": missing body");
    Term t = parse_sum();
    expect(')');
    return t;
  }

  Term parse_point() {
    expect('[');
    std::vector<std::string> names;
    while (!peek(']')) {
      std::size_t start = pos_;
      std::string id = word();
      if (id.empty()) throw ParseError("bad color identifier", start);
      names.push_back(std::move(id));
    }
    ++pos_;
    return Term::point(ColorSet(std::move(names)));
  }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Term parse(std::string_view text) { return Parser(text).parse_all(); }

std::vector<NamedTerm> parse_term_file(std::string_view contents) {
  std::vector<NamedTerm> out;
  std::size_t line_start = 0;
  while (line_start <= contents.size()) {
    std::size_t end = contents.find('\n', line_start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(line_start, end - line_start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      if (auto eq = line.find('='); eq != std::string_view::npos)
        out.push_back({std::string(trim(line.substr(0, eq))), parse(line.substr(eq + 1))});
      else
        out.push_back({"", parse(line)});
    }
    line_start = end + 1;
  }
  return out;
}

}  // namespace clo
