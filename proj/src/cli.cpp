#include "clo/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "clo/acceptance.hpp"
#include "clo/analysis.hpp"
#include "clo/categoricity.hpp"
#include "clo/census.hpp"
#include "clo/codec.hpp"
#include "clo/error.hpp"

namespace clo::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

// "@path" reads a term file holding one term; "@path:name" picks a named term.
Term resolve_term(const std::string& spec) {
  if (spec.empty() || spec[0] != '@') return parse(spec);
  std::string path = spec.substr(1), name;
  if (auto colon = path.rfind(':'); colon != std::string::npos && !file_exists(path)) {
    name = path.substr(colon + 1);
    path = path.substr(0, colon);
  }
  auto terms = parse_term_file(read_file(path));
  if (!name.empty()) {
    for (const auto& nt : terms)
      if (nt.name == name) return nt.term;
    throw Error("no term named " + name + " in " + path);
  }
  if (terms.size() != 1)
    throw Error(path + " holds " + std::to_string(terms.size()) + " terms; use @" + path + ":name");
  return terms[0].term;
}

FinStructure resolve_structure(const std::string& spec) {
  return parse_structure(read_file(spec.starts_with("@") ? spec.substr(1) : spec));
}

json colors_json(const ColorSet& c) { return c.names(); }

json split_json(const SplitTriple& s) {
  return {{"left", print(s.left)}, {"point", colors_json(s.point)}, {"right", print(s.right)},
          {"address", to_string(s.address)}};
}

std::string outcome_name(ReplyOutcome o) {
  switch (o) {
    case ReplyOutcome::ColorMismatch:
      return "color-mismatch";
    case ReplyOutcome::Left:
      return "left";
    case ReplyOutcome::Right:
      return "right";
  }
  return "?";
}

// Transcripts share subgames, so nodes are listed once and referenced by index.
json transcript_json(const GameTranscript& root) {
  std::map<const GameNode*, std::size_t> index;
  std::vector<const GameNode*> order;
  std::function<void(const GameNode*)> visit = [&](const GameNode* n) {
    if (index.count(n)) return;
    index[n] = order.size();
    order.push_back(n);
    for (const auto& r : n->replies)
      if (r.next) visit(r.next.get());
  };
  visit(root.get());
  json nodes = json::array();
  for (const auto* n : order) {
    json replies = json::array();
    for (const auto& r : n->replies) {
      json reply{{"reply", split_json(r.reply)}, {"outcome", outcome_name(r.outcome)}};
      if (r.next) reply["next"] = index[r.next.get()];
      replies.push_back(reply);
    }
    nodes.push_back({{"a", print(n->a)},
                     {"b", print(n->b)},
                     {"rounds", n->rounds},
                     {"side", n->side == 0 ? "a" : "b"},
                     {"move", split_json(n->move)},
                     {"replies", replies}});
  }
  return {{"root", 0}, {"nodes", nodes}};
}

json optional_rank(const std::optional<Rank>& r) { return r ? json(*r) : json(nullptr); }

json address_list(const std::vector<OrbitRep>& reps) {
  json out = json::array();
  for (const auto& m : reps) {
    json e{{"address", to_string(m.address)}};
    if (m.unbounded) e["family"] = m.family;
    out.push_back(e);
  }
  return out;
}

std::vector<std::size_t> parse_ids(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream s(text);
  for (std::string item; std::getline(s, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw PreconditionError("bad id list: " + text);
    out.push_back(v);
  }
  return out;
}

Layout parse_layout(const std::string& s) {
  if (s == "canonical") return Layout::Canonical;
  if (s == "round-robin") return Layout::RoundRobin;
  if (s == "dense") return Layout::Dense;
  throw PreconditionError("unknown layout " + s);
}

std::string layout_name(Layout l) {
  switch (l) {
    case Layout::Canonical:
      return "canonical";
    case Layout::RoundRobin:
      return "round-robin";
    case Layout::Dense:
      return "dense";
  }
  return "?";
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const ArityError*>(&e)) return "arity";
  if (dynamic_cast<const BudgetError*>(&e)) return "budget";
  if (dynamic_cast<const GuardError*>(&e)) return "guard";
  if (dynamic_cast<const AddressError*>(&e)) return "address";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  return "error";
}

// What a command produced: the payload, the exit code and a text rendering.
struct Result {
  json inputs = json::object();
  json result = json::object();
  json stability = json::object();
  std::string text;
  int exit = 0;
};

}  // namespace

Config load_config(const std::string& path) {
  Config c;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config ") + path + ": " + e.what(), e.byte);
  }
  try {
    c.rankBudget = j.value("rankBudget", c.rankBudget);
    c.depthBudget = j.value("depthBudget", c.depthBudget);
    if (j.contains("indexCapOverride") && !j["indexCapOverride"].is_null())
      c.indexCapOverride = j["indexCapOverride"].get<std::uint64_t>();
    if (j.contains("memoLimit") && !j["memoLimit"].is_null()) c.memoLimit = j["memoLimit"].get<std::size_t>();
    if (j.contains("oracleCaps")) {
      c.oracleCaps.max_size = j["oracleCaps"].value("maxSize", c.oracleCaps.max_size);
      c.oracleCaps.max_rank = j["oracleCaps"].value("maxRank", c.oracleCaps.max_rank);
    }
    auto format = j.value("outputFormat", std::string("text"));
    if (format != "text" && format != "json") throw PreconditionError("outputFormat must be text or json");
    c.json = format == "json";
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("config ") + path + ": " + e.what());
  }
  if (c.rankBudget < 0 || c.depthBudget < 0 || (c.indexCapOverride && *c.indexCapOverride == 0) ||
      (c.memoLimit && *c.memoLimit == 0) || c.oracleCaps.max_size == 0)
    throw PreconditionError("config " + path + ": budgets and caps must be positive");
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  std::string command = "clo";
  bool json_out = false;
  try {
    if (const char* path = std::getenv("CLO_CONFIG"); path && *path) cfg = load_config(path);
    json_out = cfg.json;
  } catch (const std::exception& e) {
    err << "error (config): " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Rank-bounded model theory of colored linear orders", "clo"};
  app.require_subcommand(1);
  bool json_flag = false;
  app.add_flag("--json", json_flag, "Machine-readable output");

  Rank rank = -1, max_rank = -1;
  int depth = -1, occurrence = 0, colors_k = 0, level = 0, trunc = 4, tn_n = 3, k0 = 1, n0 = 3, fr_depth = 1;
  int code_depth = 2, mix = 4, seed = -1, cases = -1;
  bool count_only = false, oracle = false, parallel = false;
  std::string term_a, term_b, term_c, layout = "canonical", types, family, only;
  std::vector<std::string> terms;

  auto rank_opt = [&](CLI::App* sub, const std::string& name = "--rank") {
    sub->add_option(name, rank, "Rank (default: configured rank budget)")->check(CLI::NonNegativeNumber);
  };
  auto budgets_opt = [&](CLI::App* sub) {
    sub->add_option("--rank-budget", rank, "Rank budget")->check(CLI::NonNegativeNumber);
    sub->add_option("--depth", depth, "Depth budget")->check(CLI::NonNegativeNumber);
  };

  auto* c_parse = app.add_subcommand("parse", "Parse and canonicalize a term, reporting its shape");
  c_parse->add_option("term", term_a, "Term or @file[:name]")->required();
  auto* c_print = app.add_subcommand("print", "Print terms canonically (every term of an @file)");
  c_print->add_option("term", term_a, "Term or @file[:name]")->required();
  auto* c_ef = app.add_subcommand("ef", "Decide rank-n equivalence");
  rank_opt(c_ef);
  c_ef->add_flag("--oracle", oracle, "Cross-check finite inputs with the brute-force game solver");
  c_ef->add_option("a", term_a)->required();
  c_ef->add_option("b", term_b)->required();
  auto* c_rd = app.add_subcommand("rank-distinguish", "Least rank separating two terms");
  c_rd->add_option("--max", max_rank, "Largest rank searched")->check(CLI::NonNegativeNumber);
  c_rd->add_option("a", term_a)->required();
  c_rd->add_option("b", term_b)->required();
  auto* c_wit = app.add_subcommand("witness", "Spoiler strategy separating two terms");
  rank_opt(c_wit);
  c_wit->add_option("a", term_a)->required();
  c_wit->add_option("b", term_b)->required();
  auto* c_cat = app.add_subcommand("categorical", "Budgeted categoricity check");
  budgets_opt(c_cat);
  c_cat->add_option("term", term_a)->required();
  auto* c_enum = app.add_subcommand("enum-m", "Enumerate the syntactic levels M_n");
  c_enum->add_option("--colors", colors_k, "Number of colors")->required()->check(CLI::Range(0, 3));
  c_enum->add_option("--level", level, "Level n")->required()->check(CLI::Range(0, 3));
  c_enum->add_flag("--count-only", count_only, "Only report the count");
  auto* c_sa = app.add_subcommand("selfadd", "Self-additivity at rank n");
  rank_opt(c_sa);
  c_sa->add_option("term", term_a)->required();
  auto* c_cond = app.add_subcommand("condense", "Condensation at rank n");
  rank_opt(c_cond);
  c_cond->add_option("term", term_a)->required();
  auto* c_it = app.add_subcommand("itypes", "Element classes and convex types at rank n");
  rank_opt(c_it);
  c_it->add_option("term", term_a)->required();
  auto* c_cls = app.add_subcommand("classify", "Complexity classification");
  budgets_opt(c_cls);
  c_cls->add_option("term", term_a)->required();
  auto* c_spl = app.add_subcommand("splice", "Replace a run of top-level summands");
  c_spl->add_option("term", term_a)->required();
  c_spl->add_option("block", term_b, "Run of summands to replace")->required();
  c_spl->add_option("replacement", term_c)->required();
  c_spl->add_option("--occurrence", occurrence, "Which occurrence of the block")->check(CLI::NonNegativeNumber);
  rank_opt(c_spl);
  auto* c_drop = app.add_subcommand("drop", "Delete convex types (ids from itypes)");
  rank_opt(c_drop);
  c_drop->add_option("--types", types, "Comma-separated type ids")->required();
  c_drop->add_option("term", term_a)->required();
  auto* c_enc = app.add_subcommand("encode", "Code a finite structure as a linear order");
  c_enc->add_option("--depth", code_depth, "Index tree depth")->check(CLI::Range(1, 8));
  c_enc->add_option("--mix", mix, "Round-robin repetitions")->check(CLI::Range(1, 64));
  c_enc->add_option("--layout", layout, "canonical | round-robin | dense");
  c_enc->add_option("structure", term_a, "Structure JSON file")->required();
  auto* c_vr = app.add_subcommand("verify-reduction", "Compare isomorphism with equivalence of codes");
  rank_opt(c_vr);
  c_vr->add_option("--depth", code_depth, "Index tree depth")->check(CLI::Range(1, 8));
  c_vr->add_option("--mix", mix, "Round-robin repetitions")->check(CLI::Range(1, 64));
  c_vr->add_option("--layout", layout, "canonical | round-robin | dense");
  c_vr->add_option("a", term_a)->required();
  c_vr->add_option("b", term_b)->required();
  auto* c_cen = app.add_subcommand("census", "Generate and verify an exemplar family");
  c_cen->add_option("--family", family, "zeta | eta | tn | step-points | full-rationals")->required();
  c_cen->add_option("--n", tn_n, "tn: number of models");
  c_cen->add_option("--trunc", trunc, "tn: last named constant")->check(CLI::NonNegativeNumber);
  c_cen->add_option("--k0", k0, "step-points: integer cuts in the window");
  c_cen->add_option("--n0", n0, "step-points: named points per block");
  c_cen->add_option("--slots", fr_depth, "full-rationals: cut slots");
  c_cen->add_flag("--parallel", parallel, "Run pairwise checks on all hardware threads");
  rank_opt(c_cen);
  auto* c_suite = app.add_subcommand("suite", "Run the acceptance criteria");
  c_suite->add_option("--only", only, "Comma-separated criterion ids");
  c_suite->add_option("--cases", cases, "Randomized property cases")->check(CLI::PositiveNumber);
  c_suite->add_option("--seed", seed, "Random seed")->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error (usage): " << e.what() << "\n";
    return 1;
  }
  json_out = json_out || json_flag;

  CLI::App* sub = app.get_subcommands().front();
  command = sub->get_name();
  Rank r = rank >= 0 ? rank : cfg.rankBudget;
  int d = depth >= 0 ? depth : cfg.depthBudget;

  auto start = std::chrono::steady_clock::now();
  Result res;
  EngineOptions eo;
  eo.cap_override = cfg.indexCapOverride;
  eo.memo_limit = cfg.memoLimit;
  json budgets{{"rankBudget", r}, {"depthBudget", d}};
  if (cfg.indexCapOverride) budgets["indexCapOverride"] = *cfg.indexCapOverride;
  if (cfg.memoLimit) budgets["memoLimit"] = *cfg.memoLimit;

  try {
    Engine engine(eo);
    if (command == "parse") {
      Term t = resolve_term(term_a);
      res.inputs = {{"term", term_a}};
      res.result = {{"canonical", print(t)},
                    {"kind", std::string(kind_name(t.kind()))},
                    {"nodes", t.node_count()},
                    {"colors", colors_json(colors_of(t))},
                    {"finite", t.is_finite()},
                    {"syntacticRank", nullptr}};
      if (auto sr = syntactic_rank(t)) res.result["syntacticRank"] = *sr;
      if (t.is_finite()) res.result["size"] = t.finite_size();
      res.text = print(t);
    } else if (command == "print") {
      res.inputs = {{"term", term_a}};
      json list = json::array();
      std::vector<NamedTerm> named;
      bool whole_file = term_a.starts_with("@") && file_exists(term_a.substr(1));
      if (whole_file)
        named = parse_term_file(read_file(term_a.substr(1)));
      else
        named.push_back({"", resolve_term(term_a)});
      for (const auto& nt : named) {
        std::string line = nt.name.empty() ? print(nt.term) : nt.name + " = " + print(nt.term);
        list.push_back({{"name", nt.name}, {"term", print(nt.term)}});
        res.text += (res.text.empty() ? "" : "\n") + line;
      }
      res.result = {{"terms", list}};
    } else if (command == "ef") {
      Term a = resolve_term(term_a), b = resolve_term(term_b);
      res.inputs = {{"a", term_a}, {"b", term_b}, {"rank", r}};
      bool eq = engine.ef_equiv(a, b, r);
      res.result = {{"equivalent", eq}, {"rank", r}};
      if (!eq) res.result["distinguishingRank"] = *engine.distinguishing_rank(a, b, r);
      res.stability = {{"stableFrom", engine.stable_from(a, b, r)}};
      res.text = std::string(eq ? "equivalent" : "not equivalent") + " at rank " + std::to_string(r);
      if (!eq) res.text += " (first differs at rank " + res.result["distinguishingRank"].dump() + ")";
      if (oracle) {
        if (!a.is_finite() || !b.is_finite()) throw PreconditionError("--oracle needs finite terms");
        bool o = ef_oracle(finite_expand(a), finite_expand(b), r, cfg.oracleCaps);
        res.result["oracleAgrees"] = o == eq;
        res.text += o == eq ? "; oracle agrees" : "; ORACLE DISAGREES";
        if (o != eq) res.exit = 1;
      }
    } else if (command == "rank-distinguish") {
      Term a = resolve_term(term_a), b = resolve_term(term_b);
      Rank m = max_rank >= 0 ? max_rank : cfg.rankBudget;
      res.inputs = {{"a", term_a}, {"b", term_b}, {"max", m}};
      budgets["rankBudget"] = m;
      auto dr = engine.distinguishing_rank(a, b, m);
      res.result = {{"distinguishingRank", optional_rank(dr)}, {"max", m}};
      res.text = dr ? "distinguished at rank " + std::to_string(*dr) : "equivalent up to rank " + std::to_string(m);
    } else if (command == "witness") {
      Term a = resolve_term(term_a), b = resolve_term(term_b);
      res.inputs = {{"a", term_a}, {"b", term_b}, {"rank", r}};
      if (engine.ef_equiv(a, b, r)) {
        res.result = {{"equivalent", true}, {"rank", r}};
        res.text = "equivalent at rank " + std::to_string(r) + "; no witness";
      } else {
        auto tr = engine.witness(a, b, r);
        bool ok = check_transcript(engine, tr);
        res.result = {{"equivalent", false}, {"rank", r}, {"checked", ok}, {"transcript", transcript_json(tr)}};
        res.text = "Spoiler opens in " + std::string(tr->side == 0 ? "a" : "b") + " at " +
                   to_string(tr->move.address) + " (" + print(tr->move.left) + " | " + tr->move.point.to_string() +
                   " | " + print(tr->move.right) + "); " + std::to_string(tr->replies.size()) +
                   " replies refuted; transcript " + (ok ? "checks" : "FAILS the check");
        if (!ok) res.exit = 1;
      }
    } else if (command == "categorical") {
      Term t = resolve_term(term_a);
      res.inputs = {{"term", term_a}};
      auto v = is_categorical(engine, t, r, d);
      std::visit(
          [&](const auto& x) {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, CatCategorical>) {
              res.result = {{"verdict", "Categorical"}, {"level", x.cert ? x.cert->level : 0}};
              res.text = "Categorical (M_" + std::to_string(x.cert ? x.cert->level : 0) + " derivation)";
            } else if constexpr (std::is_same_v<X, CatCandidate>) {
              res.result = {{"verdict", "CandidateCategorical"},
                            {"witness", print(x.witness)},
                            {"atRank", x.atRank},
                            {"level", x.level}};
              res.text = "candidate: equivalent at rank " + std::to_string(x.atRank) + " to " + print(x.witness);
              res.exit = 2;
            } else if constexpr (std::is_same_v<X, CatNotCategorical>) {
              res.result = {{"verdict", "NotCategorical"}, {"evidence", x.evidence}};
              res.text = "NotCategorical: " + x.evidence;
            } else {
              res.result = {{"verdict", "Unknown"}};
              res.text = "Unknown";
              res.exit = 2;
            }
          },
          v);
    } else if (command == "enum-m") {
      res.inputs = {{"colors", colors_k}, {"level", level}};
      auto count = mn_count(colors_k, level);
      res.result = {{"count", count}};
      res.text = "count " + std::to_string(count);
      if (!count_only) {
        json list = json::array();
        for (Term t : enumerate_Mn(colors_k, level)) {
          list.push_back(print(t));
          res.text += "\n" + print(t);
        }
        res.result["terms"] = list;
      }
    } else if (command == "selfadd") {
      Term t = resolve_term(term_a);
      res.inputs = {{"term", term_a}, {"rank", r}};
      bool sa = self_additive_at(engine, t, r);
      res.result = {{"selfAdditive", sa}, {"rank", r}};
      if (r > 0) res.stability = {{"sameAtRankMinusOne", self_additive_at(engine, t, r - 1) == sa}};
      res.text = std::string(sa ? "self-additive" : "not self-additive") + " at rank " + std::to_string(r);
    } else if (command == "condense") {
      Term t = resolve_term(term_a);
      res.inputs = {{"term", term_a}, {"rank", r}};
      auto c = condensation_at(engine, t, r);
      json classes = json::array();
      for (const auto& cls : c.classes) {
        json members = json::array();
        for (auto i : cls) members.push_back(to_string(c.sample[i].address));
        classes.push_back(members);
      }
      json galaxies = json::array();
      for (Term g : c.galaxies) galaxies.push_back(print(g));
      res.result = {{"count", c.count ? json(*c.count) : json(nullptr)},
                    {"rank", r},
                    {"classes", classes},
                    {"galaxies", galaxies}};
      res.stability = {{"stable", c.stable}};
      res.text = (c.count ? std::to_string(*c.count) : std::string("infinitely many")) + " classes at rank " +
                 std::to_string(r) + (c.stable ? " (stable)" : " (not yet stable)");
    } else if (command == "itypes") {
      Term t = resolve_term(term_a);
      res.inputs = {{"term", term_a}, {"rank", r}};
      Analysis an(engine, t, r);
      json classes = json::array();
      std::ostringstream text;
      for (std::size_t i = 0; i < an.classes().size(); ++i) {
        const auto& c = an.classes()[i];
        classes.push_back({{"id", i}, {"colors", colors_json(c.colors)}, {"members", address_list(c.members)}});
        text << "class " << i << " [" << c.colors.to_string() << "] " << c.members.size() << " representative(s)\n";
      }
      json types_out = json::array();
      for (const auto& ty : an.convex_types()) {
        json e{{"id", ty.id}, {"classes", ty.memberClasses}, {"isolated", ty.isolatedAtRank}, {"limit", ty.limit}};
        if (ty.descriptor) e["descriptor"] = print(*ty.descriptor);
        if (ty.limit) e["limitKind"] = ty.limitKind;
        types_out.push_back(e);
        text << "type " << ty.id << " classes {";
        for (std::size_t k = 0; k < ty.memberClasses.size(); ++k) text << (k ? "," : "") << ty.memberClasses[k];
        text << "}" << (ty.isolatedAtRank ? " isolated" : "")
             << (ty.limit ? " " + ty.limitKind + " " + print(*ty.descriptor) : "") << "\n";
      }
      res.result = {{"classes", classes}, {"types", types_out}, {"selfAdditive", an.self_additive()}};
      res.text = text.str();
      if (!res.text.empty()) res.text.pop_back();
    } else if (command == "classify") {
      Term t = resolve_term(term_a);
      res.inputs = {{"term", term_a}};
      Budgets b{r, d};
      auto v = classify(engine, t, b);
      res.result = {{"verdict", verdict_name(v.kind)}, {"certificate", v.certificate}};
      if (v.models) res.result["models"] = *v.models;
      if (r > 0) {
        auto lower = classify(engine, t, Budgets{r - 1, d});
        res.stability = {{"sameAtRankMinusOne", lower.kind == v.kind}};
      }
      res.text = verdict_name(v.kind) + (v.certificate.empty() ? "" : ": " + v.certificate);
      if (v.kind == VerdictKind::Unknown) res.exit = 2;
    } else if (command == "splice") {
      Term t = resolve_term(term_a), block = resolve_term(term_b), repl = resolve_term(term_c);
      res.inputs = {{"term", term_a}, {"block", term_b}, {"replacement", term_c}, {"occurrence", occurrence}};
      auto cut = find_block(t, block, static_cast<std::size_t>(occurrence));
      if (!cut) throw PreconditionError("block does not occur as a run of top-level summands");
      Term s = canonicalize(splice(t, *cut, repl));
      res.result = {{"result", print(s)}};
      res.text = print(s);
      if (rank >= 0) {
        bool same_block = engine.ef_equiv(block, repl, r), same = engine.ef_equiv(s, t, r);
        res.result["blockEquivalent"] = same_block;
        res.result["resultEquivalent"] = same;
        res.text += "\nrank " + std::to_string(r) + ": block " + (same_block ? "≡" : "≢") + " replacement, result " +
                    (same ? "≡" : "≢") + " original";
      }
    } else if (command == "drop") {
      Term t = resolve_term(term_a);
      auto ids = parse_ids(types);
      res.inputs = {{"term", term_a}, {"rank", r}, {"types", ids}};
      Term s = drop_convex(engine, t, r, ids);
      res.result = {{"result", print(s)}};
      res.text = print(s);
    } else if (command == "encode") {
      auto a = resolve_structure(term_a);
      TruncParams p{code_depth, mix, parse_layout(layout)};
      res.inputs = {{"structure", to_json(a)}, {"depth", code_depth}, {"mix", mix}, {"layout", layout_name(p.layout)}};
      Term t = encode(a, p);
      res.result = {{"term", print(t)}, {"nodes", t.node_count()}};
      res.text = print(t);
    } else if (command == "verify-reduction") {
      auto a = resolve_structure(term_a), b = resolve_structure(term_b);
      TruncParams p{code_depth, mix, parse_layout(layout)};
      res.inputs = {{"a", to_json(a)}, {"b", to_json(b)}, {"depth", code_depth}, {"mix", mix},
                    {"layout", layout_name(p.layout)}, {"rank", r}};
      auto rep = verify_reduction(engine, a, b, p, r);
      res.result = {{"isoOracle", rep.isoOracle},
                    {"codesEquivalentAtBudget", rep.codesEquivalentAtBudget},
                    {"distinguishingRank", optional_rank(rep.distinguishingRank)},
                    {"consistent", rep.consistent}};
      res.text = std::string(rep.isoOracle ? "isomorphic" : "not isomorphic") + "; codes " +
                 (rep.codesEquivalentAtBudget ? "equivalent up to rank " + std::to_string(r)
                                              : "differ at rank " + std::to_string(*rep.distinguishingRank)) +
                 "; " + (rep.consistent ? "consistent" : "INCONSISTENT");
      if (!rep.consistent) res.exit = 1;
    } else if (command == "census") {
      ExampleFamily f;
      if (family == "zeta")
        f = ExampleFamily::zeta();
      else if (family == "eta")
        f = ExampleFamily::eta();
      else if (family == "tn")
        f = ExampleFamily::tn(tn_n);
      else if (family == "step-points")
        f = ExampleFamily::step_points(k0, n0);
      else if (family == "full-rationals")
        f = ExampleFamily::full_rationals(fr_depth);
      else
        throw PreconditionError("unknown family " + family);
      json params{{"trunc", trunc}, {"rank", r}};
      if (f.kind == FamilyKind::Tn) params["n"] = tn_n;
      if (f.kind == FamilyKind::StepPoints) params["k0"] = k0, params["n0"] = n0;
      if (f.kind == FamilyKind::FullRationals) params["slots"] = fr_depth;
      res.inputs = {{"family", family}, {"params", params}};
      auto rep = verify_family(engine, f, trunc, r, parallel);
      json matrix = json::array();
      for (const auto& row : rep.pairMatrix) {
        json jr = json::array();
        for (const auto& x : row) jr.push_back(optional_rank(x));
        matrix.push_back(jr);
      }
      json models = json::array();
      for (std::size_t i = 0; i < rep.labels.size(); ++i)
        models.push_back({{"label", rep.labels[i]}, {"invariant", rep.invariants[i]}});
      res.result = {{"family", f.name()},
                    {"params", params},
                    {"modelCount", rep.modelCount},
                    {"generated", rep.generated},
                    {"expectedClass", to_string(rep.expectedClass)},
                    {"invariantInjective", rep.invariantInjective},
                    {"pass", rep.pass},
                    {"models", models},
                    {"pairMatrix", matrix}};
      std::ostringstream text;
      text << f.name() << ": " << rep.modelCount << " inequivalent of " << rep.generated << " generated at rank " << r
           << ", expected " << to_string(rep.expectedClass) << ", invariant "
           << (rep.invariantInjective ? "injective" : "NOT injective") << ", " << (rep.pass ? "PASS" : "FAIL");
      for (std::size_t i = 0; i < rep.labels.size(); ++i)
        text << "\n  " << rep.labels[i] << " -> " << rep.invariants[i];
      res.text = text.str();
      if (!rep.pass) res.exit = 1;
    } else if (command == "suite") {
      AcceptanceOptions opts;
      for (auto id : parse_ids(only)) opts.only.insert(static_cast<int>(id));
      if (cases > 0) opts.propertyCases = static_cast<std::size_t>(cases);
      if (seed >= 0) opts.seed = static_cast<std::uint64_t>(seed);
      res.inputs = {{"only", json(std::vector<int>(opts.only.begin(), opts.only.end()))},
                    {"cases", opts.propertyCases},
                    {"seed", opts.seed}};
      json list = json::array();
      bool all = true;
      for (const auto& c : run_acceptance(opts)) {
        list.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        res.text += (res.text.empty() ? "" : "\n") + std::string(c.pass ? "PASS " : "FAIL ") + std::to_string(c.id) +
                    " " + c.name + ": " + c.detail;
        all = all && c.pass;
      }
      res.result = {{"criteria", list}, {"pass", all}};
      if (!all) res.exit = 1;
    }
  } catch (const std::exception& e) {
    if (json_out) {
      json env{{"command", command}, {"error", {{"kind", error_kind(e)}, {"message", e.what()}}}};
      out << env.dump(2) << "\n";
    } else {
      err << "error (" << error_kind(e) << "): " << e.what() << "\n";
    }
    return 1;
  }

  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (json_out) {
    json env{{"command", command},     {"inputs", res.inputs},       {"result", res.result},
             {"budgets", budgets},     {"stability", res.stability}, {"timing_ms", ms}};
    out << env.dump(2) << "\n";
  } else {
    out << res.text << "\n";
  }
  return res.exit;
}

}  // namespace clo::cli
