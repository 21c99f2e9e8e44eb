#pragma once

// File formats for the model kinds, on top of textdoc.
//
// sequence:   transient: [1/2, 3]
//             strands: [{target: 0/1, mode: above}, {target: +inf, mode: exact}]
// set:        members: [{transient: [], strands: [...]}, ...]
// function:   table: [0 -> 0, 1 -> 1]            (rows "x: p/q -> y: p/q" also accepted)
//         or  expr: sign(x)
//             overrides: [0 -> 0]
//             domain: [-1, 1]
//             schedule: {levels: [1/10, 1/100], samples: 41, gap: 1/10}
// automaton:  states: [q0, q1]
//             alphabet: [a, b]
//             transitions: [q0, a -> q0, q0, b -> q1, ...]
//             initial: q0
//             buchi: [q1]          or  muller: [[q0], [q0, q1]]
//
// An optional "kind:" key names the kind; otherwise the keys decide.
// Lasso words are written "prefix | cycle" with symbols separated by
// blanks.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzylim/error.hpp"
#include "fuzzylim/expr.hpp"
#include "fuzzylim/funlim.hpp"
#include "fuzzylim/omegalim.hpp"
#include "fuzzylim/scalar.hpp"
#include "fuzzylim/seqlim.hpp"
#include "fuzzylim/textdoc.hpp"

namespace fuzzylim::formats {

using textdoc::Node;
using fuzzylim::to_string;

// ---- scalars and rows ----

inline Node scalar_node(const Scalar& v) { return Node::atom(to_string(v)); }

inline Scalar scalar_of(const Node& n, std::string_view what) {
  auto v = try_parse_scalar(n.as_atom(what));
  if (!v) throw ParseError(n.line, std::string(what) + ": not a rational number '" + n.text + "'");
  return *v;
}

inline XScalar xscalar_of(const Node& n, std::string_view what) {
  const auto& t = n.as_atom(what);
  if (t == "+inf" || t == "inf") return XScalar::pos_inf();
  if (t == "-inf") return XScalar::neg_inf();
  return scalar_of(n, what);
}

inline std::vector<Scalar> scalars_of(const Node& n, std::string_view what) {
  std::vector<Scalar> out;
  for (const auto& i : n.as_list(what)) out.push_back(scalar_of(i, what));
  return out;
}

inline Node scalars_node(const std::vector<Scalar>& vs) {
  Node n = Node::list();
  for (const auto& v : vs) n.items.push_back(scalar_node(v));
  return n;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "lhs -> rhs" (or with the unicode arrow).
inline std::pair<std::string_view, std::string_view> split_arrow(std::string_view row, std::size_t line) {
  std::size_t at = row.find("->");
  std::size_t width = 2;
  if (at == std::string_view::npos) {
    at = row.find("→");
    width = std::string_view("→").size();
  }
  if (at == std::string_view::npos) throw ParseError(line, "expected 'lhs -> rhs' in '" + std::string(row) + "'");
  return {trim(row.substr(0, at)), trim(row.substr(at + width))};
}

inline std::string_view strip_label(std::string_view s, char label) {
  if (s.size() >= 2 && s[0] == label && trim(s.substr(1)).substr(0, 1) == ":") return trim(trim(s.substr(1)).substr(1));
  return s;
}

inline Scalar row_scalar(std::string_view text, std::size_t line) {
  auto v = try_parse_scalar(text);
  if (!v) throw ParseError(line, "not a rational number '" + std::string(text) + "'");
  return *v;
}

}  // namespace detail

inline funlim::PointMap rows_of(const Node& n, std::string_view what) {
  funlim::PointMap out;
  for (const auto& item : n.as_list(what)) {
    auto [lhs, rhs] = detail::split_arrow(item.as_atom(what), item.line);
    Scalar x = detail::row_scalar(detail::strip_label(lhs, 'x'), item.line);
    Scalar y = detail::row_scalar(detail::strip_label(rhs, 'y'), item.line);
    if (!out.emplace(x, y).second) throw ParseError(item.line, "duplicate entry for x = " + to_string(x));
  }
  return out;
}

inline Node rows_node(const funlim::PointMap& m) {
  Node n = Node::list();
  for (const auto& [x, y] : m) n.items.push_back(Node::atom(to_string(x) + " -> " + to_string(y)));
  return n;
}

// ---- sequences ----

inline seqlim::SequenceSpec sequence_of(const Node& doc) {
  std::vector<Scalar> transient;
  if (const Node* t = doc.find("transient")) transient = scalars_of(*t, "transient");
  std::vector<seqlim::Strand> strands;
  for (const auto& s : doc.at("strands").as_list("strands")) {
    s.as_map("strand");
    XScalar target = xscalar_of(s.at("target"), "target");
    auto mode = seqlim::ApproachMode::exact;
    if (const Node* m = s.find("mode")) {
      auto parsed = seqlim::parse_mode(m->as_atom("mode"));
      if (!parsed) throw ParseError(m->line, "unknown mode '" + m->text + "'");
      mode = *parsed;
    }
    for (const auto& [k, v] : s.fields)
      if (k != "target" && k != "mode") throw ParseError(v.line, "unknown strand key '" + k + "'");
    strands.push_back({target, mode});
  }
  if (strands.empty()) throw ParseError(doc.at("strands").line, "a sequence needs at least one strand");
  return seqlim::SequenceSpec(std::move(transient), std::move(strands));
}

inline Node sequence_node(const seqlim::SequenceSpec& seq) {
  Node n = Node::map();
  n.add("transient", scalars_node(seq.transient()));
  Node strands = Node::list();
  for (const auto& s : seq.strands()) {
    Node m = Node::map();
    m.add("target", Node::atom(to_string(s.target)));
    m.add("mode", Node::atom(std::string(seqlim::to_string(s.mode))));
    strands.items.push_back(std::move(m));
  }
  n.add("strands", std::move(strands));
  return n;
}

inline seqlim::SequenceSet set_of(const Node& doc) {
  std::vector<seqlim::SequenceSpec> members;
  for (const auto& m : doc.at("members").as_list("members")) members.push_back(sequence_of(m.as_map("member")));
  if (members.empty()) throw ParseError(doc.at("members").line, "a set needs at least one member");
  return seqlim::SequenceSet(std::move(members));
}

inline Node set_node(const seqlim::SequenceSet& set) {
  Node n = Node::map();
  Node members = Node::list();
  for (const auto& m : set.members()) members.items.push_back(sequence_node(m));
  n.add("members", std::move(members));
  return n;
}

// ---- functions ----

inline funlim::GridSchedule schedule_of(const Node& n) {
  n.as_map("schedule");
  auto sched = funlim::default_schedule();
  if (const Node* l = n.find("levels")) sched.levels = scalars_of(*l, "levels");
  if (const Node* s = n.find("samples")) {
    Scalar v = scalar_of(*s, "samples");
    if (denominator_of(v) != 1 || v < 3 || v > 100001) throw ParseError(s->line, "samples must be an integer in [3, 100001]");
    sched.samples = static_cast<std::size_t>(numerator_of(v));
  }
  if (const Node* g = n.find("gap")) sched.gap = scalar_of(*g, "gap");
  try {
    sched.validate();
  } catch (const Error& e) {
    throw ParseError(n.line, e.what());
  }
  return sched;
}

inline Node schedule_node(const funlim::GridSchedule& s) {
  Node n = Node::map();
  n.add("levels", scalars_node(s.levels));
  n.add("samples", Node::atom(std::to_string(s.samples)));
  n.add("gap", scalar_node(s.gap));
  return n;
}

inline Interval interval_of(const Node& n, std::string_view what) {
  auto ends = scalars_of(n, what);
  if (ends.size() != 2) throw ParseError(n.line, std::string(what) + " must be [lo, hi]");
  if (ends[1] < ends[0]) throw ParseError(n.line, std::string(what) + " has lo > hi");
  return Interval(ends[0], ends[1]);
}

inline Node interval_node(const Interval& i) { return scalars_node({i.lo(), i.hi()}); }

inline funlim::FunctionModel function_of(const Node& doc) {
  if (const Node* t = doc.find("table")) {
    for (const char* k : {"expr", "overrides", "domain"})
      if (doc.has(k)) throw ParseError(doc.at(k).line, std::string("'") + k + "' cannot be combined with 'table'");
    auto rows = rows_of(*t, "table");
    if (rows.empty()) throw ParseError(t->line, "a table needs at least one entry");
    return funlim::DiscreteTable(std::move(rows));
  }
  std::optional<Expr> e;
  if (const Node* x = doc.find("expr")) {
    try {
      e = parse_expr(x->as_atom("expr"));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(x->line, err.what());
    }
  }
  funlim::PointMap overrides;
  if (const Node* o = doc.find("overrides")) overrides = rows_of(*o, "overrides");
  std::optional<Interval> domain;
  if (const Node* d = doc.find("domain")) domain = interval_of(*d, "domain");
  if (!e && overrides.empty()) throw ParseError(doc.line, "a function needs 'table', 'expr' or 'overrides'");
  return funlim::Generator(std::move(e), std::move(overrides), domain);
}

inline Node function_node(const funlim::FunctionModel& f) {
  Node n = Node::map();
  if (f.is_table()) {
    n.add("table", rows_node(f.table().entries()));
    return n;
  }
  const auto& g = f.generator();
  if (g.expr()) n.add("expr", Node::atom(g.expr()->render()));
  if (!g.overrides().empty()) n.add("overrides", rows_node(g.overrides()));
  if (g.domain()) n.add("domain", interval_node(*g.domain()));
  return n;
}

// ---- automata and words ----

inline std::vector<std::string> names_of(const Node& n, std::string_view what) {
  std::vector<std::string> out;
  for (const auto& i : n.as_list(what)) out.push_back(i.as_atom(what));
  return out;
}

inline Node names_node(const std::vector<std::string>& names) {
  Node n = Node::list();
  for (const auto& s : names) n.items.push_back(Node::atom(s));
  return n;
}

inline omegalim::AutomatonSpec automaton_of(const Node& doc) {
  auto states = names_of(doc.at("states"), "states");
  auto alphabet = names_of(doc.at("alphabet"), "alphabet");
  std::map<std::pair<std::string, std::string>, std::string> delta;
  for (const auto& row : doc.at("transitions").as_list("transitions")) {
    auto [lhs, rhs] = detail::split_arrow(row.as_atom("transition"), row.line);
    std::string l(lhs);
    for (char& c : l)
      if (c == ',') c = ' ';
    std::istringstream in(l);
    std::string q, a, extra;
    if (!(in >> q >> a) || (in >> extra)) throw ParseError(row.line, "transition rows are 'state, symbol -> state'");
    if (!delta.emplace(std::make_pair(q, a), std::string(rhs)).second)
      throw ParseError(row.line, "duplicate transition for (" + q + ", " + a + ")");
  }
  std::string initial = doc.at("initial").as_atom("initial");
  omegalim::Acceptance acc;
  if (const Node* b = doc.find("buchi")) {
    if (doc.has("muller")) throw ParseError(b->line, "give either 'buchi' or 'muller', not both");
    auto f = names_of(*b, "buchi");
    acc = omegalim::Buchi{omegalim::StateSet(f.begin(), f.end())};
  } else if (const Node* m = doc.find("muller")) {
    omegalim::Muller mu;
    for (const auto& member : m->as_list("muller")) {
      auto f = names_of(member, "muller member");
      mu.family.insert(omegalim::StateSet(f.begin(), f.end()));
    }
    acc = mu;
  } else {
    throw ParseError(doc.line, "an automaton needs a 'buchi' or 'muller' acceptance block");
  }
  try {
    return omegalim::AutomatonSpec(states, alphabet, delta, initial, acc);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw Error(ErrorCode::invariant_violation, e.what());
  }
}

inline Node automaton_node(const omegalim::AutomatonSpec& aut) {
  Node n = Node::map();
  n.add("states", names_node(aut.states()));
  n.add("alphabet", names_node(aut.alphabet()));
  Node rows = Node::list();
  for (const auto& q : aut.states())
    for (const auto& a : aut.alphabet()) rows.items.push_back(Node::atom(q + ", " + a + " -> " + aut.step(q, a)));
  n.add("transitions", std::move(rows));
  n.add("initial", Node::atom(aut.initial()));
  if (const auto* b = std::get_if<omegalim::Buchi>(&aut.acceptance())) {
    n.add("buchi", names_node({b->accepting.begin(), b->accepting.end()}));
  } else {
    Node fam = Node::list();
    for (const auto& set : std::get<omegalim::Muller>(aut.acceptance()).family)
      fam.items.push_back(names_node({set.begin(), set.end()}));
    n.add("muller", std::move(fam));
  }
  return n;
}

inline omegalim::LassoWord parse_word(std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos) fail(ErrorCode::parse_error, "a lasso word is written 'prefix | cycle'");
  auto split = [](std::string_view s) {
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  };
  auto cycle = split(text.substr(bar + 1));
  if (cycle.empty() || cycle.front().find('|') != std::string::npos)
    fail(ErrorCode::parse_error, "the cycle of a lasso word must be nonempty");
  return omegalim::LassoWord(split(text.substr(0, bar)), cycle);
}

inline std::string render_word(const omegalim::LassoWord& w) {
  std::string out;
  for (const auto& a : w.prefix) out += a + " ";
  out += "|";
  for (const auto& a : w.cycle) out += " " + a;
  return out;
}

// ---- documents ----

enum class ModelKind { sequence, set, function, automaton };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::sequence: return "sequence";
    case ModelKind::set: return "set";
    case ModelKind::function: return "function";
    case ModelKind::automaton: return "automaton";
  }
  return "unknown";
}

using AnyModel = std::variant<seqlim::SequenceSpec, seqlim::SequenceSet, funlim::FunctionModel, omegalim::AutomatonSpec>;

struct LoadedModel {
  AnyModel model;
  std::optional<funlim::GridSchedule> schedule;  // functions only

  ModelKind kind() const { return static_cast<ModelKind>(model.index()); }
};

inline ModelKind kind_of(const Node& doc) {
  if (const Node* k = doc.find("kind")) {
    const auto& t = k->as_atom("kind");
    for (auto kind : {ModelKind::sequence, ModelKind::set, ModelKind::function, ModelKind::automaton})
      if (t == to_string(kind)) return kind;
    throw ParseError(k->line, "unknown kind '" + t + "'");
  }
  if (doc.has("strands") || doc.has("transient")) return ModelKind::sequence;
  if (doc.has("members")) return ModelKind::set;
  if (doc.has("table") || doc.has("expr") || doc.has("overrides")) return ModelKind::function;
  if (doc.has("states") || doc.has("transitions")) return ModelKind::automaton;
  throw ParseError(doc.line, "cannot tell the model kind from the keys");
}

inline void allow_keys(const Node& doc, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : doc.fields) {
    bool ok = k == "kind";
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) throw ParseError(v.line, "unknown key '" + k + "'");
  }
}

inline LoadedModel model_of(const Node& doc) {
  switch (kind_of(doc)) {
    case ModelKind::sequence:
      allow_keys(doc, {"transient", "strands"});
      return {sequence_of(doc), std::nullopt};
    case ModelKind::set:
      allow_keys(doc, {"members"});
      return {set_of(doc), std::nullopt};
    case ModelKind::function: {
      allow_keys(doc, {"table", "expr", "overrides", "domain", "schedule"});
      std::optional<funlim::GridSchedule> sched;
      if (const Node* s = doc.find("schedule")) sched = schedule_of(*s);
      return {function_of(doc), sched};
    }
    case ModelKind::automaton:
      allow_keys(doc, {"states", "alphabet", "transitions", "initial", "buchi", "muller"});
      return {automaton_of(doc), std::nullopt};
  }
  throw ParseError(doc.line, "unknown model kind");
}

inline LoadedModel parse_model(std::string_view text) { return model_of(textdoc::parse(text)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::invalid_parameter, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline LoadedModel load_model(const std::string& path) { return parse_model(read_file(path)); }

inline Node model_node(const LoadedModel& m) {
  Node n = std::visit(
      [](const auto& v) -> Node {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, seqlim::SequenceSpec>) return sequence_node(v);
        else if constexpr (std::is_same_v<T, seqlim::SequenceSet>) return set_node(v);
        else if constexpr (std::is_same_v<T, funlim::FunctionModel>) return function_node(v);
        else return automaton_node(v);
      },
      m.model);
  Node doc = Node::map();
  doc.add("kind", Node::atom(to_string(m.kind())));
  for (auto& f : n.fields) doc.fields.push_back(std::move(f));
  if (m.schedule) doc.add("schedule", schedule_node(*m.schedule));
  return doc;
}

inline std::string render_model(const LoadedModel& m) { return textdoc::render(model_node(m)); }

}  // namespace fuzzylim::formats
