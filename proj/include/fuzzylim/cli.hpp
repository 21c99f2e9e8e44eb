#pragma once

// Command dispatch for the fuzzylim tool. A CommandRequest names a verb,
// its input files and its parameters (all as text); execute() validates it,
// runs the analysis and returns a Report whose rendering is deterministic.
//
// Rationals print as "p/q (decimal)"; the fraction is authoritative. The
// oracle verbs print the same keys as their closed-form counterparts in
// terse format, so the two reports can be compared byte for byte.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzylim/certalg.hpp"
#include "fuzzylim/certio.hpp"
#include "fuzzylim/error.hpp"
#include "fuzzylim/formats.hpp"
#include "fuzzylim/funlim.hpp"
#include "fuzzylim/omegalim.hpp"
#include "fuzzylim/oracle.hpp"
#include "fuzzylim/seqlim.hpp"
#include "fuzzylim/textdoc.hpp"

namespace fuzzylim::cli {

using textdoc::Node;
using fuzzylim::to_string;

enum class Format { terse, full };

struct CommandRequest {
  std::string verb;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> params;
  Format format = Format::terse;
};

enum ExitStatus : int {
  exit_ok = 0,
  exit_other = 1,
  exit_claim_refuted = 2,
  exit_no_admissible = 3,
  exit_bad_input = 4,
  exit_oracle_scale = 5,
};

inline int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::claim_refuted: return exit_claim_refuted;
    case ErrorCode::no_admissible_sequence: return exit_no_admissible;
    case ErrorCode::parse_error:
    case ErrorCode::invariant_violation:
    case ErrorCode::invalid_parameter: return exit_bad_input;
    case ErrorCode::oracle_scale_exceeded: return exit_oracle_scale;
    default: return exit_other;
  }
}

struct Report {
  Node body = Node::map();
  int status = exit_ok;

  std::string render() const { return textdoc::render(body); }
};

struct VerbSpec {
  std::string name;
  std::string summary;
  std::size_t min_inputs;
  std::size_t max_inputs;
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

inline const std::vector<VerbSpec>& verbs() {
  static const std::vector<VerbSpec> table{
      {"seq-defect", "defect of convergence of a sequence at a", 1, 1, {"a"}, {"r"}},
      {"seq-rlimits", "the set of r-limits of a sequence", 1, 1, {"r"}, {}},
      {"seq-interleave", "defect of a set of sequences and of their interleaving", 1, 1, {"a"}, {"r"}},
      {"fn-qrlimit", "(q, r)-defect of b at a", 1, 1, {"a", "q", "b"}, {"r", "kind"}},
      {"fn-region", "per-level defect estimate over a region", 1, 1, {"lo", "hi", "b"}, {"puncture"}},
      {"fn-cluster", "limit values over a region by clustering", 1, 1, {"lo", "hi"}, {}},
      {"cert-check", "check a claim and emit its certificate", 1, 1, {"a", "q", "r", "b"}, {"kind"}},
      {"cert-derive",
       "apply a derivation rule to certificates",
       1,
       2,
       {"rule"},
       {"q", "r", "k", "d", "model", "slopes", "breakpoints", "at-zero", "domain"}},
      {"cert-verify", "replay a certificate export", 1, 1, {}, {}},
      {"aut-accept", "acceptance of a lasso word", 1, 1, {"word"}, {}},
      {"oracle-seq-defect", "defect by prefix limsup", 1, 1, {"a"}, {"n"}},
      {"oracle-fn-qrlimit", "(q, r)-defect by periodic-sequence enumeration", 1, 1, {"a", "q", "b"}, {"kind"}},
      {"oracle-aut-accept", "acceptance by direct simulation", 1, 1, {"word"}, {}},
  };
  return table;
}

inline const VerbSpec& verb_spec(const std::string& name) {
  for (const auto& v : verbs())
    if (v.name == name) return v;
  fail(ErrorCode::invalid_parameter, "unknown verb '" + name + "'");
}

inline void validate(const CommandRequest& req) {
  const auto& spec = verb_spec(req.verb);
  if (req.inputs.size() < spec.min_inputs || req.inputs.size() > spec.max_inputs)
    fail(ErrorCode::invalid_parameter, req.verb + " takes " + std::to_string(spec.min_inputs) +
                                           (spec.max_inputs != spec.min_inputs ? "-" + std::to_string(spec.max_inputs) : "") +
                                           " input file(s), got " + std::to_string(req.inputs.size()));
  for (const auto& p : spec.required)
    if (!req.params.count(p)) fail(ErrorCode::invalid_parameter, req.verb + " needs --" + p);
  for (const auto& [k, v] : req.params) {
    bool known = std::find(spec.required.begin(), spec.required.end(), k) != spec.required.end() ||
                 std::find(spec.optional.begin(), spec.optional.end(), k) != spec.optional.end();
    if (!known) fail(ErrorCode::invalid_parameter, req.verb + " does not take --" + k);
  }
}

// ---------------------------------------------------------------------------

namespace detail {

inline Node value(const Scalar& v) { return Node::atom(to_string(v) + " (" + to_decimal(v, 6) + ")"); }

inline Node value(const XScalar& v) { return v.is_finite() ? value(v.value()) : Node::atom(to_string(v)); }

inline Node atom(const std::string& s) { return Node::atom(s); }

inline Node yes_no(bool b) { return Node::atom(b ? "yes" : "no"); }

inline Node interval(const Interval& i) { return Node::list({value(i.lo()), value(i.hi())}); }

inline Node names(const std::set<std::string>& s) {
  Node n = Node::list();
  for (const auto& x : s) n.items.push_back(atom(x));
  return n;
}

inline Node names(const std::vector<std::string>& s) {
  Node n = Node::list();
  for (const auto& x : s) n.items.push_back(atom(x));
  return n;
}

class Params {
 public:
  explicit Params(const CommandRequest& req) : req_(req) {}

  bool has(const std::string& k) const { return req_.params.count(k) > 0; }
  const std::string& text(const std::string& k) const { return req_.params.at(k); }

  Scalar scalar(const std::string& k) const {
    auto v = try_parse_scalar(text(k));
    if (!v) fail(ErrorCode::parse_error, "--" + k + ": not a rational number '" + text(k) + "'");
    return *v;
  }

  std::optional<Scalar> maybe(const std::string& k) const {
    if (!has(k)) return std::nullopt;
    return scalar(k);
  }

  Scalar nonnegative(const std::string& k) const {
    Scalar v = scalar(k);
    if (v < 0) fail(ErrorCode::invalid_parameter, "--" + k + " must be >= 0");
    return v;
  }

  std::vector<Scalar> scalar_list(const std::string& k) const {
    std::vector<Scalar> out;
    std::string t = text(k);
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    for (std::string w; in >> w;) {
      auto v = try_parse_scalar(w);
      if (!v) fail(ErrorCode::parse_error, "--" + k + ": not a rational number '" + w + "'");
      out.push_back(*v);
    }
    return out;
  }

  certalg::Kind kind() const {
    if (!has("kind")) return certalg::Kind::strong;
    return certalg::parse_kind(text("kind"));
  }

 private:
  const CommandRequest& req_;
};

inline formats::LoadedModel load(const std::string& path, formats::ModelKind expected) {
  auto m = formats::load_model(path);
  if (m.kind() != expected)
    fail(ErrorCode::invalid_parameter, path + " holds a " + formats::to_string(m.kind()) + ", expected a " +
                                           formats::to_string(expected));
  return m;
}

inline seqlim::SequenceSpec load_sequence(const std::string& path) {
  return std::get<seqlim::SequenceSpec>(load(path, formats::ModelKind::sequence).model);
}

struct LoadedFunction {
  funlim::FunctionModel fn;
  funlim::GridSchedule schedule;
};

inline LoadedFunction load_function(const std::string& path) {
  auto m = load(path, formats::ModelKind::function);
  return {std::get<funlim::FunctionModel>(m.model), m.schedule.value_or(funlim::default_schedule())};
}

inline omegalim::AutomatonSpec load_automaton(const std::string& path) {
  return std::get<omegalim::AutomatonSpec>(load(path, formats::ModelKind::automaton).model);
}

inline certio::ReplayReport load_certificate(const std::string& path) {
  auto report = certio::replay_text(formats::read_file(path));
  if (!report.ok()) fail(ErrorCode::derivation_unverified, path + " does not replay cleanly");
  return report;
}

inline std::string kind_name(certalg::Kind k) { return certalg::to_string(k); }

// ---- sequences ----

inline Report seq_defect(const CommandRequest& req, bool oracle) {
  Params p(req);
  auto seq = load_sequence(req.inputs[0]);
  Scalar a = p.scalar("a");
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("a", value(a));
  if (oracle) {
    std::size_t n = 10000;
    if (p.has("n")) {
      Scalar v = p.scalar("n");
      if (denominator_of(v) != 1 || v < 2) fail(ErrorCode::invalid_parameter, "--n must be an integer >= 2");
      if (v > Scalar(static_cast<unsigned long>(oracle::max_prefix)))
        fail(ErrorCode::oracle_scale_exceeded, "--n above 100000");
      n = static_cast<std::size_t>(numerator_of(v));
    }
    if (seq.has_infinite_target()) fail(ErrorCode::unsupported_infinite_target, "prefix oracle needs finite targets");
    out.body.add("defect", value(oracle::prefix_defect(a, seq, n)));
    if (req.format == Format::full) out.body.add("prefix", atom(std::to_string(n)));
    return out;
  }
  XScalar d = seqlim::defect_of(a, seq);
  out.body.add("defect", value(d));
  if (auto r = p.maybe("r")) {
    out.body.add("r", value(*r));
    out.body.add("r-limit", yes_no(seqlim::is_r_limit(a, *r, seq)));
  }
  if (req.format == Format::full) {
    out.body.add("weak-defect", value(seqlim::weak_defect(a, seq)));
    out.body.add("strands", atom(std::to_string(seq.strands().size())));
  }
  return out;
}

inline Report seq_rlimits(const CommandRequest& req) {
  Params p(req);
  auto seq = load_sequence(req.inputs[0]);
  Scalar r = p.nonnegative("r");
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("r", value(r));
  if (seq.has_infinite_target()) {
    // Only the infinite points can be limits; report them directly.
    Node inf = Node::list();
    if (seqlim::is_r_limit(XScalar::pos_inf(), r, seq)) inf.items.push_back(atom("+inf"));
    if (seqlim::is_r_limit(XScalar::neg_inf(), r, seq)) inf.items.push_back(atom("-inf"));
    out.body.add("limit-set", atom("empty"));
    out.body.add("infinite-limits", std::move(inf));
    return out;
  }
  auto set = seqlim::r_limit_set(r, seq);
  out.body.add("limit-set", set ? interval(*set) : atom("empty"));
  if (req.format == Format::full) {
    auto cr = seqlim::convergence_radius(seq);
    out.body.add("convergence-radius", value(cr.radius));
    out.body.add("best-center", value(cr.center));
  }
  return out;
}

inline Report seq_interleave(const CommandRequest& req) {
  Params p(req);
  auto m = load(req.inputs[0], formats::ModelKind::set);
  const auto& set = std::get<seqlim::SequenceSet>(m.model);
  Scalar a = p.scalar("a");
  auto merged = seqlim::interleave(set);
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("a", value(a));
  out.body.add("members", atom(std::to_string(set.members().size())));
  out.body.add("set-defect", value(seqlim::set_defect(a, set)));
  out.body.add("interleaved-defect", value(seqlim::defect_of(a, merged)));
  if (auto r = p.maybe("r")) {
    out.body.add("r", value(*r));
    out.body.add("set-r-limit", yes_no(seqlim::is_set_r_limit(a, *r, set)));
    out.body.add("interleaved-r-limit", yes_no(seqlim::is_r_limit(a, *r, merged)));
  }
  if (req.format == Format::full) out.body.add("interleaved", formats::sequence_node(merged));
  return out;
}

// ---- functions ----

inline Node level_trace(const funlim::RegionEstimate& est) {
  Node levels = Node::list();
  for (const auto& l : est.levels) {
    Node n = Node::map();
    n.add("margin", atom(to_string(l.margin)));
    n.add("value", value(l.value));
    n.add("samples", atom(std::to_string(l.samples)));
    levels.items.push_back(std::move(n));
  }
  return levels;
}

inline Report fn_qrlimit(const CommandRequest& req, bool oracle) {
  Params p(req);
  auto [fn, sched] = load_function(req.inputs[0]);
  Scalar a = p.scalar("a"), q = p.nonnegative("q"), b = p.scalar("b");
  auto kind = p.kind();
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("a", value(a));
  out.body.add("q", value(q));
  out.body.add("b", value(b));
  out.body.add("kind", atom(kind_name(kind)));
  if (oracle) {
    if (!fn.is_table()) fail(ErrorCode::invalid_parameter, "the enumeration oracle needs a table model");
    auto o = oracle::qr_defects(fn.table(), a, q, b);
    out.body.add("defect", value(kind == certalg::Kind::strong ? o.strong : o.weak));
    if (req.format == Format::full) {
      out.body.add("tried-sequences", atom(std::to_string(o.tried_sequences)));
      out.body.add("admissible-sequences", atom(std::to_string(o.admissible_sequences)));
    }
    return out;
  }
  Scalar d = certalg::defect(fn, a, q, b, kind, sched);
  out.body.add("defect", value(d));
  if (req.format == Format::full) {
    out.body.add("method", atom(certalg::method_of(fn)));
    if (fn.is_table()) {
      Node pts = Node::list();
      for (const auto& s : funlim::admissible_points(fn.table(), a, q))
        pts.items.push_back(atom(to_string(s.x) + " -> " + to_string(s.y)));
      out.body.add("admissible", std::move(pts));
    } else if (kind == certalg::Kind::strong) {
      out.body.add("levels", level_trace(funlim::qr_defect_estimate(fn, a, q, b, sched)));
    }
  }
  if (auto r = p.maybe("r")) {
    out.body.add("r", value(*r));
    out.body.add("verdict", atom(d <= *r ? "holds" : "refuted"));
    if (d <= *r) {
      auto model = certalg::make_model(req.inputs[0], fn);
      auto cert = certalg::check(model, a, q, *r, b, kind, sched);
      out.body.add("certificate", atom(certio::hash_of(certio::entry_body(cert, {}))));
    } else {
      out.status = exit_claim_refuted;
    }
  }
  return out;
}

inline Report fn_region(const CommandRequest& req) {
  Params p(req);
  auto [fn, sched] = load_function(req.inputs[0]);
  Scalar lo = p.scalar("lo"), hi = p.scalar("hi"), b = p.scalar("b");
  if (hi < lo) fail(ErrorCode::invalid_parameter, "--lo must not exceed --hi");
  Interval region(lo, hi);
  auto puncture = funlim::Puncture::automatic();
  std::string puncture_text = "auto";
  if (p.has("puncture")) {
    puncture_text = p.text("puncture");
    if (puncture_text == "none")
      puncture = funlim::Puncture::none();
    else if (puncture_text != "auto")
      puncture = funlim::Puncture::at(p.scalar("puncture"));
  }
  auto est = funlim::region_defect_estimate(fn, region, b, sched, puncture);
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("region", interval(region));
  out.body.add("b", value(b));
  out.body.add("puncture", atom(puncture_text));
  out.body.add("final", value(est.final_value()));
  if (!region.degenerate()) out.body.add("grid-defect", value(funlim::interval_defect_on_grid(fn, region, b)));
  if (req.format == Format::full) out.body.add("levels", level_trace(est));
  return out;
}

inline Report fn_cluster(const CommandRequest& req) {
  Params p(req);
  auto [fn, sched] = load_function(req.inputs[0]);
  Scalar lo = p.scalar("lo"), hi = p.scalar("hi");
  if (hi < lo) fail(ErrorCode::invalid_parameter, "--lo must not exceed --hi");
  Interval region(lo, hi);
  auto report = funlim::cluster_values_estimate(fn, region, sched);
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("region", interval(region));
  Node values = Node::list();
  for (const auto& c : report.values) {
    Node n = Node::map();
    n.add("span", interval(Interval(c.lo, c.hi)));
    n.add("stable-level", atom(std::to_string(c.stable_level)));
    n.add("converged", yes_no(c.converged));
    values.items.push_back(std::move(n));
  }
  out.body.add("values", std::move(values));
  if (!region.degenerate()) {
    auto ac = funlim::almost_constant_check(fn, region, sched);
    out.body.add("almost-constant", ac.constant ? value(*ac.value) : atom("no"));
  }
  if (req.format == Format::full) {
    Node trace = Node::list();
    for (std::size_t k = 0; k < report.level_trace.size(); ++k) {
      Node level = Node::list();
      for (const auto& c : report.level_trace[k]) level.items.push_back(atom(to_string(Interval(c.lo, c.hi))));
      trace.items.push_back(std::move(level));
    }
    out.body.add("level-trace", std::move(trace));
  }
  return out;
}

// ---- certificates ----

inline Report certificate_report(const certalg::LimitCertificate& c) {
  Report out;
  out.body = certio::export_node(c);
  return out;
}

inline Report cert_check(const CommandRequest& req) {
  Params p(req);
  auto [fn, sched] = load_function(req.inputs[0]);
  auto model = certalg::make_model(req.inputs[0], fn);
  try {
    return certificate_report(
        certalg::check(model, p.scalar("a"), p.nonnegative("q"), p.nonnegative("r"), p.scalar("b"), p.kind(), sched));
  } catch (const certalg::ClaimRefuted& e) {
    Report out;
    out.body.add("model", atom(req.inputs[0]));
    out.body.add("verdict", atom("refuted"));
    out.body.add("defect", value(e.defect()));
    out.body.add("r", value(p.scalar("r")));
    out.status = exit_claim_refuted;
    return out;
  }
}

inline Report cert_derive(const CommandRequest& req) {
  Params p(req);
  std::string rule = p.text("rule");
  auto first = load_certificate(req.inputs[0]).root;
  auto second = [&]() -> certalg::CertRef {
    if (req.inputs.size() < 2) fail(ErrorCode::invalid_parameter, rule + " needs two certificate files");
    return load_certificate(req.inputs[1]).root;
  };
  auto only_one = [&] {
    if (req.inputs.size() != 1) fail(ErrorCode::invalid_parameter, rule + " takes one certificate file");
  };
  if (rule == "widen") {
    only_one();
    return certificate_report(certalg::widen(*first, p.has("q") ? p.nonnegative("q") : first->q,
                                             p.has("r") ? p.nonnegative("r") : first->r));
  }
  if (rule == "combine-plus" || rule == "combine-minus")
    return certificate_report(certalg::combine(*first, *second(),
                                               rule == "combine-plus" ? certalg::CombineOp::plus : certalg::CombineOp::minus));
  if (rule == "scale") {
    only_one();
    return certificate_report(certalg::scale(*first, p.scalar("k")));
  }
  if (rule == "squeeze") {
    if (!p.has("model")) fail(ErrorCode::invalid_parameter, "squeeze needs --model");
    auto [fn, sched] = load_function(p.text("model"));
    return certificate_report(certalg::squeeze(*first, *second(), certalg::make_model(p.text("model"), fn)));
  }
  if (rule == "change-of-variable") {
    only_one();
    std::vector<Scalar> breaks = p.has("breakpoints") ? p.scalar_list("breakpoints") : std::vector<Scalar>{};
    std::vector<Scalar> slopes = p.scalar_list("slopes");
    std::optional<Interval> domain;
    if (p.has("domain")) {
      auto ends = p.scalar_list("domain");
      if (ends.size() != 2 || ends[1] < ends[0]) fail(ErrorCode::invalid_parameter, "--domain takes 'lo hi'");
      domain = Interval(ends[0], ends[1]);
    }
    certalg::MonotoneMap g(breaks, slopes, p.has("at-zero") ? p.scalar("at-zero") : Scalar(0), domain);
    return certificate_report(certalg::change_of_variable(*first, g));
  }
  if (rule == "lower-bound") {
    only_one();
    auto claim = certalg::lower_bound(*first, p.scalar("d"));
    Report out;
    out.body.add("certificate", atom(req.inputs[0]));
    out.body.add("claim", atom("f(x) > " + to_string(claim.d) + " for x != a with |x - a| <= q"));
    out.body.add("a", value(claim.a));
    out.body.add("q", value(claim.q));
    out.body.add("level", atom(claim.level));
    out.body.add("points", atom(std::to_string(claim.points)));
    out.body.add("holds", yes_no(claim.holds));
    if (claim.counterexample) out.body.add("counterexample", value(*claim.counterexample));
    if (!claim.holds) out.status = exit_claim_refuted;
    return out;
  }
  fail(ErrorCode::invalid_parameter, "unknown rule '" + rule + "'");
}

inline Report cert_verify(const CommandRequest& req) {
  auto report = certio::replay_text(formats::read_file(req.inputs[0]));
  Report out;
  out.body.add("certificate", atom(req.inputs[0]));
  Node entries = Node::list();
  for (const auto& e : report.entries) {
    Node n = Node::map();
    n.add("hash", atom(e.hash.substr(0, 16)));
    n.add("rule", atom(e.rule));
    n.add("hash-ok", yes_no(e.hash_ok));
    n.add("rule-ok", yes_no(e.rule_ok));
    n.add("verified", yes_no(e.verified));
    if (e.defect) n.add("defect", value(*e.defect));
    if (!e.note.empty()) n.add("note", atom(e.note));
    entries.items.push_back(std::move(n));
  }
  out.body.add("entries", std::move(entries));
  out.body.add("verdict", atom(report.ok() ? "valid" : "invalid"));
  if (!report.ok()) out.status = exit_claim_refuted;
  return out;
}

// ---- automata ----

inline Report aut_accept(const CommandRequest& req, bool oracle) {
  Params p(req);
  auto aut = load_automaton(req.inputs[0]);
  omegalim::LassoWord w = formats::parse_word(p.text("word"));
  Report out;
  out.body.add("model", atom(req.inputs[0]));
  out.body.add("word", atom(formats::render_word(w)));
  if (oracle) {
    if (aut.states().size() > 4) fail(ErrorCode::oracle_scale_exceeded, "the simulation oracle takes at most 4 states");
    auto inf = oracle::simulated_inf_states(aut, w);
    out.body.add("inf-states", names(inf));
    out.body.add("verdict", atom(aut.accepting(inf) ? "accept" : "reject"));
    return out;
  }
  auto run = omegalim::run(aut, w);
  auto inf = omegalim::inf_states(run);
  out.body.add("inf-states", names(inf));
  out.body.add("verdict", atom(aut.accepting(inf) ? "accept" : "reject"));
  if (req.format == Format::full) {
    out.body.add("run-prefix", names(run.prefix));
    out.body.add("run-cycle", names(run.cycle));
    auto weak = omegalim::weak_limit_states(aut, run);
    out.body.add("weak-limit-states", names(weak));
    out.body.add("weak-limit-verdict", atom(aut.accepting(weak) ? "accept" : "reject"));
  }
  return out;
}

}  // namespace detail

inline Report execute(const CommandRequest& req) {
  try {
    validate(req);
    const auto& v = req.verb;
    if (v == "seq-defect") return detail::seq_defect(req, false);
    if (v == "seq-rlimits") return detail::seq_rlimits(req);
    if (v == "seq-interleave") return detail::seq_interleave(req);
    if (v == "fn-qrlimit") return detail::fn_qrlimit(req, false);
    if (v == "fn-region") return detail::fn_region(req);
    if (v == "fn-cluster") return detail::fn_cluster(req);
    if (v == "cert-check") return detail::cert_check(req);
    if (v == "cert-derive") return detail::cert_derive(req);
    if (v == "cert-verify") return detail::cert_verify(req);
    if (v == "aut-accept") return detail::aut_accept(req, false);
    if (v == "oracle-seq-defect") return detail::seq_defect(req, true);
    if (v == "oracle-fn-qrlimit") return detail::fn_qrlimit(req, true);
    if (v == "oracle-aut-accept") return detail::aut_accept(req, true);
    fail(ErrorCode::invalid_parameter, "unknown verb '" + v + "'");
  } catch (const Error& e) {
    Report out;
    out.body.add("error", Node::atom(std::string(to_string(e.code()))));
    std::string what = e.what();
    std::string prefix = std::string(to_string(e.code())) + ": ";
    out.body.add("detail", Node::atom(what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what));
    out.status = exit_status(e.code());
    return out;
  }
}

}  // namespace fuzzylim::cli
