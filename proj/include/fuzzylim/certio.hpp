#pragma once

// Certificate export and replay. An export lists every certificate of a
// derivation tree, parents first; each entry carries its model, claim,
// rule, parameters and the SHA-256 of its parents' entries. Replay checks
// the hashes, re-runs every rule from the parents and re-verifies every
// claim against its model.

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzylim/certalg.hpp"
#include "fuzzylim/formats.hpp"
#include "fuzzylim/textdoc.hpp"

namespace fuzzylim::certio {

using certalg::CertRef;
using certalg::LimitCertificate;
using textdoc::Node;

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::invariant_violation, "SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

/// Entry without its hash; the hash is taken over render_inline of this.
inline Node entry_body(const LimitCertificate& c, const std::vector<std::string>& parent_hashes) {
  if (!c.model) fail(ErrorCode::unknown_model, "certificate has no model");
  Node model = formats::function_node(c.model->fn);
  model.fields.insert(model.fields.begin(), {"id", Node::atom(c.model->id)});
  Node n = Node::map();
  n.add("model", std::move(model));
  n.add("a", formats::scalar_node(c.a));
  n.add("q", formats::scalar_node(c.q));
  n.add("r", formats::scalar_node(c.r));
  n.add("b", formats::scalar_node(c.b));
  n.add("kind", Node::atom(certalg::to_string(c.kind)));
  n.add("schedule", formats::schedule_node(c.schedule));
  n.add("rule", Node::atom(c.provenance.rule));
  if (!c.provenance.params.empty()) {
    Node params = Node::map();
    for (const auto& [k, v] : c.provenance.params) params.add(k, Node::atom(v));
    n.add("params", std::move(params));
  }
  if (c.provenance.defect) n.add("defect", formats::scalar_node(*c.provenance.defect));
  if (!c.provenance.method.empty()) n.add("method", Node::atom(c.provenance.method));
  Node parents = Node::list();
  for (const auto& h : parent_hashes) parents.items.push_back(Node::atom(h));
  n.add("parents", std::move(parents));
  return n;
}

inline std::string hash_of(const Node& body) { return sha256_hex(textdoc::render_inline(body)); }

namespace detail {

inline std::string append(const LimitCertificate& c, std::vector<Node>& out, std::map<const void*, std::string>& done) {
  std::vector<std::string> parent_hashes;
  for (const auto& p : c.provenance.parents) {
    auto it = done.find(p.get());
    parent_hashes.push_back(it != done.end() ? it->second : append(*p, out, done));
    done[p.get()] = parent_hashes.back();
  }
  Node body = entry_body(c, parent_hashes);
  std::string h = hash_of(body);
  body.fields.insert(body.fields.begin(), {"hash", Node::atom(h)});
  bool seen = false;
  for (const auto& e : out) seen = seen || e.at("hash").text == h;
  if (!seen) out.push_back(std::move(body));
  return h;
}

}  // namespace detail

inline Node export_node(const LimitCertificate& c) {
  std::vector<Node> entries;
  std::map<const void*, std::string> done;
  std::string root = detail::append(c, entries, done);
  Node doc = Node::map();
  doc.add("kind", Node::atom("certificate"));
  doc.add("root", Node::atom(root));
  doc.add("certificates", Node::list(std::move(entries)));
  return doc;
}

inline std::string export_text(const LimitCertificate& c) { return textdoc::render(export_node(c)); }

struct EntryReport {
  std::string hash;
  std::string rule;
  bool hash_ok = false;
  bool rule_ok = false;
  bool verified = false;
  std::optional<Scalar> defect;
  std::string note;

  bool ok() const { return hash_ok && rule_ok && verified; }
};

struct ReplayReport {
  std::vector<EntryReport> entries;
  CertRef root;

  bool ok() const {
    return root && !entries.empty() &&
           std::all_of(entries.begin(), entries.end(), [](const EntryReport& e) { return e.ok(); });
  }
};

namespace detail {

inline std::vector<Scalar> scalar_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<Scalar> out;
  for (std::string w; in >> w;) out.push_back(parse_scalar(w));
  return out;
}

inline const std::string& param(const LimitCertificate& c, const std::string& key) {
  for (const auto& [k, v] : c.provenance.params)
    if (k == key) return v;
  fail(ErrorCode::parse_error, "rule " + c.provenance.rule + " is missing parameter '" + key + "'");
}

inline bool same_claim(const LimitCertificate& x, const LimitCertificate& y) {
  return x.a == y.a && x.q == y.q && x.r == y.r && x.b == y.b && x.kind == y.kind && x.model->fn == y.model->fn &&
         x.model->id == y.model->id;
}

/// Re-runs the rule that produced `c` from its parents.
inline LimitCertificate rederive(const LimitCertificate& c) {
  const auto& rule = c.provenance.rule;
  const auto& ps = c.provenance.parents;
  auto need = [&](std::size_t n) {
    if (ps.size() != n) fail(ErrorCode::parse_error, rule + " takes " + std::to_string(n) + " parent(s)");
  };
  if (rule == "checked") {
    need(0);
    return certalg::check(c.model, c.a, c.q, c.r, c.b, c.kind, c.schedule);
  }
  if (rule == "widen") {
    need(1);
    return certalg::widen(*ps[0], parse_scalar(param(c, "q")), parse_scalar(param(c, "r")));
  }
  if (rule == "combine-plus" || rule == "combine-minus") {
    need(2);
    return certalg::combine(*ps[0], *ps[1], rule == "combine-plus" ? certalg::CombineOp::plus : certalg::CombineOp::minus);
  }
  if (rule == "scale") {
    need(1);
    return certalg::scale(*ps[0], parse_scalar(param(c, "k")));
  }
  if (rule == "squeeze") {
    need(2);
    return certalg::squeeze(*ps[0], *ps[1], c.model);
  }
  if (rule == "change-of-variable") {
    need(1);
    std::optional<Interval> domain;
    for (const auto& [k, v] : c.provenance.params)
      if (k == "domain") {
        auto ends = scalar_words(v);
        if (ends.size() != 2) fail(ErrorCode::parse_error, "domain parameter needs two values");
        domain = Interval(ends[0], ends[1]);
      }
    certalg::MonotoneMap g(scalar_words(param(c, "breakpoints")), scalar_words(param(c, "slopes")),
                           parse_scalar(param(c, "at-zero")), domain);
    return certalg::change_of_variable(*ps[0], g);
  }
  fail(ErrorCode::parse_error, "unknown rule '" + rule + "'");
}

}  // namespace detail

inline ReplayReport replay(const Node& doc) {
  ReplayReport report;
  std::map<std::string, CertRef> by_hash;
  const auto& entries = doc.at("certificates").as_list("certificates");
  for (const auto& e : entries) {
    e.as_map("certificate");
    EntryReport er;
    er.hash = e.at("hash").as_atom("hash");
    const Node& m = e.at("model").as_map("model");
    std::string id = m.at("id").as_atom("id");
    Node fn = m;
    std::erase_if(fn.fields, [](const auto& f) { return f.first == "id"; });
    LimitCertificate c;
    c.model = certalg::make_model(id, formats::function_of(fn));
    c.a = formats::scalar_of(e.at("a"), "a");
    c.q = formats::scalar_of(e.at("q"), "q");
    c.r = formats::scalar_of(e.at("r"), "r");
    c.b = formats::scalar_of(e.at("b"), "b");
    c.kind = certalg::parse_kind(e.at("kind").as_atom("kind"));
    c.schedule = formats::schedule_of(e.at("schedule"));
    c.provenance.rule = e.at("rule").as_atom("rule");
    if (const Node* p = e.find("params"))
      for (const auto& [k, v] : p->as_map("params").fields) c.provenance.params.emplace_back(k, v.as_atom(k));
    if (const Node* d = e.find("defect")) c.provenance.defect = formats::scalar_of(*d, "defect");
    if (const Node* mt = e.find("method")) c.provenance.method = mt->as_atom("method");
    std::vector<std::string> parent_hashes;
    for (const auto& ph : e.at("parents").as_list("parents")) {
      auto it = by_hash.find(ph.as_atom("parent"));
      if (it == by_hash.end()) throw ParseError(ph.line, "parent " + ph.text + " does not precede its child");
      c.provenance.parents.push_back(it->second);
      parent_hashes.push_back(ph.text);
    }
    er.rule = c.provenance.rule;
    er.hash_ok = hash_of(entry_body(c, parent_hashes)) == er.hash;
    if (!er.hash_ok) er.note = "hash mismatch";
    try {
      auto again = detail::rederive(c);
      er.rule_ok = detail::same_claim(again, c);
      if (!er.rule_ok) er.note = "rule output differs";
    } catch (const Error& err) {
      er.note = err.what();
    }
    try {
      er.defect = certalg::defect_of(c);
      er.verified = *er.defect <= c.r;
      if (!er.verified && er.note.empty()) er.note = "defect exceeds r";
    } catch (const Error& err) {
      if (er.note.empty()) er.note = err.what();
    }
    auto ref = std::make_shared<const LimitCertificate>(std::move(c));
    by_hash[er.hash] = ref;
    report.entries.push_back(std::move(er));
  }
  auto it = by_hash.find(doc.at("root").as_atom("root"));
  if (it == by_hash.end()) throw ParseError(doc.at("root").line, "root hash names no entry");
  report.root = it->second;
  return report;
}

inline ReplayReport replay_text(std::string_view text) { return replay(textdoc::parse(text)); }

}  // namespace fuzzylim::certio
