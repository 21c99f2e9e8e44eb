#pragma once

// Certificates for (q, r)-limit claims and the rules that derive new
// certificates from old ones. Every rule re-verifies its output against the
// derived model before returning it.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzylim/error.hpp"
#include "fuzzylim/expr.hpp"
#include "fuzzylim/funlim.hpp"
#include "fuzzylim/scalar.hpp"

namespace fuzzylim::certalg {

using funlim::DiscreteTable;
using funlim::FunctionModel;
using funlim::Generator;
using funlim::GridSchedule;
using funlim::PointMap;
using fuzzylim::to_string;

struct Model {
  std::string id;
  FunctionModel fn;
};
using ModelRef = std::shared_ptr<const Model>;

inline ModelRef make_model(std::string id, FunctionModel fn) {
  return std::make_shared<const Model>(Model{std::move(id), std::move(fn)});
}

enum class Kind { strong, weak };

inline const char* to_string(Kind k) { return k == Kind::strong ? "strong" : "weak"; }

inline Kind parse_kind(std::string_view s) {
  if (s == "strong") return Kind::strong;
  if (s == "weak") return Kind::weak;
  fail(ErrorCode::parse_error, "unknown certificate kind '" + std::string(s) + "'");
}

struct LimitCertificate;
using CertRef = std::shared_ptr<const LimitCertificate>;

struct Provenance {
  std::string rule;  // "checked" or a derivation rule name
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CertRef> parents;
  std::optional<Scalar> defect;  // recorded by checked certificates
  std::string method;            // "discrete" or "estimator"

  bool checked() const { return rule == "checked"; }
};

struct LimitCertificate {
  ModelRef model;
  Scalar a;
  Scalar q;
  Scalar r;
  Scalar b;
  Kind kind = Kind::strong;
  GridSchedule schedule = funlim::default_schedule();
  Provenance provenance;
};

class ClaimRefuted : public Error {
 public:
  ClaimRefuted(const Scalar& defect, const Scalar& r)
      : Error(ErrorCode::claim_refuted, "defect " + to_string(defect) + " exceeds r = " + to_string(r)),
        defect_(defect) {}
  const Scalar& defect() const noexcept { return defect_; }

 private:
  Scalar defect_;
};

inline const char* method_of(const FunctionModel& f) { return f.is_table() ? "discrete" : "estimator"; }

/// Defect of b at a: the discrete closed form for tables, the final level of
/// the sampling estimator for generators.
inline Scalar defect(const FunctionModel& f, const Scalar& a, const Scalar& q, const Scalar& b, Kind kind,
                     const GridSchedule& sched) {
  seqlim::require_nonnegative(q, "q");
  if (f.is_table()) {
    return kind == Kind::strong ? funlim::qr_defect_discrete(f.table(), a, q, b)
                                : funlim::weak_qr_defect_discrete(f.table(), a, q, b);
  }
  return kind == Kind::strong ? funlim::qr_defect_estimate(f, a, q, b, sched).final_value()
                              : funlim::weak_qr_defect_estimate(f, a, q, b, sched);
}

inline Scalar defect_of(const LimitCertificate& c) {
  if (!c.model) fail(ErrorCode::unknown_model, "certificate has no model");
  return defect(c.model->fn, c.a, c.q, c.b, c.kind, c.schedule);
}

inline bool verify(const LimitCertificate& c) { return defect_of(c) <= c.r; }

/// verify on the certificate and every ancestor.
inline bool verify_tree(const LimitCertificate& c) {
  if (!verify(c)) return false;
  return std::all_of(c.provenance.parents.begin(), c.provenance.parents.end(),
                     [](const CertRef& p) { return p && verify_tree(*p); });
}

inline LimitCertificate check(const ModelRef& model, const Scalar& a, const Scalar& q, const Scalar& r,
                              const Scalar& b, Kind kind,
                              const GridSchedule& sched = funlim::default_schedule()) {
  if (!model) fail(ErrorCode::unknown_model, "no model given");
  seqlim::require_nonnegative(r, "r");
  Scalar d = defect(model->fn, a, q, b, kind, sched);
  if (d > r) throw ClaimRefuted(d, r);
  LimitCertificate c{model, a, q, r, b, kind, sched, {}};
  c.provenance.rule = "checked";
  c.provenance.defect = d;
  c.provenance.method = method_of(model->fn);
  return c;
}

// ---------------------------------------------------------------------------
// Monotone piecewise-linear maps for change of variable.

class MonotoneMap {
 public:
  /// slopes[k] applies between breakpoints[k-1] and breakpoints[k];
  /// value_at_zero pins the map.
  MonotoneMap(std::vector<Scalar> breakpoints, std::vector<Scalar> slopes, Scalar value_at_zero,
              std::optional<Interval> domain = std::nullopt)
      : breaks_(std::move(breakpoints)),
        slopes_(std::move(slopes)),
        at_zero_(std::move(value_at_zero)),
        domain_(std::move(domain)) {
    if (slopes_.size() != breaks_.size() + 1)
      fail(ErrorCode::invalid_parameter, "a monotone map needs one more slope than breakpoints");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!(breaks_[i - 1] < breaks_[i])) fail(ErrorCode::invalid_parameter, "breakpoints must increase strictly");
    bool up = slopes_.front() > 0;
    for (const auto& s : slopes_)
      if (s == 0 || (s > 0) != up) fail(ErrorCode::invalid_parameter, "slopes must be nonzero and of one sign");
  }

  static MonotoneMap affine(const Scalar& k, const Scalar& h, std::optional<Interval> domain = std::nullopt) {
    return MonotoneMap({}, {k}, h, std::move(domain));
  }

  const std::vector<Scalar>& breakpoints() const { return breaks_; }
  const std::vector<Scalar>& slopes() const { return slopes_; }
  const Scalar& value_at_zero() const { return at_zero_; }
  const std::optional<Interval>& domain() const { return domain_; }
  bool increasing() const { return slopes_.front() > 0; }

  Scalar max_abs_slope() const {
    Scalar m(0);
    for (const auto& s : slopes_) m = std::max(m, Scalar(abs(s)));
    return m;
  }

  /// Evaluates the formula; ignores the domain.
  Scalar operator()(const Scalar& x) const {
    // at_zero + sum over pieces of slope * signed overlap of [0, x].
    Scalar lo = x < 0 ? x : Scalar(0), hi = x < 0 ? Scalar(0) : x;
    Scalar acc(0);
    for (std::size_t k = 0; k < slopes_.size(); ++k) {
      Scalar from = k == 0 ? lo : std::max(lo, breaks_[k - 1]);
      Scalar to = k == breaks_.size() ? hi : std::min(hi, breaks_[k]);
      if (from < to) acc += slopes_[k] * (to - from);
    }
    return x < 0 ? Scalar(at_zero_ - acc) : Scalar(at_zero_ + acc);
  }

  /// Image of the domain; nullopt means all of R.
  std::optional<Interval> range() const {
    if (!domain_) return std::nullopt;
    Scalar u = (*this)(domain_->lo()), v = (*this)(domain_->hi());
    return u < v ? Interval(u, v) : Interval(v, u);
  }

  bool in_range(const Scalar& y) const {
    auto r = range();
    return !r || r->contains(y);
  }

  Scalar inverse(const Scalar& y) const {
    if (!in_range(y)) fail(ErrorCode::point_not_in_range, to_string(y) + " is outside the range of the map");
    // Pieces in order of x; images are monotone, so walk until y is covered.
    for (std::size_t k = 0; k < slopes_.size(); ++k) {
      if (k < breaks_.size()) {
        Scalar v = (*this)(breaks_[k]);
        bool before = increasing() ? y <= v : y >= v;
        if (!before) continue;
        return breaks_[k] + (y - v) / slopes_[k];
      }
      Scalar anchor = breaks_.empty() ? Scalar(0) : breaks_.back();
      return anchor + (y - (*this)(anchor)) / slopes_[k];
    }
    return Scalar(0);
  }

  /// The same function written in the expression grammar:
  /// c0 + s0 x + sum_k (s_{k+1} - s_k) max(x - b_k, 0).
  Expr as_expr() const {
    Scalar c0 = at_zero_;
    for (std::size_t k = 0; k < breaks_.size(); ++k)
      if (breaks_[k] < 0) c0 -= (slopes_[k + 1] - slopes_[k]) * (-breaks_[k]);
    Expr x = Expr::var();
    Expr e = Expr::constant(c0) + Expr::constant(slopes_.front()) * x;
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
      Expr hinge = Expr::binary(Expr::Op::max, x - Expr::constant(breaks_[k]), Expr::constant(Scalar(0)));
      e = e + Expr::constant(slopes_[k + 1] - slopes_[k]) * hinge;
    }
    return e;
  }

  friend bool operator==(const MonotoneMap&, const MonotoneMap&) = default;

 private:
  std::vector<Scalar> breaks_;
  std::vector<Scalar> slopes_;
  Scalar at_zero_;
  std::optional<Interval> domain_;
};

// ---------------------------------------------------------------------------
// Model algebra.

namespace detail {

inline std::optional<Interval> meet(const std::optional<Interval>& u, const std::optional<Interval>& v) {
  if (!u) return v;
  if (!v) return u;
  auto m = intersect(*u, *v);
  if (!m) fail(ErrorCode::no_admissible_sequence, "domains " + to_string(*u) + " and " + to_string(*v) + " are disjoint");
  return m;
}

template <class Op>
FunctionModel pointwise(const FunctionModel& f, const FunctionModel& g, Op op, Expr::Op expr_op) {
  if (f.is_table() || g.is_table()) {
    const FunctionModel& t = f.is_table() ? f : g;
    PointMap out;
    for (const auto& [x, y] : t.table().entries()) {
      auto fy = f.evaluate(x), gy = g.evaluate(x);
      if (fy && gy) out.emplace(x, op(*fy, *gy));
    }
    if (out.empty()) fail(ErrorCode::no_admissible_sequence, "the two models share no domain point");
    return DiscreteTable(std::move(out));
  }
  const Generator& u = f.generator();
  const Generator& v = g.generator();
  auto domain = meet(u.domain(), v.domain());
  std::optional<Expr> e;
  if (u.expr() && v.expr()) e = Expr::binary(expr_op, *u.expr(), *v.expr());
  PointMap overrides;
  auto add = [&](const Scalar& x) {
    if (domain && !domain->contains(x)) return;
    auto fy = u.evaluate(x), gy = v.evaluate(x);
    if (fy && gy) overrides[x] = op(*fy, *gy);
  };
  for (const auto& [x, y] : u.overrides()) add(x);
  for (const auto& [x, y] : v.overrides()) add(x);
  if (!e && overrides.empty()) fail(ErrorCode::no_admissible_sequence, "the two models share no domain point");
  return Generator(std::move(e), std::move(overrides), domain);
}

}  // namespace detail

inline FunctionModel sum(const FunctionModel& f, const FunctionModel& g) {
  return detail::pointwise(f, g, [](const Scalar& u, const Scalar& v) { return Scalar(u + v); }, Expr::Op::add);
}

inline FunctionModel difference(const FunctionModel& f, const FunctionModel& g) {
  return detail::pointwise(f, g, [](const Scalar& u, const Scalar& v) { return Scalar(u - v); }, Expr::Op::sub);
}

inline FunctionModel scaled(const FunctionModel& f, const Scalar& k) {
  if (f.is_table()) {
    PointMap out;
    for (const auto& [x, y] : f.table().entries()) out.emplace(x, k * y);
    return DiscreteTable(std::move(out));
  }
  const Generator& g = f.generator();
  std::optional<Expr> e;
  if (g.expr()) e = Expr::constant(k) * *g.expr();
  PointMap overrides;
  for (const auto& [x, y] : g.overrides()) overrides.emplace(x, k * y);
  return Generator(std::move(e), std::move(overrides), g.domain());
}

/// x -> f(g(x)).
inline FunctionModel composed(const FunctionModel& f, const MonotoneMap& g) {
  auto pull = [&](const PointMap& points) {
    PointMap out;
    for (const auto& [x, y] : points)
      if (g.in_range(x)) out.emplace(g.inverse(x), y);
    return out;
  };
  if (f.is_table()) {
    auto out = pull(f.table().entries());
    if (out.empty()) fail(ErrorCode::point_not_in_range, "no table point lies in the range of the map");
    return DiscreteTable(std::move(out));
  }
  const Generator& h = f.generator();
  std::optional<Interval> domain = g.domain();
  if (h.domain()) {
    auto image = detail::meet(h.domain(), g.range());
    Scalar u = g.inverse(image->lo()), v = g.inverse(image->hi());
    domain = detail::meet(domain, u < v ? Interval(u, v) : Interval(v, u));
  }
  std::optional<Expr> e;
  if (h.expr()) e = h.expr()->substitute(g.as_expr());
  PointMap overrides;
  for (const auto& [x, y] : pull(h.overrides()))
    if (!domain || domain->contains(x)) overrides.emplace(x, y);
  if (!e && overrides.empty()) fail(ErrorCode::point_not_in_range, "no override point lies in the range of the map");
  return Generator(std::move(e), std::move(overrides), domain);
}

// ---------------------------------------------------------------------------
// Derivation rules.

namespace detail {

inline CertRef share(const LimitCertificate& c) { return std::make_shared<const LimitCertificate>(c); }

inline LimitCertificate derived(ModelRef model, Scalar a, Scalar q, Scalar r, Scalar b, Kind kind,
                                GridSchedule sched, std::string rule,
                                std::vector<std::pair<std::string, std::string>> params,
                                std::vector<CertRef> parents) {
  LimitCertificate c{std::move(model), std::move(a), std::move(q), std::move(r), std::move(b), kind,
                     std::move(sched), {}};
  c.provenance.rule = std::move(rule);
  c.provenance.params = std::move(params);
  c.provenance.parents = std::move(parents);
  Scalar d = defect_of(c);
  if (d > c.r)
    fail(ErrorCode::derivation_unverified,
         c.provenance.rule + " produced r = " + to_string(c.r) + " but the defect is " + to_string(d));
  return c;
}

inline void require_strong(const LimitCertificate& c, const char* rule) {
  if (c.kind != Kind::strong) fail(ErrorCode::incompatible_certificates, std::string(rule) + " needs strong certificates");
}

}  // namespace detail

/// Strong: u <= q, v >= r. Weak: u >= q, v >= r.
inline LimitCertificate widen(const LimitCertificate& c, const Scalar& u, const Scalar& v) {
  seqlim::require_nonnegative(u, "q");
  bool ok = v >= c.r && (c.kind == Kind::strong ? u <= c.q : u >= c.q);
  if (!ok)
    fail(ErrorCode::invalid_widening, std::string(to_string(c.kind)) + " certificate (q=" + to_string(c.q) +
                                          ", r=" + to_string(c.r) + ") cannot move to (q=" + to_string(u) +
                                          ", r=" + to_string(v) + ")");
  return detail::derived(c.model, c.a, u, v, c.b, c.kind, c.schedule, "widen",
                         {{"q", to_string(u)}, {"r", to_string(v)}}, {detail::share(c)});
}

enum class CombineOp { plus, minus };

inline const char* to_string(CombineOp op) { return op == CombineOp::plus ? "plus" : "minus"; }

inline LimitCertificate combine(const LimitCertificate& c1, const LimitCertificate& c2, CombineOp op) {
  detail::require_strong(c1, "combine");
  detail::require_strong(c2, "combine");
  if (c1.a != c2.a)
    fail(ErrorCode::incompatible_certificates, "points differ: " + to_string(c1.a) + " and " + to_string(c2.a));
  if (!c1.model || !c2.model) fail(ErrorCode::unknown_model, "certificate has no model");
  bool plus = op == CombineOp::plus;
  auto fn = plus ? sum(c1.model->fn, c2.model->fn) : difference(c1.model->fn, c2.model->fn);
  auto model = make_model((plus ? "sum(" : "diff(") + c1.model->id + ", " + c2.model->id + ")", std::move(fn));
  return detail::derived(model, c1.a, std::min(c1.q, c2.q), c1.r + c2.r, plus ? Scalar(c1.b + c2.b) : Scalar(c1.b - c2.b),
                         Kind::strong, c1.schedule, std::string("combine-") + to_string(op), {},
                         {detail::share(c1), detail::share(c2)});
}

inline LimitCertificate scale(const LimitCertificate& c, const Scalar& k) {
  detail::require_strong(c, "scale");
  if (!c.model) fail(ErrorCode::unknown_model, "certificate has no model");
  auto model = make_model("scale(" + to_string(k) + ", " + c.model->id + ")", scaled(c.model->fn, k));
  return detail::derived(model, c.a, c.q, abs(k) * c.r, k * c.b, Kind::strong, c.schedule, "scale",
                         {{"k", to_string(k)}}, {detail::share(c)});
}

/// Points at which the squeeze domination g <= f <= h is checked.
inline std::vector<Scalar> domination_points(const FunctionModel& f, const Scalar& a, const Scalar& q,
                                             const GridSchedule& sched) {
  std::vector<Scalar> xs;
  if (f.is_table()) {
    for (const auto& s : funlim::admissible_points(f.table(), a, q)) xs.push_back(s.x);
    return xs;
  }
  PointMap seen;
  for (const auto& m : sched.levels)
    for (const auto& s : funlim::band_samples(f, Interval(a - q, a + q), m, sched.samples, a)) seen.emplace(s.x, s.y);
  for (const auto& [x, y] : seen) xs.push_back(x);
  return xs;
}

inline LimitCertificate squeeze(const LimitCertificate& cg, const LimitCertificate& ch, const ModelRef& f) {
  detail::require_strong(cg, "squeeze");
  detail::require_strong(ch, "squeeze");
  if (cg.a != ch.a || cg.q != ch.q || cg.r != ch.r || cg.b != ch.b)
    fail(ErrorCode::incompatible_certificates, "squeeze needs certificates with the same (a, q, r, b)");
  if (!f || !cg.model || !ch.model) fail(ErrorCode::unknown_model, "certificate has no model");
  for (const auto& x : domination_points(f->fn, cg.a, cg.q, cg.schedule)) {
    auto lo = cg.model->fn.evaluate(x), mid = f->fn.evaluate(x), hi = ch.model->fn.evaluate(x);
    if (!lo || !mid || !hi || *mid < *lo || *hi < *mid)
      fail(ErrorCode::domination_failure, "g <= f <= h fails at x = " + to_string(x));
  }
  return detail::derived(f, cg.a, cg.q, cg.r, cg.b, Kind::strong, cg.schedule, "squeeze", {},
                         {detail::share(cg), detail::share(ch)});
}

/// Certificate for f(g(x)) at g^-1(a). q shrinks by the steepest slope so
/// the new admissible points map into the old ones.
inline LimitCertificate change_of_variable(const LimitCertificate& c, const MonotoneMap& g) {
  detail::require_strong(c, "change of variable");
  if (!c.model) fail(ErrorCode::unknown_model, "certificate has no model");
  Scalar a = g.inverse(c.a);
  auto model = make_model("compose(" + c.model->id + ")", composed(c.model->fn, g));
  auto join = [](const std::vector<Scalar>& vs) {
    std::string out;
    for (const auto& v : vs) out += (out.empty() ? "" : " ") + to_string(v);
    return out;
  };
  std::vector<std::pair<std::string, std::string>> params{
      {"breakpoints", join(g.breakpoints())}, {"slopes", join(g.slopes())}, {"at-zero", to_string(g.value_at_zero())}};
  if (g.domain()) params.emplace_back("domain", join({g.domain()->lo(), g.domain()->hi()}));
  return detail::derived(model, a, c.q / g.max_abs_slope(), c.r, c.b, Kind::strong, c.schedule,
                         "change-of-variable", std::move(params), {detail::share(c)});
}

/// "f(x) > d near a", checked by scanning the points the certificate rests
/// on.
struct RegionClaim {
  Scalar a;
  Scalar q;
  Scalar d;
  std::string level;  // "exhaustive" for tables, "sampled" for generators
  std::size_t points = 0;
  bool holds = false;
  std::optional<Scalar> counterexample;
};

inline RegionClaim lower_bound(const LimitCertificate& c, const Scalar& d) {
  if (c.kind != Kind::strong) fail(ErrorCode::bound_not_implied, "a weak limit bounds no neighborhood");
  if (!(c.b > d + c.r))
    fail(ErrorCode::bound_not_implied, "need b > d + r, have b = " + to_string(c.b) + ", d + r = " + to_string(d + c.r));
  if (!c.model) fail(ErrorCode::unknown_model, "certificate has no model");
  RegionClaim claim{c.a, c.q, d, c.model->fn.is_table() ? "exhaustive" : "sampled", 0, true, std::nullopt};
  std::vector<funlim::Sample> points;
  if (c.model->fn.is_table())
    points = funlim::admissible_points(c.model->fn.table(), c.a, c.q);
  else
    points = funlim::band_samples(c.model->fn, Interval(c.a - c.q, c.a + c.q), c.schedule.levels.back(),
                                  c.schedule.samples, c.a);
  claim.points = points.size();
  for (const auto& s : points)
    if (s.y <= d) {
      claim.holds = false;
      claim.counterexample = s.x;
      break;
    }
  return claim;
}

/// Bounded variation near a gives a fuzzy limit: b = f(a), r = spread.
/// Tables use q = radius, generators the point case q = 0.
inline LimitCertificate fuzzy_convergence_witness(const ModelRef& model, const Scalar& a, const Scalar& radius,
                                                  const GridSchedule& sched = funlim::default_schedule()) {
  if (!model) fail(ErrorCode::unknown_model, "no model given");
  Scalar spread = funlim::local_spread(model->fn, a, radius);
  Scalar b = *model->fn.evaluate(a);
  Scalar q = model->fn.is_table() ? radius : Scalar(0);
  auto c = check(model, a, q, spread, b, Kind::strong, sched);
  c.provenance.params = {{"radius", to_string(radius)}, {"spread", to_string(spread)}};
  return c;
}

}  // namespace fuzzylim::certalg
