#pragma once

// Fuzzy limits of partial functions f: R -> R.
//
// Two representations:
//  * DiscreteTable: a finite domain. (q, r)-limits are decided exactly: the
//    worst sequence that q-converges to `a` visits every admissible point
//    S = {x in Dom f : x != a, |x - a| <= q} infinitely often, so
//        defect = max_{x in S} |f(x) - b|,
//    and the best single sequence settles on one point, so the weak defect is
//    the min over S.
//  * Generator: an expression over the reals plus finitely many override
//    points. Limits are estimated on a schedule of shrinking exact grids.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzylim/error.hpp"
#include "fuzzylim/expr.hpp"
#include "fuzzylim/scalar.hpp"
#include "fuzzylim/seqlim.hpp"

namespace fuzzylim::funlim {

using PointMap = std::map<Scalar, Scalar>;

class DiscreteTable {
 public:
  explicit DiscreteTable(PointMap entries) : entries_(std::move(entries)) {
    if (entries_.empty()) fail(ErrorCode::invariant_violation, "discrete table must be nonempty");
  }
  const PointMap& entries() const { return entries_; }

  std::optional<Scalar> evaluate(const Scalar& x) const {
    auto it = entries_.find(x);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const DiscreteTable&, const DiscreteTable&) = default;

 private:
  PointMap entries_;
};

/// Expression-defined function. Overrides take precedence over the
/// expression and are in the domain even where the expression is not. With
/// no expression the domain is exactly the override points.
class Generator {
 public:
  Generator(std::optional<Expr> expr, PointMap overrides = {}, std::optional<Interval> domain = std::nullopt)
      : expr_(std::move(expr)), overrides_(std::move(overrides)), domain_(std::move(domain)) {
    if (!expr_ && overrides_.empty())
      fail(ErrorCode::invariant_violation, "generator needs an expression or override points");
  }

  const std::optional<Expr>& expr() const { return expr_; }
  const PointMap& overrides() const { return overrides_; }
  const std::optional<Interval>& domain() const { return domain_; }

  std::optional<Scalar> evaluate(const Scalar& x) const {
    if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
    return evaluate_expr(x);
  }

  /// The expression alone, ignoring overrides.
  std::optional<Scalar> evaluate_expr(const Scalar& x) const {
    if (!expr_) return std::nullopt;
    if (domain_ && !domain_->contains(x)) return std::nullopt;
    return expr_->evaluate(x);
  }

  friend bool operator==(const Generator& a, const Generator& b) {
    return a.expr_ == b.expr_ && a.overrides_ == b.overrides_ && a.domain_ == b.domain_;
  }

 private:
  std::optional<Expr> expr_;
  PointMap overrides_;
  std::optional<Interval> domain_;
};

class FunctionModel {
 public:
  FunctionModel(DiscreteTable t) : repr_(std::move(t)) {}  // NOLINT(google-explicit-constructor)
  FunctionModel(Generator g) : repr_(std::move(g)) {}      // NOLINT(google-explicit-constructor)

  bool is_table() const { return std::holds_alternative<DiscreteTable>(repr_); }
  const DiscreteTable& table() const { return std::get<DiscreteTable>(repr_); }
  const Generator& generator() const { return std::get<Generator>(repr_); }

  std::optional<Scalar> evaluate(const Scalar& x) const {
    return std::visit([&](const auto& f) { return f.evaluate(x); }, repr_);
  }

  friend bool operator==(const FunctionModel&, const FunctionModel&) = default;

 private:
  std::variant<DiscreteTable, Generator> repr_;
};

/// Shrinking margins for the estimators. Each level lays `samples`
/// equispaced exact points over the region widened by the level margin.
struct GridSchedule {
  std::vector<Scalar> levels;
  std::size_t samples = 41;
  Scalar gap{1, 10};  // value-gap threshold for clustering

  void validate() const {
    if (levels.empty()) fail(ErrorCode::invariant_violation, "schedule needs at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] <= 0) fail(ErrorCode::invariant_violation, "schedule levels must be positive");
      if (i > 0 && !(levels[i] < levels[i - 1]))
        fail(ErrorCode::invariant_violation, "schedule levels must be strictly decreasing");
    }
    if (samples < 3) fail(ErrorCode::invariant_violation, "schedule needs at least 3 samples per level");
    if (gap <= 0) fail(ErrorCode::invariant_violation, "cluster gap must be positive");
  }

  friend bool operator==(const GridSchedule&, const GridSchedule&) = default;
};

/// Margins 1/10, 1/100, ..., 10^-6 with 41 samples per level.
inline GridSchedule default_schedule() {
  GridSchedule s;
  Scalar m(1, 10);
  for (int i = 0; i < 6; ++i, m /= 10) s.levels.push_back(m);
  return s;
}

// ---------------------------------------------------------------------------
// Discrete tables: exact (q, r)-limits.

struct Sample {
  Scalar x;
  Scalar y;
};

/// Admissible points S = {x in Dom f : x != a, |x - a| <= q} with values.
inline std::vector<Sample> admissible_points(const DiscreteTable& f, const Scalar& a, const Scalar& q) {
  seqlim::require_nonnegative(q, "q");
  std::vector<Sample> out;
  for (const auto& [x, y] : f.entries())
    if (x != a && abs(x - a) <= q) out.push_back({x, y});
  return out;
}

namespace detail {
inline std::vector<Sample> nonempty_admissible(const DiscreteTable& f, const Scalar& a, const Scalar& q) {
  auto s = admissible_points(f, a, q);
  if (s.empty())
    fail(ErrorCode::no_admissible_sequence,
         "no domain point x != " + to_string(a) + " within " + to_string(q) + " of it");
  return s;
}
}  // namespace detail

inline Scalar qr_defect_discrete(const DiscreteTable& f, const Scalar& a, const Scalar& q, const Scalar& b) {
  Scalar worst(0);
  for (const auto& s : detail::nonempty_admissible(f, a, q)) worst = std::max(worst, Scalar(abs(s.y - b)));
  return worst;
}

inline bool is_qr_limit_discrete(const DiscreteTable& f, const Scalar& a, const Scalar& q, const Scalar& r,
                                 const Scalar& b) {
  seqlim::require_nonnegative(r, "r");
  return qr_defect_discrete(f, a, q, b) <= r;
}

inline Scalar weak_qr_defect_discrete(const DiscreteTable& f, const Scalar& a, const Scalar& q,
                                      const Scalar& b) {
  auto s = detail::nonempty_admissible(f, a, q);
  Scalar best = abs(s.front().y - b);
  for (const auto& p : s) best = std::min(best, Scalar(abs(p.y - b)));
  return best;
}

inline bool is_weak_qr_limit_discrete(const DiscreteTable& f, const Scalar& a, const Scalar& q, const Scalar& r,
                                      const Scalar& b) {
  seqlim::require_nonnegative(r, "r");
  return weak_qr_defect_discrete(f, a, q, b) <= r;
}

/// All b with b = (q, r)-lim at a: [max f(S) - r, min f(S) + r], or empty.
inline std::optional<Interval> qr_limit_set_discrete(const DiscreteTable& f, const Scalar& a, const Scalar& q,
                                                     const Scalar& r) {
  seqlim::require_nonnegative(r, "r");
  auto s = detail::nonempty_admissible(f, a, q);
  Scalar lo = s.front().y, hi = s.front().y;
  for (const auto& p : s) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
  }
  if (lo + r < hi - r) return std::nullopt;
  return Interval(hi - r, lo + r);
}

// ---------------------------------------------------------------------------
// Grid estimators.

/// Samples for one level: equispaced exact grid over the region widened by
/// `margin`, plus override/table points in that band, minus the puncture
/// point, restricted to the domain. Sorted by x, no duplicates.
inline std::vector<Sample> band_samples(const FunctionModel& f, const Interval& region, const Scalar& margin,
                                        std::size_t count, const std::optional<Scalar>& puncture) {
  PointMap picked;
  auto take = [&](const Scalar& x) {
    if (puncture && x == *puncture) return;
    if (region.distance_to(x) > margin) return;
    if (auto y = f.evaluate(x)) picked.emplace(x, *y);
  };
  if (f.is_table()) {
    for (const auto& [x, y] : f.table().entries()) take(x);
  } else {
    Scalar lo = region.lo() - margin;
    Scalar step = (region.hi() + margin - lo) / Scalar(static_cast<unsigned long>(count - 1));
    for (std::size_t k = 0; k < count; ++k) take(lo + step * Scalar(static_cast<unsigned long>(k)));
    for (const auto& [x, y] : f.generator().overrides()) take(x);
  }
  std::vector<Sample> out;
  out.reserve(picked.size());
  for (auto& [x, y] : picked) out.push_back({x, y});
  return out;
}

/// Which point, if any, the estimators leave out. The automatic choice
/// punctures a degenerate region [a, a] at a and nothing otherwise.
class Puncture {
 public:
  static Puncture automatic() { return Puncture(Kind::automatic, Scalar(0)); }
  static Puncture none() { return Puncture(Kind::none, Scalar(0)); }
  static Puncture at(Scalar x) { return Puncture(Kind::at, std::move(x)); }

  std::optional<Scalar> resolve(const Interval& region) const {
    switch (kind_) {
      case Kind::automatic: return region.degenerate() ? std::optional<Scalar>(region.lo()) : std::nullopt;
      case Kind::none: return std::nullopt;
      case Kind::at: return point_;
    }
    return std::nullopt;
  }

 private:
  enum class Kind { automatic, none, at };
  Puncture(Kind k, Scalar p) : kind_(k), point_(std::move(p)) {}
  Kind kind_;
  Scalar point_;
};

struct LevelEstimate {
  Scalar margin;
  Scalar value;
  std::size_t samples;
};

struct RegionEstimate {
  std::vector<LevelEstimate> levels;
  const Scalar& final_value() const { return levels.back().value; }
};

/// Per-level max of |f(x) - b| over band samples. A degenerate region [a, a]
/// is punctured at a unless another puncture is given.
inline RegionEstimate region_defect_estimate(const FunctionModel& f, const Interval& region, const Scalar& b,
                                             const GridSchedule& sched,
                                             const Puncture& puncture = Puncture::automatic()) {
  sched.validate();
  auto hole = puncture.resolve(region);
  RegionEstimate est;
  for (const auto& margin : sched.levels) {
    auto samples = band_samples(f, region, margin, sched.samples, hole);
    if (samples.empty())
      fail(ErrorCode::empty_sample, "no domain samples within " + to_string(margin) + " of " + to_string(region));
    Scalar worst(0);
    for (const auto& s : samples) worst = std::max(worst, Scalar(abs(s.y - b)));
    est.levels.push_back({margin, worst, samples.size()});
  }
  return est;
}

/// (q, r)-limit defect at a through the interval [a - q, a + q], punctured
/// at a.
inline RegionEstimate qr_defect_estimate(const FunctionModel& f, const Scalar& a, const Scalar& q,
                                         const Scalar& b, const GridSchedule& sched) {
  seqlim::require_nonnegative(q, "q");
  return region_defect_estimate(f, Interval(a - q, a + q), b, sched, Puncture::at(a));
}

/// Weak counterpart: min of |f(x) - b| over the final level's samples.
inline Scalar weak_qr_defect_estimate(const FunctionModel& f, const Scalar& a, const Scalar& q, const Scalar& b,
                                      const GridSchedule& sched) {
  seqlim::require_nonnegative(q, "q");
  sched.validate();
  Interval region(a - q, a + q);
  auto samples = band_samples(f, region, sched.levels.back(), sched.samples, a);
  if (samples.empty()) fail(ErrorCode::empty_sample, "no domain samples near " + to_string(region));
  Scalar best = abs(samples.front().y - b);
  for (const auto& s : samples) best = std::min(best, Scalar(abs(s.y - b)));
  return best;
}

/// Interval defect on the exact grid path: f tabulated on `count`
/// equispaced points of the region, then the discrete (q, r)-defect at the
/// region's center with q equal to its half-length.
inline Scalar interval_defect_on_grid(const FunctionModel& f, const Interval& region, const Scalar& b,
                                      std::size_t count = 101) {
  if (region.degenerate()) fail(ErrorCode::invalid_parameter, "grid path needs a region of positive length");
  if (count < 3) fail(ErrorCode::invalid_parameter, "grid path needs at least 3 points");
  PointMap table;
  Scalar step = region.length() / Scalar(static_cast<unsigned long>(count - 1));
  for (std::size_t k = 0; k < count; ++k) {
    Scalar x = region.lo() + step * Scalar(static_cast<unsigned long>(k));
    if (auto y = f.evaluate(x)) table.emplace(x, *y);
  }
  if (f.is_table() || !f.generator().overrides().empty()) {
    const PointMap& extra = f.is_table() ? f.table().entries() : f.generator().overrides();
    for (const auto& [x, y] : extra)
      if (region.contains(x)) table[x] = y;
  }
  if (table.empty()) fail(ErrorCode::empty_sample, "no domain points on the grid of " + to_string(region));
  return qr_defect_discrete(DiscreteTable(std::move(table)), region.center(), region.length() / 2, b);
}

// ---------------------------------------------------------------------------
// Limit values (weak limits) by gap clustering.

struct Cluster {
  Scalar lo;
  Scalar hi;
  std::size_t stable_level = 0;  // earliest level from which the cluster persists
  bool converged = false;        // identical span on the last two levels

  Scalar value() const { return (lo + hi) / 2; }
  Scalar distance_to(const Scalar& b) const { return Interval(lo, hi).distance_to(b); }
};

struct ClusterReport {
  std::vector<Cluster> values;                     // final level, sorted
  std::vector<std::vector<Cluster>> level_trace;   // every level's clusters

  /// Weak r-limit test against the reported limit values.
  bool admits_weak_limit(const Scalar& b, const Scalar& r) const {
    return std::any_of(values.begin(), values.end(), [&](const Cluster& c) { return c.distance_to(b) <= r; });
  }
};

inline std::vector<Cluster> gap_clusters(std::vector<Scalar> values, const Scalar& gap) {
  std::sort(values.begin(), values.end());
  std::vector<Cluster> out;
  for (const auto& v : values) {
    if (!out.empty() && v - out.back().hi <= gap)
      out.back().hi = v;
    else
      out.push_back({v, v});
  }
  return out;
}

inline ClusterReport cluster_values_estimate(const FunctionModel& f, const Interval& region,
                                             const GridSchedule& sched,
                                             const Puncture& puncture = Puncture::automatic()) {
  sched.validate();
  auto hole = puncture.resolve(region);
  ClusterReport report;
  for (const auto& margin : sched.levels) {
    auto samples = band_samples(f, region, margin, sched.samples, hole);
    if (samples.empty())
      fail(ErrorCode::empty_sample, "no domain samples within " + to_string(margin) + " of " + to_string(region));
    std::vector<Scalar> ys;
    for (auto& s : samples) ys.push_back(std::move(s.y));
    report.level_trace.push_back(gap_clusters(std::move(ys), sched.gap));
  }
  const auto& trace = report.level_trace;
  std::size_t last = trace.size() - 1;
  for (Cluster c : trace[last]) {
    auto matches = [&](const Cluster& other) {
      return abs(other.lo - c.lo) <= sched.gap && abs(other.hi - c.hi) <= sched.gap;
    };
    std::size_t level = last;
    while (level > 0 && std::any_of(trace[level - 1].begin(), trace[level - 1].end(), matches)) --level;
    c.stable_level = level;
    c.converged = last > 0 && std::any_of(trace[last - 1].begin(), trace[last - 1].end(), [&](const Cluster& o) {
                    return o.lo == c.lo && o.hi == c.hi;
                  });
    report.values.push_back(std::move(c));
  }
  return report;
}

struct AlmostConstant {
  bool constant = false;
  std::optional<Scalar> value;  // the classical interval limit when constant
};

/// Whether all sampled values inside the region coincide. Override points
/// form the finite exceptional set and are skipped.
inline AlmostConstant almost_constant_check(const FunctionModel& f, const Interval& region,
                                            const GridSchedule& sched) {
  sched.validate();
  std::vector<Scalar> values;
  if (f.is_table()) {
    for (const auto& [x, y] : f.table().entries())
      if (region.contains(x)) values.push_back(y);
  } else {
    const Generator& g = f.generator();
    std::size_t count = region.degenerate() ? 1 : sched.samples;
    Scalar step = region.degenerate() ? Scalar(0) : region.length() / Scalar(static_cast<unsigned long>(count - 1));
    for (std::size_t k = 0; k < count; ++k) {
      Scalar x = region.lo() + step * Scalar(static_cast<unsigned long>(k));
      if (g.overrides().count(x)) continue;
      if (auto y = g.evaluate_expr(x)) values.push_back(*y);
    }
  }
  if (values.empty()) fail(ErrorCode::empty_sample, "no samples inside " + to_string(region));
  bool same = std::all_of(values.begin(), values.end(), [&](const Scalar& v) { return v == values.front(); });
  if (!same) return {false, std::nullopt};
  return {true, values.front()};
}

/// max |f(a) - f(x)| over sampled/tabled x with |x - a| <= radius. A finite
/// spread witnesses that f fuzzy converges at a, with r = spread and
/// b = f(a).
inline Scalar local_spread(const FunctionModel& f, const Scalar& a, const Scalar& radius,
                           std::size_t samples = 201) {
  if (radius <= 0) fail(ErrorCode::invalid_parameter, "radius must be > 0");
  auto fa = f.evaluate(a);
  if (!fa) fail(ErrorCode::point_not_in_domain, to_string(a) + " is not in the domain");
  auto points = band_samples(f, Interval::point(a), radius, samples < 3 ? 3 : samples, std::nullopt);
  Scalar worst(0);
  for (const auto& s : points) worst = std::max(worst, Scalar(abs(*fa - s.y)));
  return worst;
}

// ---------------------------------------------------------------------------
// Limits at +-inf: a function on the naturals is a sequence, so these go
// through the sequence machinery.

inline bool is_r_limit_at_infinity(const seqlim::SequenceSpec& f_on_naturals, const XScalar& b, const Scalar& r) {
  return seqlim::is_r_limit(b, r, f_on_naturals);
}

}  // namespace fuzzylim::funlim
