#pragma once

// Fuzzy limits of real sequences.
//
// A sequence is described intensionally: a finite transient followed by the
// round-robin interleaving of "strands", each of which converges to a target
// in a fixed approach mode. The strand targets are exactly the subsequential
// limits of the denoted sequence, so every limit predicate reduces to a
// finite computation over the targets.
//
// The central quantity is the defect of convergence,
//
//     defect(a) = limsup_i |a - a_i|,
//
// and `a` is an r-limit exactly when defect(a) <= r.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzylim/error.hpp"
#include "fuzzylim/scalar.hpp"

namespace fuzzylim::seqlim {

enum class ApproachMode { exact, from_above, from_below, alternating };

inline std::string_view to_string(ApproachMode m) {
  switch (m) {
    case ApproachMode::exact: return "exact";
    case ApproachMode::from_above: return "above";
    case ApproachMode::from_below: return "below";
    case ApproachMode::alternating: return "alt";
  }
  return "exact";
}

inline std::optional<ApproachMode> parse_mode(std::string_view s) {
  if (s == "exact") return ApproachMode::exact;
  if (s == "above" || s == "from-above") return ApproachMode::from_above;
  if (s == "below" || s == "from-below") return ApproachMode::from_below;
  if (s == "alt" || s == "alternating") return ApproachMode::alternating;
  return std::nullopt;
}

struct Strand {
  XScalar target;
  ApproachMode mode = ApproachMode::exact;

  /// i-th element of the strand stream, i >= 1.
  Scalar element(std::size_t i) const {
    Scalar idx(static_cast<unsigned long>(i));
    if (target.is_pos_inf()) return idx;
    if (target.is_neg_inf()) return -idx;
    const Scalar& d = target.value();
    switch (mode) {
      case ApproachMode::exact: return d;
      case ApproachMode::from_above: return d + 1 / idx;
      case ApproachMode::from_below: return d - 1 / idx;
      case ApproachMode::alternating: return (i % 2 == 0) ? Scalar(d + 1 / idx) : Scalar(d - 1 / idx);
    }
    return d;
  }

  // Mode is irrelevant for infinite targets.
  friend bool operator==(const Strand& x, const Strand& y) {
    if (x.target != y.target) return false;
    return !x.target.is_finite() || x.mode == y.mode;
  }
};

class SequenceSpec {
 public:
  SequenceSpec(std::vector<Scalar> transient, std::vector<Strand> strands)
      : transient_(std::move(transient)), strands_(std::move(strands)) {
    if (strands_.empty()) fail(ErrorCode::invariant_violation, "sequence needs at least one strand");
  }

  const std::vector<Scalar>& transient() const { return transient_; }
  const std::vector<Strand>& strands() const { return strands_; }

  bool has_infinite_target() const {
    return std::any_of(strands_.begin(), strands_.end(),
                       [](const Strand& s) { return !s.target.is_finite(); });
  }

  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;

 private:
  std::vector<Scalar> transient_;
  std::vector<Strand> strands_;
};

class SequenceSet {
 public:
  explicit SequenceSet(std::vector<SequenceSpec> members) : members_(std::move(members)) {
    if (members_.empty()) fail(ErrorCode::invariant_violation, "sequence set must be nonempty");
  }
  const std::vector<SequenceSpec>& members() const { return members_; }

  friend bool operator==(const SequenceSet&, const SequenceSet&) = default;

 private:
  std::vector<SequenceSpec> members_;
};

namespace detail {
struct TargetRange {
  Scalar min;
  Scalar max;
};

inline TargetRange finite_target_range(const SequenceSpec& seq) {
  if (seq.has_infinite_target())
    fail(ErrorCode::unsupported_infinite_target, "operation needs finite strand targets");
  TargetRange range{seq.strands().front().target.value(), seq.strands().front().target.value()};
  for (const auto& s : seq.strands()) {
    const Scalar& t = s.target.value();
    if (t < range.min) range.min = t;
    if (range.max < t) range.max = t;
  }
  return range;
}
}  // namespace detail

/// limsup_i |a - a_i|. Transients never matter; infinite targets give +inf.
inline XScalar defect_of(const Scalar& a, const SequenceSpec& seq) {
  Scalar worst(0);
  for (const auto& s : seq.strands()) {
    if (!s.target.is_finite()) return XScalar::pos_inf();
    Scalar d = abs(a - s.target.value());
    if (worst < d) worst = d;
  }
  return worst;
}

inline void require_nonnegative(const Scalar& r, std::string_view what) {
  if (r < 0) fail(ErrorCode::invalid_parameter, std::string(what) + " must be >= 0");
}

namespace detail {
// Almost all elements of the strand exceed `bound` (strictly).
inline bool eventually_above(const Strand& s, const Scalar& bound) {
  if (s.target.is_pos_inf()) return true;
  if (s.target.is_neg_inf()) return false;
  const Scalar& d = s.target.value();
  return s.mode == ApproachMode::from_above ? bound <= d : bound < d;
}

inline bool eventually_below(const Strand& s, const Scalar& bound) {
  if (s.target.is_neg_inf()) return true;
  if (s.target.is_pos_inf()) return false;
  const Scalar& d = s.target.value();
  return s.mode == ApproachMode::from_below ? d <= bound : d < bound;
}
}  // namespace detail

/// Finite a: defect_of(a) <= r. For a = +inf (-inf), almost all elements must
/// be strictly greater than r (less than -r); here the approach mode matters.
inline bool is_r_limit(const XScalar& a, const Scalar& r, const SequenceSpec& seq) {
  require_nonnegative(r, "r");
  if (a.is_finite()) return defect_of(a.value(), seq) <= XScalar(r);
  const auto& strands = seq.strands();
  if (a.is_pos_inf())
    return std::all_of(strands.begin(), strands.end(),
                       [&](const Strand& s) { return detail::eventually_above(s, r); });
  Scalar neg_r = -r;
  return std::all_of(strands.begin(), strands.end(),
                     [&](const Strand& s) { return detail::eventually_below(s, neg_r); });
}

/// {a : defect_of(a) <= r}, or nullopt when empty.
inline std::optional<Interval> r_limit_set(const Scalar& r, const SequenceSpec& seq) {
  require_nonnegative(r, "r");
  auto range = detail::finite_target_range(seq);
  Scalar lo = range.max - r;
  Scalar hi = range.min + r;
  if (hi < lo) return std::nullopt;
  return Interval(lo, hi);
}

struct ConvergenceRadius {
  Scalar radius;
  Scalar center;
};

/// Smallest r admitting an r-limit, and the unique point attaining it.
inline ConvergenceRadius convergence_radius(const SequenceSpec& seq) {
  auto range = detail::finite_target_range(seq);
  return {(range.max - range.min) / 2, (range.max + range.min) / 2};
}

/// Distance to the nearest subsequential limit: b is a weak r-limit iff
/// this is <= r.
inline XScalar weak_defect(const Scalar& b, const SequenceSpec& seq) {
  std::optional<Scalar> best;
  for (const auto& s : seq.strands()) {
    if (!s.target.is_finite()) continue;
    Scalar d = abs(b - s.target.value());
    if (!best || d < *best) best = std::move(d);
  }
  if (!best) return XScalar::pos_inf();
  return *best;
}

inline bool is_weak_r_limit(const Scalar& b, const Scalar& r, const SequenceSpec& seq) {
  require_nonnegative(r, "r");
  return weak_defect(b, seq) <= XScalar(r);
}

/// One sequence whose r-limits are exactly the common r-limits of the set.
/// Strands are taken in member order, then strand order.
inline SequenceSpec interleave(const SequenceSet& set) {
  std::vector<Scalar> transient;
  std::vector<Strand> strands;
  for (const auto& m : set.members()) {
    transient.insert(transient.end(), m.transient().begin(), m.transient().end());
    strands.insert(strands.end(), m.strands().begin(), m.strands().end());
  }
  return SequenceSpec(std::move(transient), std::move(strands));
}

inline XScalar set_defect(const Scalar& a, const SequenceSet& set) {
  XScalar worst(Scalar(0));
  for (const auto& m : set.members()) worst = std::max(worst, defect_of(a, m));
  return worst;
}

inline bool is_set_r_limit(const Scalar& a, const Scalar& r, const SequenceSet& set) {
  require_nonnegative(r, "r");
  return set_defect(a, set) <= XScalar(r);
}

/// First n elements of the denoted sequence.
inline std::vector<Scalar> sample_prefix(const SequenceSpec& seq, std::size_t n) {
  if (n < 1) fail(ErrorCode::invalid_parameter, "prefix length must be >= 1");
  std::vector<Scalar> out;
  out.reserve(n);
  for (const auto& t : seq.transient()) {
    if (out.size() == n) return out;
    out.push_back(t);
  }
  const auto& strands = seq.strands();
  for (std::size_t round = 1; out.size() < n; ++round)
    for (const auto& s : strands) {
      if (out.size() == n) break;
      out.push_back(s.element(round));
    }
  return out;
}

/// Display-only membership transform max(0, 1 - defect/scale). Not part of
/// the limit theory; the scale is the caller's choice.
inline Scalar membership_display(const XScalar& defect, const Scalar& scale) {
  if (scale <= 0) fail(ErrorCode::invalid_parameter, "scale must be > 0");
  if (!defect.is_finite()) return Scalar(0);
  Scalar mu = 1 - defect.value() / scale;
  return mu < 0 ? Scalar(0) : mu;
}

/// Max of |a - x| over the last `window` observations of a float trace.
inline double streaming_defect(const std::vector<double>& trace, double a, std::size_t window) {
  if (trace.empty()) fail(ErrorCode::invalid_parameter, "empty trace");
  if (window < 1 || trace.size() < window)
    fail(ErrorCode::invalid_parameter, "window must be in [1, trace length]");
  double worst = 0.0;
  for (std::size_t i = trace.size() - window; i < trace.size(); ++i)
    worst = std::max(worst, a > trace[i] ? a - trace[i] : trace[i] - a);
  return worst;
}

/// Online variant of streaming_defect; owned by a single writer.
class StreamingDefect {
 public:
  StreamingDefect(double a, std::size_t window) : a_(a), window_(window) {
    if (window < 1) fail(ErrorCode::invalid_parameter, "window must be >= 1");
    ring_.reserve(window);
  }

  void push(double x) {
    if (ring_.size() < window_) {
      ring_.push_back(x);
    } else {
      ring_[next_] = x;
      next_ = (next_ + 1) % window_;
    }
  }

  bool ready() const { return ring_.size() == window_; }

  double value() const {
    if (!ready()) fail(ErrorCode::invalid_parameter, "fewer observations than the window");
    double worst = 0.0;
    for (double x : ring_) worst = std::max(worst, a_ > x ? a_ - x : x - a_);
    return worst;
  }

 private:
  double a_;
  std::size_t window_;
  std::size_t next_ = 0;
  std::vector<double> ring_;
};

}  // namespace fuzzylim::seqlim
