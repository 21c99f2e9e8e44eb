#pragma once

// Definitional reference computations. Each one follows the limit
// definitions literally instead of using the closed forms, at desk scale:
//
//  * sequences: limsup estimated as the max distance over the second half of
//    a materialized prefix;
//  * discrete functions: every periodic input sequence over a nonempty subset
//    of candidate points is tried; the ones that q-converge to `a` are
//    admissible, and the image defect is taken over each admissible one;
//  * automata: the run is simulated symbol by symbol for 2L steps, with L
//    the prefix length plus |states| * |cycle|; the states seen in the
//    second half are taken as the infinitely visited ones.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fuzzylim/error.hpp"
#include "fuzzylim/funlim.hpp"
#include "fuzzylim/omegalim.hpp"
#include "fuzzylim/scalar.hpp"
#include "fuzzylim/seqlim.hpp"

namespace fuzzylim::oracle {

inline constexpr std::size_t max_prefix = 100000;
inline constexpr std::size_t max_admissible = 8;
inline constexpr std::size_t decoy_points = 4;

/// Prefix-limsup estimate of the defect of `a`. Agrees with the closed form
/// within 1e-2 at n = 10^4 for desk-scale specs (<= 4 strands).
inline Scalar prefix_defect(const Scalar& a, const seqlim::SequenceSpec& seq, std::size_t n) {
  if (n < 2) fail(ErrorCode::invalid_parameter, "prefix length must be >= 2");
  if (n > max_prefix) fail(ErrorCode::oracle_scale_exceeded, "prefix length above 100000");
  auto prefix = seqlim::sample_prefix(seq, n);
  Scalar worst(0);
  for (std::size_t i = n / 2; i < n; ++i) {
    Scalar d = abs(a - prefix[i]);
    if (worst < d) worst = std::move(d);
  }
  return worst;
}

/// A periodic sequence cycling through `points`.
inline seqlim::SequenceSpec periodic(const std::vector<Scalar>& points) {
  std::vector<seqlim::Strand> strands;
  for (const auto& p : points) strands.push_back({XScalar(p), seqlim::ApproachMode::exact});
  return seqlim::SequenceSpec({}, std::move(strands));
}

struct QrDefects {
  Scalar strong;
  Scalar weak;
  std::size_t admissible_sequences = 0;
  std::size_t tried_sequences = 0;
};

/// Strong and weak (q, r)-defects at `a` by enumerating periodic sequences.
/// Candidates are the domain points x != a within q of a plus a few of the
/// nearest points beyond, so inadmissible sequences are exercised too.
inline QrDefects qr_defects(const funlim::DiscreteTable& f, const Scalar& a, const Scalar& q, const Scalar& b) {
  seqlim::require_nonnegative(q, "q");
  std::vector<std::pair<Scalar, Scalar>> others;
  for (const auto& [x, y] : f.entries())
    if (x != a) others.emplace_back(x, y);
  std::stable_sort(others.begin(), others.end(),
                   [&](const auto& l, const auto& r) { return abs(l.first - a) < abs(r.first - a); });
  std::size_t within = 0;
  while (within < others.size() && abs(others[within].first - a) <= q) ++within;
  if (within > max_admissible) fail(ErrorCode::oracle_scale_exceeded, "more than 8 admissible points");
  std::size_t pool = std::min(others.size(), within + decoy_points);

  QrDefects out;
  std::optional<Scalar> strong, weak;
  for (std::uint32_t mask = 1; mask < (1u << pool); ++mask) {
    std::vector<Scalar> inputs, images;
    for (std::size_t i = 0; i < pool; ++i)
      if (mask & (1u << i)) {
        inputs.push_back(others[i].first);
        images.push_back(others[i].second);
      }
    ++out.tried_sequences;
    if (!seqlim::is_r_limit(a, q, periodic(inputs))) continue;
    ++out.admissible_sequences;
    Scalar d = seqlim::defect_of(b, periodic(images)).value();
    if (!strong || *strong < d) strong = d;
    if (!weak || d < *weak) weak = d;
  }
  if (!strong) fail(ErrorCode::no_admissible_sequence, "no periodic sequence q-converges to " + to_string(a));
  out.strong = *strong;
  out.weak = *weak;
  return out;
}

inline constexpr std::size_t max_simulation = 2000000;

inline omegalim::StateSet simulated_inf_states(const omegalim::AutomatonSpec& aut, const omegalim::LassoWord& w) {
  omegalim::require_word(aut, w);
  std::size_t period = aut.states().size() * w.cycle.size();
  std::size_t half = w.prefix.size() + period;
  if (2 * half > max_simulation) fail(ErrorCode::oracle_scale_exceeded, "simulation longer than 2000000 steps");
  omegalim::State q = aut.initial();
  omegalim::StateSet seen;
  for (std::size_t i = 0; i < 2 * half; ++i) {
    if (i >= half) seen.insert(q);
    q = aut.step(q, w.at(i));
  }
  return seen;
}

inline bool accepts(const omegalim::AutomatonSpec& aut, const omegalim::LassoWord& w) {
  return aut.accepting(simulated_inf_states(aut, w));
}

}  // namespace fuzzylim::oracle
