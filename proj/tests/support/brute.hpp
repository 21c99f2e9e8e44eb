#pragma once

// Brute-force reference computations used only by the test suites. Nothing
// here calls the closed forms under test except the sequence materializer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fuzzylim/seqlim.hpp"

namespace fuzzylim::testing {

// limsup estimate: max distance over the second half of a materialized prefix.
inline double prefix_limsup(const Scalar& a, const seqlim::SequenceSpec& seq, std::size_t n) {
  auto prefix = seqlim::sample_prefix(seq, n);
  double av = to_double(a);
  double worst = 0.0;
  for (std::size_t i = n / 2; i < n; ++i) worst = std::max(worst, std::fabs(av - to_double(prefix[i])));
  return worst;
}

// Points of an exact grid lo + k*step, k = 0..count-1.
inline std::vector<Scalar> scalar_grid(const Scalar& lo, const Scalar& step, int count) {
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(lo + step * k);
  return out;
}

inline Scalar random_scalar(std::mt19937_64& rng, int lo, int hi, int den) {
  std::uniform_int_distribution<int> num(lo * den, hi * den);
  return Scalar(num(rng), den);
}

inline seqlim::ApproachMode random_mode(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> m(0, 3);
  return static_cast<seqlim::ApproachMode>(m(rng));
}

inline seqlim::SequenceSpec random_finite_spec(std::mt19937_64& rng, int max_strands = 4, int bound = 10,
                                               int den = 4) {
  std::uniform_int_distribution<int> count(1, max_strands);
  std::uniform_int_distribution<int> transient_len(0, 3);
  std::vector<Scalar> transient;
  for (int i = transient_len(rng); i > 0; --i) transient.push_back(random_scalar(rng, -50, 50, 1));
  std::vector<seqlim::Strand> strands;
  for (int i = count(rng); i > 0; --i)
    strands.push_back({random_scalar(rng, -bound, bound, den), random_mode(rng)});
  return seqlim::SequenceSpec(std::move(transient), std::move(strands));
}

}  // namespace fuzzylim::testing
