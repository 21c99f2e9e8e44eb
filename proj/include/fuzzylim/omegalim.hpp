#pragma once

// Deterministic complete Buchi/Muller automata on lasso words
// prefix . cycle^w. Acceptance is computed from the set of states the run
// visits infinitely often, and again as the set of weak 0-limits of the
// state sequence through the sequence module.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzylim/error.hpp"
#include "fuzzylim/scalar.hpp"
#include "fuzzylim/seqlim.hpp"

namespace fuzzylim::omegalim {

using Symbol = std::string;
using State = std::string;
using StateSet = std::set<State>;

struct LassoWord {
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;

  LassoWord(std::vector<Symbol> p, std::vector<Symbol> c) : prefix(std::move(p)), cycle(std::move(c)) {
    if (cycle.empty()) fail(ErrorCode::invalid_word, "lasso cycle must be nonempty");
  }

  Symbol at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
  }

  friend bool operator==(const LassoWord&, const LassoWord&) = default;
};

struct Buchi {
  StateSet accepting;
  friend bool operator==(const Buchi&, const Buchi&) = default;
};

struct Muller {
  std::set<StateSet> family;
  friend bool operator==(const Muller&, const Muller&) = default;
};

using Acceptance = std::variant<Buchi, Muller>;

class AutomatonSpec {
 public:
  AutomatonSpec(std::vector<State> states, std::vector<Symbol> alphabet,
                std::map<std::pair<State, Symbol>, State> transition, State initial, Acceptance acceptance)
      : states_(std::move(states)),
        alphabet_(std::move(alphabet)),
        transition_(std::move(transition)),
        initial_(std::move(initial)),
        acceptance_(std::move(acceptance)) {
    if (states_.empty()) fail(ErrorCode::invalid_parameter, "automaton needs at least one state");
    if (alphabet_.empty()) fail(ErrorCode::invalid_parameter, "automaton needs a nonempty alphabet");
    StateSet known(states_.begin(), states_.end());
    if (known.size() != states_.size()) fail(ErrorCode::invalid_parameter, "duplicate state name");
    std::set<Symbol> letters(alphabet_.begin(), alphabet_.end());
    if (letters.size() != alphabet_.size()) fail(ErrorCode::invalid_parameter, "duplicate alphabet symbol");
    if (!known.count(initial_)) fail(ErrorCode::invalid_parameter, "initial state '" + initial_ + "' not declared");
    for (const auto& [key, target] : transition_) {
      if (!known.count(key.first) || !letters.count(key.second) || !known.count(target))
        fail(ErrorCode::invalid_parameter,
             "transition " + key.first + " " + key.second + " -> " + target + " uses an undeclared name");
    }
    for (const auto& s : states_)
      for (const auto& a : alphabet_)
        if (!transition_.count({s, a}))
          fail(ErrorCode::invalid_parameter, "transition missing for (" + s + ", " + a + ")");
    auto check = [&](const StateSet& set) {
      for (const auto& s : set)
        if (!known.count(s)) fail(ErrorCode::invalid_parameter, "acceptance names unknown state '" + s + "'");
    };
    if (const auto* b = std::get_if<Buchi>(&acceptance_))
      check(b->accepting);
    else
      for (const auto& set : std::get<Muller>(acceptance_).family) check(set);
  }

  const std::vector<State>& states() const { return states_; }
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  const std::map<std::pair<State, Symbol>, State>& transition() const { return transition_; }
  const State& initial() const { return initial_; }
  const Acceptance& acceptance() const { return acceptance_; }

  bool has_symbol(const Symbol& a) const { return std::find(alphabet_.begin(), alphabet_.end(), a) != alphabet_.end(); }

  const State& step(const State& q, const Symbol& a) const {
    auto it = transition_.find({q, a});
    if (it == transition_.end()) fail(ErrorCode::invalid_word, "symbol '" + a + "' not in the alphabet");
    return it->second;
  }

  std::size_t index_of(const State& q) const {
    return static_cast<std::size_t>(std::find(states_.begin(), states_.end(), q) - states_.begin());
  }

  bool accepting(const StateSet& inf) const {
    if (const auto* b = std::get_if<Buchi>(&acceptance_))
      return std::any_of(inf.begin(), inf.end(), [&](const State& q) { return b->accepting.count(q) > 0; });
    return std::get<Muller>(acceptance_).family.count(inf) > 0;
  }

  friend bool operator==(const AutomatonSpec&, const AutomatonSpec&) = default;

 private:
  std::vector<State> states_;
  std::vector<Symbol> alphabet_;
  std::map<std::pair<State, Symbol>, State> transition_;
  State initial_;
  Acceptance acceptance_;
};

/// The run sigma(w) as a lasso of states. prefix starts with the initial
/// state.
struct RunLasso {
  std::vector<State> prefix;
  std::vector<State> cycle;

  friend bool operator==(const RunLasso&, const RunLasso&) = default;
};

inline void require_word(const AutomatonSpec& aut, const LassoWord& w) {
  for (const auto* part : {&w.prefix, &w.cycle})
    for (const auto& a : *part)
      if (!aut.has_symbol(a)) fail(ErrorCode::invalid_word, "symbol '" + a + "' not in the alphabet");
}

/// Simulates until a (state, cycle position) pair repeats.
inline RunLasso run(const AutomatonSpec& aut, const LassoWord& w) {
  require_word(aut, w);
  std::vector<State> sigma{aut.initial()};
  for (const auto& a : w.prefix) sigma.push_back(aut.step(sigma.back(), a));
  std::map<std::pair<State, std::size_t>, std::size_t> seen;
  std::size_t pos = 0;
  for (;;) {
    std::size_t i = sigma.size() - 1;
    auto [it, fresh] = seen.emplace(std::make_pair(sigma.back(), pos), i);
    if (!fresh) {
      std::size_t j = it->second;
      RunLasso r;
      r.prefix.assign(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(j));
      r.cycle.assign(sigma.begin() + static_cast<std::ptrdiff_t>(j), sigma.begin() + static_cast<std::ptrdiff_t>(i));
      return r;
    }
    sigma.push_back(aut.step(sigma.back(), w.cycle[pos]));
    pos = (pos + 1) % w.cycle.size();
  }
}

inline StateSet inf_states(const RunLasso& r) { return StateSet(r.cycle.begin(), r.cycle.end()); }

inline bool accepts(const AutomatonSpec& aut, const LassoWord& w) { return aut.accepting(inf_states(run(aut, w))); }

/// The state sequence over state indices: prefix as transient, one exact
/// strand per cycle position.
inline seqlim::SequenceSpec state_sequence(const AutomatonSpec& aut, const RunLasso& r) {
  std::vector<Scalar> transient;
  for (const auto& q : r.prefix) transient.emplace_back(static_cast<unsigned long>(aut.index_of(q)));
  std::vector<seqlim::Strand> strands;
  for (const auto& q : r.cycle)
    strands.push_back({XScalar(Scalar(static_cast<unsigned long>(aut.index_of(q)))), seqlim::ApproachMode::exact});
  return seqlim::SequenceSpec(std::move(transient), std::move(strands));
}

/// States that are weak 0-limits of the run. Distinct indices are at
/// distance >= 1, so at r = 0 this agrees with the discrete metric.
inline StateSet weak_limit_states(const AutomatonSpec& aut, const RunLasso& r) {
  auto seq = state_sequence(aut, r);
  StateSet out;
  for (const auto& q : aut.states())
    if (seqlim::is_weak_r_limit(Scalar(static_cast<unsigned long>(aut.index_of(q))), Scalar(0), seq)) out.insert(q);
  return out;
}

inline bool accepts_by_weak_limits(const AutomatonSpec& aut, const LassoWord& w) {
  return aut.accepting(weak_limit_states(aut, run(aut, w)));
}

}  // namespace fuzzylim::omegalim
