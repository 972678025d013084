#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "procnet/process.hpp"

namespace procnet {

/// Which rule set generates transitions.
///  - pi: senders, receivers and repeating receivers; distributors must be
///    unfolded first.
///  - extended: senders and distributors; receivers are rejected.
enum class Mode { pi, extended };

std::string to_string(Mode mode);

/// Transition label. Channels of visible actions are always free names.
struct Action {
  enum class Kind : std::uint8_t { send, receive, tau };

  Kind kind = Kind::tau;
  std::string channel;
  std::string value;

  static Action sending(std::string channel, std::string value) {
    return {Kind::send, std::move(channel), std::move(value)};
  }
  static Action receiving(std::string channel, std::string value) {
    return {Kind::receive, std::move(channel), std::move(value)};
  }
  static Action tau() { return {}; }

  bool is_tau() const noexcept { return kind == Kind::tau; }
  bool mentions(const std::string& name) const { return !is_tau() && channel == name; }

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

/// `a!v`, `a?v` or `tau`.
std::string to_string(const Action& action);

struct Transition {
  Process source;
  Action action;
  Process target;
};

/// τ-reachable processes in normalized form, in breadth-first order.
/// `truncated` is set when the frontier at the bound still had unseen
/// successors.
struct TauClosure {
  std::vector<Process> states;
  bool truncated = false;
};

struct WeakTransitions {
  std::vector<Transition> transitions;
  bool truncated = false;
};

/// Labeled transition system over a fixed universe and rule set.
///
/// `transitions` follows the introduction rules literally: targets are not
/// normalized, so every listed transition has a derivation. Receivers,
/// repeating receivers and distributors are instantiated at every universe
/// value. Restrictions are opened with a fresh channel, transitions whose
/// action mentions it are discarded, and targets are re-abstracted.
class Lts {
 public:
  Lts(Mode mode, Universe universe) : mode_(mode), universe_(std::move(universe)) {}

  Mode mode() const noexcept { return mode_; }
  const Universe& universe() const noexcept { return universe_; }

  /// Throws ModeViolation when `p` uses a construct outside the rule set.
  void check_mode(const Process& p) const;

  /// Deduplicated, sorted by action and then target. Throws ModeViolation.
  std::vector<Transition> transitions(const Process& p) const;

  /// Processes reachable with at most `bound` τ steps (p included). Throws
  /// BoundExceeded when `require_exact` and the closure was cut off.
  TauClosure tau_closure(const Process& p, std::size_t bound,
                         bool require_exact = false) const;

  /// Weak steps with every τ* segment of length at most `bound`. Visible
  /// actions are τ*·α·τ*; τ steps are τ* and include p ⇒ p. Targets are
  /// normalized.
  WeakTransitions weak_transitions(const Process& p, std::size_t bound,
                                   bool require_exact = false) const;

 private:
  void enumerate(const Process& p, unsigned fresh_depth, std::vector<Transition>& out) const;

  Mode mode_;
  Universe universe_;
};

/// Replaces each distributor `a => [b1..bn]` by the repeating receiver
/// `a?*x. (b1!x | ... | bn!x | 0)`; other constructs are unchanged.
Process unfold_comm(const Process& p);

/// Picks the rule set a term needs: pi when it contains receivers, extended
/// otherwise. Throws ModeViolation when it mixes receivers and distributors.
Mode infer_mode(const Process& p);

}  // namespace procnet
