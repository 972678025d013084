#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "procnet/process.hpp"
#include "procnet/semantics.hpp"

namespace procnet {

enum class RewriteSide { left, right, both };

/// "Up to" components applied to each successor pair before it is looked up
/// in (or added to) the candidate relation.
///  - congruence_rewrite: normalize targets with the structural-congruence
///    rewrite system, on the side(s) selected by `side`.
///  - context_cancel: remove common parallel components and a common
///    restriction prefix from both targets.
/// Both off is the plain bisimulation game.
struct UpToConfig {
  bool congruence_rewrite = true;
  bool context_cancel = true;
  RewriteSide side = RewriteSide::both;

  static UpToConfig full() { return {}; }
  static UpToConfig plain() { return {false, false, RewriteSide::both}; }
};

enum class Verdict { proven, distinguished, inconclusive };
enum class Side { left, right };

std::string to_string(Verdict verdict);
std::string to_string(Side side);

struct ProcessPair {
  Process left;
  Process right;
};

/// One round of a distinguishing play: the challenger moves on `side`, the
/// defender answers with `defender` (absent in the final round, where it has
/// no matching move).
struct TraceStep {
  Side side;
  Action action;
  Process challenger;
  std::optional<Process> defender;
};

struct CheckResult {
  Verdict verdict = Verdict::inconclusive;
  /// Candidate relation (proven only); pairs are reduced by the up-to config.
  std::vector<ProcessPair> witness;
  /// Minimal-depth distinguishing play (distinguished only).
  std::vector<TraceStep> trace;
  std::size_t pairs_explored = 0;
  std::optional<std::string> bound_hit;
};

struct CheckOptions {
  UpToConfig upto = UpToConfig::full();
  /// Largest candidate relation before giving up.
  std::size_t max_pairs = 256;
  /// τ* segment bound for weak matching.
  std::size_t tau_bound = 4;
  /// Deepest distinguishing play searched for.
  std::size_t search_depth = 6;
  /// Distinct pair evaluations allowed in the distinguishing search.
  std::size_t search_budget = 20000;
};

/// Strong bisimulation game with up-to reductions. `proven` is returned only
/// when the candidate relation closes; `distinguished` only with a replayable
/// play found on the original terms; anything else is `inconclusive`.
CheckResult check_strong(const Lts& lts, const Process& p, const Process& q,
                         const CheckOptions& options = {});

/// Weak variant: challenger moves are strong transitions, defender answers
/// are weak transitions with τ* segments bounded by `options.tau_bound`.
CheckResult check_weak(const Lts& lts, const Process& p, const Process& q,
                       const CheckOptions& options = {});

/// Removes a common context from two normalized terms.
///
/// Identical terms cancel to (0, 0). Otherwise a common restriction prefix is
/// stripped (binders opened with fresh channels `_k0`, `_k1`, ...) and common
/// parallel components are removed in `term_order` while both sides keep at
/// least one component. Results are normalized.
std::pair<Process, Process> cancel_context(const Process& p, const Process& q);

struct WitnessAudit {
  bool ok = false;
  std::optional<ProcessPair> offending;
  std::string reason;
};

/// Re-checks a witness relation without the game's worklist: the root pair
/// must be (up to the config) in the relation, and every pair must satisfy
/// both simulation conditions with successors landing, after some up-to
/// reduction, back in the relation or on identical terms.
WitnessAudit verify_witness(const Lts& lts, const Process& p, const Process& q,
                            std::span<const ProcessPair> witness,
                            const UpToConfig& upto = UpToConfig::full(), bool weak = false,
                            std::size_t tau_bound = 4);

struct SearchOptions {
  std::size_t depth = 6;
  bool weak = false;
  std::size_t tau_bound = 4;
  /// Key states by normal form; off plays on raw terms.
  bool normalize_states = true;
  std::size_t budget = 200000;
};

struct SearchResult {
  std::optional<std::vector<TraceStep>> trace;
  /// Set when the budget ran out before the depth was exhausted.
  bool exhausted = false;
};

/// Iterative-deepening search for an attacker win within `depth` rounds; the
/// returned play has minimal depth.
SearchResult find_distinguishing_trace(const Lts& lts, const Process& p, const Process& q,
                                       const SearchOptions& options = {});

/// Replays a play against `transitions` / `weak_transitions` starting from
/// the given terms. Returns an error description, or nothing when valid.
std::optional<std::string> replay_trace(const Lts& lts, const Process& p, const Process& q,
                                        std::span<const TraceStep> trace, bool weak = false,
                                        std::size_t tau_bound = 4);

/// Line-oriented serialization: `pair<TAB>left<TAB>right` per witness pair and
/// `step<TAB>side<TAB>action<TAB>challenger<TAB>defender` per trace round
/// (`-` for a missing defender). Headers are `#` comment lines.
void write_witness(std::ostream& out, const CheckResult& result, const Universe& universe);
void write_trace(std::ostream& out, std::span<const TraceStep> trace);

}  // namespace procnet
