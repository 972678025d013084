#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "procnet/process.hpp"
#include "procnet/semantics.hpp"

namespace procnet {

enum class Construct { distribute, bridge, bibridge, loser, duplicator, duploser };

std::string to_string(Construct kind);

/// Derived comm-language forms, built from distributors and parallel
/// composition only:
///   distribute(a, b1..bn) = a => [b1..bn]     bridge(a, b)   = a => [b]
///   bibridge(a, b) = a => [b] | b => [a]      loser(a)       = a => []
///   duplicator(a)  = a => [a, a]              duploser(a)    = a => [] | a => [a, a]
/// Throws ArityError on the wrong number of channels.
Process build(Construct kind, std::span<const std::string> channels);

struct Link {
  Construct kind;
  std::vector<std::string> channels;
};

/// A network: links composed in parallel under restrictions for the local
/// channels (locals[0] outermost).
struct NetworkSpec {
  std::vector<std::string> free_channels;
  std::vector<std::string> locals;
  std::vector<Link> links;

  /// Closed process for the network. Throws ScopeError when a link uses an
  /// undeclared channel or a name is declared twice.
  Process elaborate() const;
};

/// new t. (s -> t | t -> r1 | t -> r2 | t -> r3). Throws DistinctnessError
/// unless the four channels are pairwise distinct.
Process anycast3(const std::string& s, const std::string& r1, const std::string& r2,
                 const std::string& r3);

/// new t. (s -> t | duplose t | t -> r1 | t -> r2 | t -> r3). Throws
/// DistinctnessError unless the four channels are pairwise distinct.
Process broadcast3_unreliable(const std::string& s, const std::string& r1, const std::string& r2,
                              const std::string& r3);

struct Injection {
  std::string channel;
  std::string value;
};

/// Parses `CH=VAL`. Throws SyntaxError.
Injection parse_injection(const std::string& text);

/// `s1!v1 | ... | sn!vn | p`. Throws ScopeError for values outside the
/// universe.
Process inject(const Process& p, std::span<const Injection> inputs, const Universe& universe);

/// FNV-1a 64-bit hash of the pretty-printed normal form, as 16 hex digits.
std::string digest(const Process& p);

struct TraceEvent {
  std::size_t step = 0;
  Action action;
  std::string digest;
};

/// A delivery is an output on an observed channel fired by the environment.
using Delivery = std::pair<std::string, std::string>;

/// Conjunction of conditions on a delivery multiset, written
/// `deliveries=N`, `deliveries>=N`, `deliveries<=N`, `distinct>=N` (number of
/// distinct receiving channels) and `delivered=CH`, separated by commas.
struct Query {
  enum class Kind { count_eq, count_ge, count_le, distinct_ge, delivered };
  struct Condition {
    Kind kind;
    std::size_t number = 0;
    std::string channel;
  };

  std::string text;
  std::vector<Condition> conditions;

  /// Throws SyntaxError.
  static Query parse(const std::string& text);
  bool holds(std::span<const Delivery> deliveries) const;
};

struct ExploreOptions {
  std::vector<Injection> inputs;
  std::size_t max_states = 2000;
  std::size_t max_depth = 20;
  /// Channels whose outputs are fired and counted; defaults to the free
  /// channels of the network that are not input channels.
  std::optional<std::set<std::string>> observed;
  /// Rule set; inferred from the term when absent.
  std::optional<Mode> mode;
  std::vector<Query> queries;
};

/// Deliveries at the end of maximal paths (no step enabled), with the
/// shortest path reaching such an end.
struct Outcome {
  std::vector<Delivery> deliveries;
  /// Distinct end nodes with these deliveries.
  std::size_t terminals = 0;
  std::vector<TraceEvent> witness;
};

struct QueryResult {
  std::string query;
  /// Some explored maximal path satisfies the query.
  bool some = false;
  /// Every explored maximal path satisfies it (meaningful when the report is
  /// not truncated).
  bool all = false;
  std::vector<TraceEvent> witness;
};

struct ExploreReport {
  /// Distinct (normal form, deliveries) nodes visited.
  std::size_t nodes = 0;
  /// Distinct normal forms visited.
  std::size_t states = 0;
  std::set<std::string> observed;
  /// Set when max-states or max-depth cut the search short; results are then
  /// partial.
  bool truncated = false;
  /// Set when the explored graph contains a cycle (an infinite internal run).
  bool divergent = false;
  std::vector<Outcome> outcomes;
  /// Every action label taken during exploration.
  std::set<std::string> actions;
  std::vector<QueryResult> queries;
};

/// Breadth-first exploration of the injected network. Steps are internal
/// transfers and outputs on observed channels; outputs are consumed by the
/// environment and recorded as deliveries. Throws ScopeError for open terms.
ExploreReport explore(const Process& p, const Universe& universe, const ExploreOptions& options);

/// A single run choosing uniformly among internal transfers with distinct
/// targets, seeded and reproducible; stops early when none is enabled.
std::vector<TraceEvent> simulate(const Process& p, const Universe& universe,
                                 std::span<const Injection> inputs, std::size_t steps,
                                 std::uint64_t seed, std::optional<Mode> mode = std::nullopt);

/// One event per line: `step<TAB>action<TAB>digest`.
void write_events(std::ostream& out, std::span<const TraceEvent> events);
void write_explore_report(std::ostream& out, const ExploreReport& report, const Universe& universe);

}  // namespace procnet
