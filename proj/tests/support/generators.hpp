#pragma once

// Hand-rolled random term generators shared by the test binaries. All of
// them are deterministic in the seed.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "procnet/process.hpp"

namespace procnet::testing {

class TermGen {
 public:
  explicit TermGen(std::uint64_t seed, std::vector<std::string> channels = {"a", "b", "c"},
                   std::vector<std::string> values = {"m0", "m1"})
      : rng_(seed), channels_(std::move(channels)), values_(std::move(values)) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Upper bound on distributor fan-out (default 3).
  void set_max_targets(std::size_t n) { max_targets_ = n; }

  /// Comm-language term (senders, distributors, parallel, restriction).
  Process comm(int depth) { return comm_at(depth, 0); }

  /// Pi-mode term (senders, receivers, repeating receivers, parallel,
  /// restriction). Receivers bind values used by their continuations.
  Process pi(int depth) { return pi_at(depth, 0, 0); }

  /// Any closed term, mixing every constructor; for syntax and normalizer
  /// properties that do not run the semantics.
  Process any(int depth) { return any_at(depth, 0, 0); }

  /// Comm-language pair: unrelated terms, a shared part with different
  /// neighbours, a unit law instance or an idempotency instance, so that both
  /// proven and distinguished verdicts occur.
  std::pair<Process, Process> comm_pair(int depth) {
    const Process p = comm(depth);
    switch (below(4)) {
      case 0:
        return {p, comm(depth)};
      case 1: {
        Process x = link();
        return {parallel(p, x), parallel(link(), p)};
      }
      case 2:
        return {parallel(p, stop()), p};
      default:
        return {parallel(p, p), p};
    }
  }

  /// A standalone distributor, optionally wrapped with a sender.
  Process link() {
    Process d = distributor(0);
    return coin(0.3) ? parallel(sender(0, 0), d) : d;
  }

 private:
  Channel channel(std::uint32_t bound) {
    const std::size_t k = below(channels_.size() + bound);
    if (k < channels_.size()) return Channel::named(channels_[k]);
    return Channel::bound(static_cast<std::uint32_t>(k - channels_.size()));
  }

  Value value(std::uint32_t vars) {
    const std::size_t k = below(values_.size() + vars);
    if (k < values_.size()) return Value::atom(values_[k]);
    return Value::var(static_cast<std::uint32_t>(k - values_.size()));
  }

  Process sender(std::uint32_t bound, std::uint32_t vars) { return send(channel(bound), value(vars)); }

  Process distributor(std::uint32_t bound) {
    std::vector<Channel> targets;
    const std::size_t n = below(max_targets_ + 1);
    for (std::size_t i = 0; i < n; ++i) targets.push_back(channel(bound));
    return distribute(channel(bound), std::move(targets));
  }

  Process comm_at(int depth, std::uint32_t bound) {
    const std::size_t pick = depth <= 0 ? below(3) : below(6);
    switch (pick) {
      case 0:
        return stop();
      case 1:
        return sender(bound, 0);
      case 2:
        return distributor(bound);
      case 3:
      case 4:
        return parallel(comm_at(depth - 1, bound), comm_at(depth - 1, bound));
      default:
        return restrict(comm_at(depth - 1, bound + 1));
    }
  }

  Process pi_at(int depth, std::uint32_t bound, std::uint32_t vars) {
    const std::size_t pick = depth <= 0 ? below(2) : below(7);
    switch (pick) {
      case 0:
        return stop();
      case 1:
        return sender(bound, vars);
      case 2:
        return receive(channel(bound), pi_at(depth - 1, bound, vars + 1));
      case 3:
        return repeat_receive(channel(bound), pi_at(depth - 1, bound, vars + 1));
      case 4:
      case 5:
        return parallel(pi_at(depth - 1, bound, vars), pi_at(depth - 1, bound, vars));
      default:
        return restrict(pi_at(depth - 1, bound + 1, vars));
    }
  }

  Process any_at(int depth, std::uint32_t bound, std::uint32_t vars) {
    const std::size_t pick = depth <= 0 ? below(3) : below(8);
    switch (pick) {
      case 0:
        return stop();
      case 1:
        return sender(bound, vars);
      case 2:
        return distributor(bound);
      case 3:
        return receive(channel(bound), any_at(depth - 1, bound, vars + 1));
      case 4:
        return repeat_receive(channel(bound), any_at(depth - 1, bound, vars + 1));
      case 5:
      case 6:
        return parallel(any_at(depth - 1, bound, vars), any_at(depth - 1, bound, vars));
      default:
        return restrict(any_at(depth - 1, bound + 1, vars));
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> channels_;
  std::vector<std::string> values_;
  std::size_t max_targets_ = 3;
};

}  // namespace procnet::testing
