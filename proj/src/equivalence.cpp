#include "procnet/equivalence.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "procnet/errors.hpp"
#include "procnet/normalize.hpp"
#include "procnet/syntax.hpp"

namespace procnet {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::proven:
      return "proven";
    case Verdict::distinguished:
      return "distinguished";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Side side) { return side == Side::left ? "left" : "right"; }

namespace {

// Canonical orientation for unordered pairs: by hash, then by term order.
bool precedes(const Process& a, const Process& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash();
  return term_order(a, b) < 0;
}

struct PairKey {
  Process a;
  Process b;

  friend bool operator==(const PairKey& x, const PairKey& y) { return x.a == y.a && x.b == y.b; }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return k.a.hash() * 0x9e3779b97f4a7c15ULL ^ (k.b.hash() + 0x7f4a7c15);
  }
};

PairKey make_key(const Process& l, const Process& r, bool symmetric) {
  if (symmetric && precedes(r, l)) return {r, l};
  return {l, r};
}

bool rewrites(const UpToConfig& c, Side s) {
  if (!c.congruence_rewrite) return false;
  return c.side == RewriteSide::both || (c.side == RewriteSide::left) == (s == Side::left);
}

Process rewrite(const UpToConfig& c, Side s, const Process& p) {
  return rewrites(c, s) ? normalized(p) : p;
}

// Opens the first `count` restriction binders of both terms with fresh free
// channels `_k0`, `_k1`, ... (names not already free in either term).
std::pair<Process, Process> open_common_restrictions(Process l, Process r, std::size_t count) {
  std::set<std::string> used = free_channels(l);
  for (const auto& n : free_channels(r)) used.insert(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::string name;
    do {
      name = "_k" + std::to_string(next++);
    } while (used.contains(name));
    used.insert(name);
    l = instantiate_channel(l.body(), name);
    r = instantiate_channel(r.body(), name);
  }
  return {std::move(l), std::move(r)};
}

struct Counted {
  Process term;
  std::size_t left = 0;
  std::size_t right = 0;
};

// Distinct components with their multiplicity on each side.
std::vector<Counted> tally(const std::vector<Process>& ls, const std::vector<Process>& rs) {
  std::vector<Counted> out;
  auto bump = [&](const Process& p, bool is_left) {
    for (auto& c : out) {
      if (c.term == p) {
        (is_left ? c.left : c.right)++;
        return;
      }
    }
    out.push_back({p, is_left ? 1u : 0u, is_left ? 0u : 1u});
  };
  for (const auto& p : ls) bump(p, true);
  for (const auto& p : rs) bump(p, false);
  return out;
}

Process without(const std::vector<Process>& parts, std::vector<std::pair<Process, std::size_t>> drop) {
  std::vector<Process> kept;
  for (const auto& p : parts) {
    bool dropped = false;
    for (auto& [term, n] : drop) {
      if (n > 0 && term == p) {
        --n;
        dropped = true;
        break;
      }
    }
    if (!dropped) kept.push_back(p);
  }
  return compose(kept);
}

}  // namespace

std::pair<Process, Process> cancel_context(const Process& p, const Process& q) {
  if (p == q) return {stop(), stop()};
  const std::size_t shared = std::min(restriction_prefix(p), restriction_prefix(q));
  auto [l, r] = open_common_restrictions(p, q, shared);
  l = normalized(l);
  r = normalized(r);
  if (l == r) return {stop(), stop()};

  std::vector<Process> ls = parallel_components(l);
  std::vector<Process> rs = parallel_components(r);
  std::sort(ls.begin(), ls.end(), TermLess{});
  std::sort(rs.begin(), rs.end(), TermLess{});
  std::vector<Process> keep_l;
  std::vector<Process> keep_r;
  std::size_t nl = ls.size();
  std::size_t nr = rs.size();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ls.size() && j < rs.size()) {
    const auto c = term_order(ls[i], rs[j]);
    if (c < 0) {
      keep_l.push_back(ls[i++]);
    } else if (c > 0) {
      keep_r.push_back(rs[j++]);
    } else if (nl > 1 && nr > 1) {
      --nl;
      --nr;
      ++i;
      ++j;
    } else {
      keep_l.push_back(ls[i++]);
      keep_r.push_back(rs[j++]);
    }
  }
  keep_l.insert(keep_l.end(), ls.begin() + static_cast<std::ptrdiff_t>(i), ls.end());
  keep_r.insert(keep_r.end(), rs.begin() + static_cast<std::ptrdiff_t>(j), rs.end());
  return {normalized(compose(keep_l)), normalized(compose(keep_r))};
}

namespace {

// Every reduction the up-to config allows for a successor pair, most reduced
// first. The unreduced pair is always included.
std::vector<ProcessPair> reductions(const UpToConfig& c, const Process& l0, const Process& r0) {
  std::vector<ProcessPair> out;
  if (!c.context_cancel) {
    out.push_back({l0, r0});
    return out;
  }
  const std::size_t shared = std::min(restriction_prefix(l0), restriction_prefix(r0));
  std::vector<std::size_t> strips{0};
  if (shared > 0) strips.insert(strips.begin(), shared);

  for (std::size_t strip : strips) {
    Process l = l0;
    Process r = r0;
    if (strip > 0) {
      std::tie(l, r) = open_common_restrictions(l0, r0, strip);
      l = rewrite(c, Side::left, l);
      r = rewrite(c, Side::right, r);
    }
    const std::vector<Process> ls = parallel_components(l);
    const std::vector<Process> rs = parallel_components(r);
    std::vector<Counted> common;
    for (auto& t : tally(ls, rs)) {
      if (t.left > 0 && t.right > 0) common.push_back(t);
    }
    // Multiplicity vectors, odometer style, starting from full cancellation.
    std::size_t combos = 1;
    for (const auto& t : common) {
      combos *= std::min(t.left, t.right) + 1;
      if (combos > 512) break;
    }
    std::vector<std::vector<std::size_t>> choices;
    if (combos <= 512) {
      std::vector<std::size_t> counts(common.size());
      for (std::size_t k = 0; k < common.size(); ++k) counts[k] = std::min(common[k].left, common[k].right);
      while (true) {
        choices.push_back(counts);
        std::size_t k = 0;
        while (k < counts.size() && counts[k] == 0) {
          counts[k] = std::min(common[k].left, common[k].right);
          ++k;
        }
        if (k == counts.size()) break;
        --counts[k];
      }
      std::stable_sort(choices.begin(), choices.end(), [](const auto& a, const auto& b) {
        std::size_t sa = 0, sb = 0;
        for (auto x : a) sa += x;
        for (auto x : b) sb += x;
        return sa > sb;
      });
    } else {
      std::vector<std::size_t> full(common.size());
      for (std::size_t k = 0; k < common.size(); ++k) full[k] = std::min(common[k].left, common[k].right);
      choices.push_back(full);
      choices.push_back(std::vector<std::size_t>(common.size(), 0));
    }
    for (const auto& counts : choices) {
      std::vector<std::pair<Process, std::size_t>> drop;
      for (std::size_t k = 0; k < common.size(); ++k) {
        if (counts[k] > 0) drop.emplace_back(common[k].term, counts[k]);
      }
      out.push_back({without(ls, drop), without(rs, drop)});
    }
  }
  return out;
}

enum class Fallback { probed_cancel, none };

class Game {
 public:
  enum class Outcome { closed, attacker_won, bound_hit };

  Game(const Lts& lts, const CheckOptions& options, bool weak, Fallback fallback)
      : lts_(lts), opt_(options), weak_(weak), fallback_(fallback),
        symmetric_(options.upto.side == RewriteSide::both) {}

  Outcome play(const Process& p, const Process& q) {
    const Process l = rewrite(opt_.upto, Side::left, p);
    const Process r = rewrite(opt_.upto, Side::right, q);
    if (l == r) return Outcome::closed;
    insert(l, r);
    while (!work_.empty()) {
      if (relation_.size() > opt_.max_pairs) {
        reason_ = "max-pairs " + std::to_string(opt_.max_pairs) + " exceeded";
        return Outcome::bound_hit;
      }
      const ProcessPair pair = relation_[work_.front()];
      work_.pop_front();
      for (Side side : {Side::left, Side::right}) {
        const Process& challenger = side == Side::left ? pair.left : pair.right;
        const Process& defender = side == Side::left ? pair.right : pair.left;
        for (const auto& t : strong(challenger)) {
          bool truncated = false;
          std::vector<Process> answers = defenders(defender, t.action, truncated);
          if (answers.empty()) {
            reason_ = to_string(side) + " move " + to_string(t.action) + " unmatched at " +
                      pretty(pair.left) + " ~ " + pretty(pair.right) +
                      (truncated ? " (tau bound reached)" : "");
            return Outcome::attacker_won;
          }
          settle(side, t.target, answers);
        }
      }
    }
    return Outcome::closed;
  }

  const std::vector<ProcessPair>& relation() const { return relation_; }
  const std::string& reason() const { return reason_; }

 private:
  const std::vector<Transition>& strong(const Process& p) {
    auto it = strong_.find(p);
    if (it == strong_.end()) it = strong_.emplace(p, lts_.transitions(p)).first;
    return it->second;
  }

  std::vector<Process> defenders(const Process& q, const Action& a, bool& truncated) {
    std::vector<Process> out;
    if (!weak_) {
      for (const auto& t : strong(q)) {
        if (t.action == a) out.push_back(t.target);
      }
      return out;
    }
    auto it = weak_cache_.find(q);
    if (it == weak_cache_.end()) it = weak_cache_.emplace(q, lts_.weak_transitions(q, opt_.tau_bound)).first;
    truncated = it->second.truncated;
    for (const auto& t : it->second.transitions) {
      if (t.action == a) out.push_back(t.target);
    }
    return out;
  }

  bool lands(const ProcessPair& pr) const {
    return pr.left == pr.right || index_.contains(make_key(pr.left, pr.right, symmetric_));
  }

  void settle(Side side, const Process& moved, const std::vector<Process>& answers) {
    const UpToConfig& c = opt_.upto;
    std::vector<std::vector<ProcessPair>> options;
    for (const auto& answer : answers) {
      const Process& a = side == Side::left ? moved : answer;
      const Process& b = side == Side::left ? answer : moved;
      const Process l = rewrite(c, Side::left, a);
      const Process r = rewrite(c, Side::right, b);
      std::vector<ProcessPair> cands = reductions(c, l, r);
      for (const auto& cand : cands) {
        if (lands(cand)) return;
      }
      if (fallback_ == Fallback::none) {
        insert(l, r);
        return;
      }
      if (c.context_cancel && c.congruence_rewrite && c.side == RewriteSide::both) {
        auto [cl, cr] = cancel_context(l, r);
        cands.insert(cands.begin(), {cl, cr});
      }
      options.push_back(std::move(cands));
    }
    // Nothing lands: add a reduced pair that a shallow search cannot already
    // tell apart. Cancelling the wrong copy of a repeated component, or
    // picking a poor weak answer, can turn a bisimilar pair into a
    // non-bisimilar one. Answers closest to the challenger's target go first,
    // and within an answer the most reduced candidates go first.
    std::vector<std::size_t> order(options.size());
    std::vector<std::size_t> distance(options.size());
    for (std::size_t i = 0; i < options.size(); ++i) {
      order[i] = i;
      const ProcessPair& raw = options[i].back();
      distance[i] = component_distance(raw.left, raw.right);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return distance[x] < distance[y]; });
    // Strongly bisimilar pairs are weakly bisimilar, so the weak game first
    // tries candidates that survive the strong probe; weak probes skip
    // answer sets cut off by the tau bound and reject less.
    std::vector<bool> tiers{false};
    if (weak_) tiers.push_back(true);
    for (bool weak_probe : tiers) {
      std::size_t probes = 0;
      for (std::size_t i : order) {
        for (const auto& cand : options[i]) {
          if (++probes > 64) break;
          if (!probe_separates(cand, weak_probe)) {
            insert(cand.left, cand.right);
            return;
          }
        }
      }
    }
    const ProcessPair& raw = options[order.front()].back();
    insert(raw.left, raw.right);
  }

  // Size of the symmetric difference of the two component multisets.
  static std::size_t component_distance(const Process& l, const Process& r) {
    std::vector<Process> ls = parallel_components(l);
    std::vector<Process> rs = parallel_components(r);
    std::sort(ls.begin(), ls.end(), TermLess{});
    std::sort(rs.begin(), rs.end(), TermLess{});
    std::size_t i = 0, j = 0, d = 0;
    while (i < ls.size() && j < rs.size()) {
      const auto c = term_order(ls[i], rs[j]);
      if (c == 0) {
        ++i;
        ++j;
      } else {
        ++d;
        (c < 0 ? i : j)++;
      }
    }
    return d + (ls.size() - i) + (rs.size() - j);
  }

  bool probe_separates(const ProcessPair& pr, bool weak_probe) {
    SearchOptions so;
    so.depth = 2;
    so.weak = weak_probe;
    so.tau_bound = opt_.tau_bound;
    so.budget = 2000;
    return find_distinguishing_trace(lts_, pr.left, pr.right, so).trace.has_value();
  }

  void insert(const Process& l, const Process& r) {
    index_.insert(make_key(l, r, symmetric_));
    relation_.push_back({l, r});
    work_.push_back(relation_.size() - 1);
  }

  const Lts& lts_;
  const CheckOptions& opt_;
  bool weak_;
  Fallback fallback_;
  bool symmetric_;
  std::vector<ProcessPair> relation_;
  std::unordered_set<PairKey, PairKeyHash> index_;
  std::deque<std::size_t> work_;
  std::unordered_map<Process, std::vector<Transition>, ProcessHash> strong_;
  std::unordered_map<Process, WeakTransitions, ProcessHash> weak_cache_;
  std::string reason_;
};

struct BudgetExhausted {};

class Distinguisher {
 public:
  Distinguisher(const Lts& lts, const SearchOptions& options) : lts_(lts), opt_(options) {}

  Process state(const Process& p) const { return opt_.normalize_states ? normalized(p) : p; }

  bool wins(const Process& l, const Process& r, std::size_t k) {
    if (k == 0 || l == r) return false;
    Memo& m = memo_[make_key(l, r, true)];
    if (m.win <= k) return true;
    if (m.safe >= k) return false;
    if (++evaluations_ > opt_.budget) throw BudgetExhausted{};
    for (Side side : {Side::left, Side::right}) {
      const Process& challenger = side == Side::left ? l : r;
      const Process& defender = side == Side::left ? r : l;
      for (const auto& t : moves(challenger)) {
        bool truncated = false;
        const std::vector<Process> answers = defenders(defender, t.action, truncated);
        if (answers.empty()) {
          if (truncated) continue;
          Memo& again = memo_[make_key(l, r, true)];
          again.win = 1;
          return true;
        }
        if (k == 1 || truncated) continue;
        const Process moved = state(t.target);
        bool all_lose = true;
        for (const auto& a : answers) {
          const bool w = side == Side::left ? wins(moved, a, k - 1) : wins(a, moved, k - 1);
          if (!w) {
            all_lose = false;
            break;
          }
        }
        if (all_lose) {
          Memo& again = memo_[make_key(l, r, true)];
          again.win = std::min(again.win, k);
          return true;
        }
      }
    }
    Memo& again = memo_[make_key(l, r, true)];
    again.safe = std::max(again.safe, k);
    return false;
  }

  void extract(Process l, Process r, std::size_t k, std::vector<TraceStep>& out) {
    while (k > 0) {
      bool advanced = false;
      for (Side side : {Side::left, Side::right}) {
        const Process& challenger = side == Side::left ? l : r;
        const Process& defender = side == Side::left ? r : l;
        for (const auto& t : moves(challenger)) {
          bool truncated = false;
          const std::vector<Process> answers = defenders(defender, t.action, truncated);
          const Process moved = state(t.target);
          if (answers.empty()) {
            if (truncated) continue;
            out.push_back({side, t.action, moved, std::nullopt});
            return;
          }
          if (k == 1 || truncated) continue;
          bool all_lose = true;
          for (const auto& a : answers) {
            const bool w = side == Side::left ? wins(moved, a, k - 1) : wins(a, moved, k - 1);
            if (!w) {
              all_lose = false;
              break;
            }
          }
          if (!all_lose) continue;
          out.push_back({side, t.action, moved, answers.front()});
          if (side == Side::left) {
            r = answers.front();
            l = moved;
          } else {
            l = answers.front();
            r = moved;
          }
          --k;
          advanced = true;
          break;
        }
        if (advanced) break;
      }
      if (!advanced) return;
    }
  }

 private:
  struct Memo {
    std::size_t safe = 0;
    std::size_t win = SIZE_MAX;
  };

  const std::vector<Transition>& moves(const Process& p) {
    auto it = moves_.find(p);
    if (it == moves_.end()) it = moves_.emplace(p, lts_.transitions(p)).first;
    return it->second;
  }

  std::vector<Process> defenders(const Process& q, const Action& a, bool& truncated) {
    std::vector<Process> out;
    if (!opt_.weak) {
      for (const auto& t : moves(q)) {
        if (t.action == a) out.push_back(state(t.target));
      }
      return out;
    }
    auto it = weak_.find(q);
    if (it == weak_.end()) {
      it = weak_.emplace(q, lts_.weak_transitions(q, opt_.tau_bound)).first;
      // Weak steps dominate the cost, so they are charged to the budget too.
      evaluations_ += it->second.transitions.size();
      if (evaluations_ > opt_.budget) throw BudgetExhausted{};
    }
    truncated = it->second.truncated;
    for (const auto& t : it->second.transitions) {
      if (t.action == a) out.push_back(t.target);
    }
    return out;
  }

  const Lts& lts_;
  const SearchOptions& opt_;
  std::size_t evaluations_ = 0;
  std::unordered_map<PairKey, Memo, PairKeyHash> memo_;
  std::unordered_map<Process, std::vector<Transition>, ProcessHash> moves_;
  std::unordered_map<Process, WeakTransitions, ProcessHash> weak_;
};

CheckResult run_check(const Lts& lts, const Process& p0, const Process& q0,
                      const CheckOptions& options, bool weak) {
  lts.check_mode(p0);
  lts.check_mode(q0);
  if (!is_closed(p0) || !is_closed(q0)) throw ScopeError("equivalence checks require closed processes");

  // Orient the pair canonically so that (p, q) and (q, p) play the same game.
  const bool swapped = options.upto.side == RewriteSide::both && precedes(q0, p0);
  const Process& p = swapped ? q0 : p0;
  const Process& q = swapped ? p0 : q0;

  CheckResult result;
  std::vector<std::string> reasons;
  auto finish_proven = [&](const Game& g) {
    result.verdict = Verdict::proven;
    result.witness = g.relation();
    if (swapped) {
      for (auto& pr : result.witness) std::swap(pr.left, pr.right);
    }
    return result;
  };

  std::vector<Fallback> policies{Fallback::none};
  if (options.upto.context_cancel) policies.insert(policies.begin(), Fallback::probed_cancel);

  {
    Game g(lts, options, weak, policies.front());
    const auto outcome = g.play(p, q);
    result.pairs_explored += g.relation().size();
    if (outcome == Game::Outcome::closed) return finish_proven(g);
    reasons.push_back(g.reason());
  }

  SearchOptions so;
  so.depth = options.search_depth;
  so.weak = weak;
  so.tau_bound = options.tau_bound;
  so.budget = options.search_budget;
  // Searched in the caller's orientation so the play reads left-first.
  SearchResult sr = find_distinguishing_trace(lts, p0, q0, so);
  if (sr.trace) {
    result.verdict = Verdict::distinguished;
    result.trace = std::move(*sr.trace);
    return result;
  }
  reasons.push_back(sr.exhausted ? "distinguishing search budget exhausted"
                                 : "no distinguishing play within depth " + std::to_string(so.depth));

  for (std::size_t i = 1; i < policies.size(); ++i) {
    Game g(lts, options, weak, policies[i]);
    const auto outcome = g.play(p, q);
    result.pairs_explored += g.relation().size();
    if (outcome == Game::Outcome::closed) return finish_proven(g);
    reasons.push_back(g.reason());
  }

  result.verdict = Verdict::inconclusive;
  std::string why;
  for (const auto& r : reasons) {
    if (!why.empty()) why += "; ";
    why += r;
  }
  result.bound_hit = why;
  return result;
}

}  // namespace

CheckResult check_strong(const Lts& lts, const Process& p, const Process& q, const CheckOptions& options) {
  return run_check(lts, p, q, options, false);
}

CheckResult check_weak(const Lts& lts, const Process& p, const Process& q, const CheckOptions& options) {
  return run_check(lts, p, q, options, true);
}

SearchResult find_distinguishing_trace(const Lts& lts, const Process& p, const Process& q,
                                       const SearchOptions& options) {
  SearchResult result;
  Distinguisher d(lts, options);
  const Process l = d.state(p);
  const Process r = d.state(q);
  try {
    for (std::size_t k = 1; k <= options.depth; ++k) {
      if (d.wins(l, r, k)) {
        std::vector<TraceStep> trace;
        d.extract(l, r, k, trace);
        result.trace = std::move(trace);
        return result;
      }
    }
  } catch (const BudgetExhausted&) {
    result.exhausted = true;
  }
  return result;
}

namespace {

// Defender options for replay and audit: identically labeled strong
// transitions, or weak transitions with the same label.
std::vector<Process> answers_for(const Lts& lts, const Process& q, const Action& a, bool weak,
                                 std::size_t tau_bound, bool& truncated) {
  std::vector<Process> out;
  truncated = false;
  if (!weak) {
    for (const auto& t : lts.transitions(q)) {
      if (t.action == a) out.push_back(t.target);
    }
    return out;
  }
  WeakTransitions w = lts.weak_transitions(q, tau_bound);
  truncated = w.truncated;
  for (const auto& t : w.transitions) {
    if (t.action == a) out.push_back(t.target);
  }
  return out;
}

}  // namespace

std::optional<std::string> replay_trace(const Lts& lts, const Process& p, const Process& q,
                                        std::span<const TraceStep> trace, bool weak,
                                        std::size_t tau_bound) {
  if (trace.empty()) return "empty trace";
  Process l = p;
  Process r = q;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceStep& step = trace[i];
    const std::string where = "round " + std::to_string(i + 1) + ": ";
    Process& challenger = step.side == Side::left ? l : r;
    Process& defender = step.side == Side::left ? r : l;
    const Process wanted = normalized(step.challenger);
    std::optional<Process> moved;
    for (const auto& t : lts.transitions(challenger)) {
      if (t.action == step.action && normalized(t.target) == wanted) {
        moved = t.target;
        break;
      }
    }
    if (!moved) return where + "challenger has no " + to_string(step.action) + " move to the recorded state";
    bool truncated = false;
    const std::vector<Process> answers = answers_for(lts, defender, step.action, weak, tau_bound, truncated);
    const bool last = i + 1 == trace.size();
    if (last) {
      if (step.defender) return where + "final round must leave the defender without an answer";
      if (!answers.empty()) return where + "defender can still answer " + to_string(step.action);
      if (truncated) return where + "defender options were cut off by the tau bound";
      return std::nullopt;
    }
    if (!step.defender) return where + "defender answer missing before the final round";
    const Process answer = normalized(*step.defender);
    std::optional<Process> matched;
    for (const auto& a : answers) {
      if (normalized(a) == answer) {
        matched = a;
        break;
      }
    }
    if (!matched) return where + "recorded defender answer is not a matching transition";
    challenger = *moved;
    defender = *matched;
  }
  return std::nullopt;
}

namespace {

// Independent landing test for the audit: enumerates cancellations as subsets
// of positions in the left component list.
class Auditor {
 public:
  Auditor(const UpToConfig& c, std::span<const ProcessPair> witness)
      : c_(c), symmetric_(c.side == RewriteSide::both) {
    for (const auto& pr : witness) index_.insert(make_key(pr.left, pr.right, symmetric_));
  }

  bool member(const Process& l, const Process& r) const {
    return l == r || index_.contains(make_key(l, r, symmetric_));
  }

  bool lands(const Process& a, const Process& b) const {
    const Process l = rewrite(c_, Side::left, a);
    const Process r = rewrite(c_, Side::right, b);
    if (member(l, r)) return true;
    if (!c_.context_cancel) return false;
    if (subsets_land(l, r)) return true;
    const std::size_t shared = std::min(restriction_prefix(l), restriction_prefix(r));
    if (shared == 0) return false;
    auto [ol, orr] = open_common_restrictions(l, r, shared);
    return subsets_land(rewrite(c_, Side::left, ol), rewrite(c_, Side::right, orr));
  }

 private:
  bool subsets_land(const Process& l, const Process& r) const {
    const std::vector<Process> ls = parallel_components(l);
    const std::vector<Process> rs = parallel_components(r);
    if (ls.size() > 14) return member(l, r);
    const std::size_t limit = std::size_t{1} << ls.size();
    for (std::size_t mask = 1; mask < limit; ++mask) {
      std::vector<bool> used(rs.size(), false);
      std::vector<Process> rest_l;
      bool ok = true;
      for (std::size_t i = 0; i < ls.size() && ok; ++i) {
        if (!(mask & (std::size_t{1} << i))) {
          rest_l.push_back(ls[i]);
          continue;
        }
        bool found = false;
        for (std::size_t j = 0; j < rs.size(); ++j) {
          if (!used[j] && rs[j] == ls[i]) {
            used[j] = true;
            found = true;
            break;
          }
        }
        ok = found;
      }
      if (!ok) continue;
      std::vector<Process> rest_r;
      for (std::size_t j = 0; j < rs.size(); ++j) {
        if (!used[j]) rest_r.push_back(rs[j]);
      }
      if (member(compose(rest_l), compose(rest_r))) return true;
    }
    return false;
  }

  const UpToConfig& c_;
  bool symmetric_;
  std::unordered_set<PairKey, PairKeyHash> index_;
};

}  // namespace

WitnessAudit verify_witness(const Lts& lts, const Process& p, const Process& q,
                            std::span<const ProcessPair> witness, const UpToConfig& upto, bool weak,
                            std::size_t tau_bound) {
  WitnessAudit audit;
  Auditor aud(upto, witness);
  if (!aud.lands(p, q)) {
    audit.reason = "root pair is not in the relation";
    audit.offending = ProcessPair{p, q};
    return audit;
  }
  for (const auto& pr : witness) {
    for (Side side : {Side::left, Side::right}) {
      const Process& challenger = side == Side::left ? pr.left : pr.right;
      const Process& defender = side == Side::left ? pr.right : pr.left;
      for (const auto& t : lts.transitions(challenger)) {
        bool truncated = false;
        const auto answers = answers_for(lts, defender, t.action, weak, tau_bound, truncated);
        bool matched = false;
        for (const auto& a : answers) {
          const bool ok = side == Side::left ? aud.lands(t.target, a) : aud.lands(a, t.target);
          if (ok) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          audit.offending = pr;
          audit.reason = to_string(side) + " move " + to_string(t.action) + " to " + pretty(t.target) +
                         " has no answer landing in the relation";
          return audit;
        }
      }
    }
  }
  audit.ok = true;
  return audit;
}

void write_witness(std::ostream& out, const CheckResult& result, const Universe& universe) {
  out << "# universe";
  for (std::size_t i = 0; i < universe.atoms().size(); ++i) out << (i ? "," : " ") << universe.atoms()[i];
  out << "\n# verdict " << to_string(result.verdict) << "\n";
  for (const auto& pr : result.witness) out << "pair\t" << pretty(pr.left) << '\t' << pretty(pr.right) << '\n';
}

void write_trace(std::ostream& out, std::span<const TraceStep> trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    out << (i + 1) << '\t' << to_string(s.side) << '\t' << to_string(s.action) << '\t' << pretty(s.challenger)
        << '\t' << (s.defender ? pretty(*s.defender) : std::string("-")) << '\n';
  }
}

}  // namespace procnet
