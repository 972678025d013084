// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "procnet/equivalence.hpp"
#include "procnet/errors.hpp"
#include "procnet/laws.hpp"
#include "procnet/netlang.hpp"
#include "procnet/normalize.hpp"
#include "procnet/semantics.hpp"
#include "procnet/syntax.hpp"
#include "support/generators.hpp"

using namespace procnet;
using procnet::testing::TermGen;

namespace {

// Pinned sizes and tolerances.
constexpr std::size_t kReceiverBodies = 20;
constexpr std::size_t kEncodingTerms = 100;
constexpr std::size_t kEncodingPairs = 50;
constexpr std::size_t kCongruenceSamples = 25;
constexpr std::size_t kEq24MaxPairs = 4;
constexpr std::size_t kNormalizerCorpus = 500;
constexpr std::size_t kNormalizerSample = 50;
constexpr std::size_t kNormalizerRawDepth = 4;
constexpr std::size_t kSoundnessPairs = 200;
constexpr std::size_t kSoundnessDepth = 6;
constexpr std::size_t kSoundnessFanOut = 2;
constexpr std::size_t kAllowedFailures = 0;

const Universe U = Universe::standard();
const Lts EXT(Mode::extended, U);
const Lts PI(Mode::pi, U);

const Lts& lts_for(const Process& p) { return infer_mode(p) == Mode::pi ? PI : EXT; }

struct Proven {
  Mode mode;
  Process left;
  Process right;
};

// Every pair check_strong proves during the run, for the strong-to-weak sweep.
std::vector<Proven> g_proven;

CheckResult strong(const Lts& lts, const Process& p, const Process& q) {
  auto r = check_strong(lts, p, q);
  if (r.verdict == Verdict::proven) g_proven.push_back({lts.mode(), p, q});
  return r;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;
std::map<int, std::string> g_lines;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++g_failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  g_lines[id] = std::string(o.pass ? "PASS" : "FAIL") + " " + std::to_string(id) + " " + title + ": " + o.detail +
                " (" + timing + ")";
}

std::string count(std::size_t n, const char* what) { return std::to_string(n) + " " + what; }

Outcome law_suite() {
  std::ostringstream sink;
  const int code = run_cli({"laws"}, sink, sink);
  const LawReport report = run_laws(U);
  std::set<std::string> needed = {"par-unit-left", "par-unit-right", "par-assoc", "par-comm",
                                  "new-swap",      "new-unused",     "bridge-idem", "bibridge-idem",
                                  "lose-idem",     "dup-idem",       "duplose-idem", "repeat-receive-idem"};
  for (const auto& row : report.rows) needed.erase(row.law);

  // Record the proven instances for the strong-to-weak sweep.
  for (const auto& law : law_catalog()) {
    if (law.kind == LawKind::meta) continue;
    for (const auto& inst : law_instances(law, U)) strong(inst.mode == Mode::pi ? PI : EXT, inst.left, inst.right);
  }

  const Process p = parse("a?*x. b!x | a?*x. b!x");
  const Process q = parse("a?*x. b!x");
  const auto eq24 = check_strong(PI, p, q);
  const bool audited = eq24.verdict == Verdict::proven && verify_witness(PI, p, q, eq24.witness).ok;

  Outcome o;
  o.pass = code == kExitOk && report.passed() && needed.empty() && audited && eq24.witness.size() <= kEq24MaxPairs;
  o.detail = std::to_string(report.rows.size() - report.failures()) + "/" + std::to_string(report.rows.size()) +
             " instances proven, cli exit " + std::to_string(code) + ", idempotency witness " +
             count(eq24.witness.size(), "pair(s)") + (audited ? " audited" : " NOT audited");
  if (!needed.empty()) o.detail += ", missing law " + *needed.begin();
  return o;
}

Outcome receiver_shape() {
  TermGen gen(404);
  std::size_t bodies = 0;
  std::size_t bad = 0;
  while (bodies < kReceiverBodies) {
    const Process body = gen.pi(2);
    const Process r = repeat_receive(Channel::named("a"), body);
    if (!is_closed(r)) continue;
    ++bodies;
    const auto ts = PI.transitions(r);
    bool ok = ts.size() == U.size();
    for (std::size_t k = 0; ok && k < ts.size(); ++k) {
      const Value v = Value::atom(U.atoms()[k]);
      ok = ts[k].action == Action::receiving("a", U.atoms()[k]) &&
           ts[k].target == parallel(instantiate_value(body, v), r);
    }
    bad += !ok;
  }
  return {bad <= kAllowedFailures, count(bodies, "bodies") + ", " + count(bad, "mismatches")};
}

Outcome encoding_agreement() {
  TermGen gen(101, {"a", "b"});
  auto key = [](const Transition& t, bool unfold) {
    return to_string(t.action) + " " + pretty(normalized(unfold ? unfold_comm(t.target) : t.target));
  };
  std::size_t term_mismatch = 0;
  for (std::size_t i = 0; i < kEncodingTerms; ++i) {
    const Process p = gen.comm(3);
    std::set<std::string> x;
    std::set<std::string> y;
    for (const auto& t : EXT.transitions(p)) x.insert(key(t, true));
    for (const auto& t : PI.transitions(unfold_comm(p))) y.insert(key(t, false));
    term_mismatch += x != y;
  }
  std::size_t verdict_mismatch = 0;
  std::size_t proven = 0;
  for (std::size_t i = 0; i < kEncodingPairs; ++i) {
    const auto [p, q] = gen.comm_pair(2);
    const auto ext = strong(EXT, p, q);
    const auto pi = strong(PI, unfold_comm(p), unfold_comm(q));
    verdict_mismatch += ext.verdict != pi.verdict;
    proven += ext.verdict == Verdict::proven;
  }
  return {term_mismatch + verdict_mismatch <= kAllowedFailures,
          count(kEncodingTerms, "terms") + " with " + count(term_mismatch, "transition mismatches") + ", " +
              count(kEncodingPairs, "pairs") + " (" + std::to_string(proven) + " proven) with " +
              count(verdict_mismatch, "verdict mismatches")};
}

Outcome strong_weak_sweep() {
  std::size_t failed = 0;
  std::set<std::string> seen;
  std::size_t checked = 0;
  for (const auto& pr : g_proven) {
    const std::string key = to_string(pr.mode) + pretty(normalized(pr.left)) + "~" + pretty(normalized(pr.right));
    if (!seen.insert(key).second) continue;
    ++checked;
    const Lts& lts = pr.mode == Mode::pi ? PI : EXT;
    failed += check_weak(lts, pr.left, pr.right).verdict != Verdict::proven;
  }
  return {failed <= kAllowedFailures && checked > 0,
          count(checked, "strongly proven pairs") + ", " + count(failed, "not weakly proven")};
}

Outcome congruence_probe() {
  // Premise pool: proven comm-language law instances.
  std::vector<std::pair<Process, Process>> pool;
  for (const auto& law : law_catalog()) {
    if (law.kind == LawKind::meta) continue;
    for (const auto& inst : law_instances(law, U)) {
      if (inst.mode == Mode::extended) pool.emplace_back(inst.left, inst.right);
    }
  }
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::vector<std::string> channels = {"a", "b", "c", "f"};
  std::size_t par_failed = 0;
  std::size_t new_failed = 0;
  std::size_t new_checked = 0;
  std::size_t samples = 0;
  while (samples < kCongruenceSamples) {
    const auto& [p1, p2] = pool[pick(rng)];
    const auto& [q1, q2] = pool[pick(rng)];
    if (strong(EXT, p1, p2).verdict != Verdict::proven || strong(EXT, q1, q2).verdict != Verdict::proven) continue;
    ++samples;
    par_failed += strong(EXT, parallel(p1, q1), parallel(p2, q2)).verdict != Verdict::proven;

    // Family over channel a: premises at every channel fresh for the family.
    const Process f1 = abstract_channel(p1, "a");
    const Process f2 = abstract_channel(p2, "a");
    bool premises = true;
    for (const auto& c : channels) {
      if (free_channels(f1).contains(c) || free_channels(f2).contains(c)) continue;
      premises = premises &&
                 strong(EXT, instantiate_channel(f1, c), instantiate_channel(f2, c)).verdict == Verdict::proven;
    }
    if (!premises) continue;
    ++new_checked;
    new_failed += strong(EXT, restrict(f1, "a"), restrict(f2, "a")).verdict != Verdict::proven;
  }
  return {par_failed + new_failed <= kAllowedFailures,
          count(samples, "sampled premise pairs") + ", " + count(par_failed, "parallel failures") + ", " +
              std::to_string(new_checked) + " restriction families with " + count(new_failed, "failures")};
}

Outcome negative_control() {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli({"check", "a -> b", "a -> c"}, out, err);
  const Process p = parse("a -> b");
  const Process q = parse("a -> c");
  const auto r = check_strong(EXT, p, q);
  const auto replay = replay_trace(EXT, p, q, r.trace);
  const bool ok = code == kExitDistinguished && r.verdict == Verdict::distinguished && r.trace.size() == 2 && !replay;
  return {ok, "cli exit " + std::to_string(code) + ", trace depth " + std::to_string(r.trace.size()) + ", replay " +
                  (replay ? *replay : std::string("ok"))};
}

Outcome example1() {
  ExploreOptions o;
  o.inputs = {{"s", "m0"}};
  o.max_states = 200;
  o.max_depth = 20;
  const auto r = explore(anycast3("s", "r1", "r2", "r3"), U, o);
  const std::set<std::string> receivers = {"r1", "r2", "r3"};
  bool once = !r.outcomes.empty();
  for (const auto& out : r.outcomes) {
    once = once && out.deliveries.size() == 1 && receivers.contains(out.deliveries[0].first);
  }
  return {!r.truncated && once, count(r.nodes, "nodes") + ", " + count(r.outcomes.size(), "outcomes") +
                                     ", truncated " + (r.truncated ? "yes" : "no") + ", exactly-once " +
                                     (once ? "yes" : "no")};
}

Outcome example2() {
  ExploreOptions o;
  o.inputs = {{"s", "m0"}};
  o.max_states = 2000;
  o.max_depth = 20;
  const auto r = explore(broadcast3_unreliable("s", "r1", "r2", "r3"), U, o);
  bool lost = false;
  bool duplicated = false;
  for (const auto& out : r.outcomes) {
    lost = lost || out.deliveries.empty();
    std::set<std::string> rs;
    for (const auto& d : out.deliveries) {
      if (d.second == "m0") rs.insert(d.first);
    }
    duplicated = duplicated || rs.size() >= 2;
  }
  return {lost && duplicated, count(r.outcomes.size(), "outcomes") + ", loss " + (lost ? "found" : "missing") +
                                  ", duplication " + (duplicated ? "found" : "missing") + ", truncated " +
                                  (r.truncated ? "yes" : "no")};
}

Outcome normalizer_audit() {
  TermGen gen(909, {"a", "b"});
  std::vector<Process> corpus;
  for (std::size_t i = 0; i < kNormalizerCorpus; ++i) corpus.push_back(i % 2 ? gen.comm(4) : gen.pi(3));
  std::size_t not_idempotent = 0;
  for (const auto& p : corpus) not_idempotent += normalized(normalized(p)) != normalized(p);
  // The sample alternates between comm-language and pi terms. Besides the
  // up-to game, a plain search on raw terms must not separate p from its
  // normal form; that check does not rely on the normalizer.
  SearchOptions raw;
  raw.depth = kNormalizerRawDepth;
  raw.normalize_states = false;
  std::size_t not_proven = 0;
  std::size_t refuted = 0;
  std::size_t exhausted = 0;
  const std::size_t stride = kNormalizerCorpus / kNormalizerSample;
  for (std::size_t k = 0; k < kNormalizerSample; ++k) {
    const Process& p = corpus[k * stride + k % 2];
    const Lts& lts = lts_for(p);
    not_proven += strong(lts, p, normalized(p)).verdict != Verdict::proven;
    const auto s = find_distinguishing_trace(lts, p, normalized(p), raw);
    refuted += s.trace.has_value();
    exhausted += s.exhausted;
  }
  return {not_idempotent + not_proven + refuted <= kAllowedFailures,
          count(corpus.size(), "terms") + ", " + count(not_idempotent, "not idempotent") + ", " +
              count(kNormalizerSample, "sampled") + " with " + count(not_proven, "unproven") + ", " +
              count(refuted, "refuted") + " by raw search at depth <= " + std::to_string(kNormalizerRawDepth) +
              " (" + count(exhausted, "out of budget") + ")"};
}

Outcome soundness_probe() {
  TermGen gen(1010, {"a", "b"});
  // Self-feeding distributors with three targets make raw state spaces at
  // depth 6 too large for the search budget.
  gen.set_max_targets(kSoundnessFanOut);
  SearchOptions plain;
  plain.depth = kSoundnessDepth;
  plain.normalize_states = false;
  std::size_t proven = 0;
  std::size_t refuted = 0;
  std::size_t exhausted = 0;
  for (std::size_t i = 0; i < kSoundnessPairs; ++i) {
    const auto [p, q] = gen.comm_pair(2);
    if (strong(EXT, p, q).verdict != Verdict::proven) continue;
    ++proven;
    const auto s = find_distinguishing_trace(EXT, p, q, plain);
    refuted += s.trace.has_value();
    exhausted += s.exhausted;
  }
  return {refuted <= kAllowedFailures && exhausted == 0 && proven > 0,
          count(kSoundnessPairs, "pairs") + ", " + std::to_string(proven) + " proven up-to, " +
              count(refuted, "refuted by the plain game") + " at depth <= " + std::to_string(kSoundnessDepth) +
              ", " + count(exhausted, "searches out of budget")};
}

}  // namespace

int main() {
  report(1, "law suite", law_suite);
  report(2, "repeating receiver transitions", receiver_shape);
  report(3, "comm language agrees with its pi encoding", encoding_agreement);
  report(5, "congruence probe", congruence_probe);
  report(6, "negative control", negative_control);
  report(7, "anycast exactly-once delivery", example1);
  report(8, "unreliable broadcast loss and duplication", example2);
  report(9, "normalizer audit", normalizer_audit);
  report(10, "up-to soundness probe", soundness_probe);
  // Runs last so that it covers every pair proven above.
  report(4, "strong proofs are weak proofs", strong_weak_sweep);
  for (const auto& [id, line] : g_lines) std::cout << line << '\n';
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed") << std::endl;
  return g_failures == 0 ? 0 : 1;
}
