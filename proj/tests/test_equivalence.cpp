#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "procnet/equivalence.hpp"
#include "procnet/normalize.hpp"
#include "procnet/semantics.hpp"
#include "procnet/syntax.hpp"
#include "support/generators.hpp"

using namespace procnet;
using procnet::testing::TermGen;

namespace {

const Universe U = Universe::standard();
const Lts EXT(Mode::extended, U);
const Lts PI(Mode::pi, U);

Process P(const char* text) { return parse(text, U); }

CheckOptions bounded(std::size_t pairs = 64) {
  CheckOptions o;
  o.max_pairs = pairs;
  return o;
}

std::vector<std::pair<Process, Process>> random_pairs(std::uint64_t seed, std::size_t n) {
  TermGen gen(seed, {"a", "b"});
  std::vector<std::pair<Process, Process>> out;
  while (out.size() < n) out.push_back(gen.comm_pair(2));
  return out;
}

void check_replays(const Lts& lts, const Process& p, const Process& q, const CheckResult& r, bool weak) {
  REQUIRE_FALSE(r.trace.empty());
  const auto error = replay_trace(lts, p, q, r.trace, weak);
  CHECK_MESSAGE(!error, *error);
}

}  // namespace

TEST_CASE("two parallel bridges behave as one") {
  const auto r = check_strong(EXT, P("a -> b | a -> b"), P("a -> b"), bounded());
  CHECK(r.verdict == Verdict::proven);
  CHECK(verify_witness(EXT, P("a -> b | a -> b"), P("a -> b"), r.witness).ok);
}

TEST_CASE("reflexivity") {
  TermGen gen(7);
  for (int i = 0; i < 60; ++i) {
    const Process p = gen.comm(3);
    CHECK(check_strong(EXT, p, p, bounded(1)).verdict == Verdict::proven);
    CHECK(check_weak(EXT, p, p, bounded(1)).verdict == Verdict::proven);
  }
}

TEST_CASE("bridges to different channels are distinguished in two rounds") {
  const Process p = P("a -> b");
  const Process q = P("a -> c");
  for (bool weak : {false, true}) {
    const auto r = weak ? check_weak(EXT, p, q, bounded()) : check_strong(EXT, p, q, bounded());
    REQUIRE(r.verdict == Verdict::distinguished);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].action == Action::receiving("a", "m0"));
    CHECK(r.trace[1].action == Action::sending("b", "m0"));
    CHECK_FALSE(r.trace[1].defender.has_value());
    check_replays(EXT, p, q, r, weak);
  }
}

TEST_CASE("repeating receivers are idempotent with a small audited witness") {
  const Process p = P("a?*x. b!x | a?*x. b!x");
  const Process q = P("a?*x. b!x");
  const auto r = check_strong(PI, p, q, bounded());
  REQUIRE(r.verdict == Verdict::proven);
  CHECK(r.witness.size() <= 4);
  CHECK(verify_witness(PI, p, q, r.witness).ok);

  // Deleting a pair breaks closure.
  auto broken = r.witness;
  broken.pop_back();
  CHECK_FALSE(verify_witness(PI, p, q, broken).ok);
}

TEST_CASE("verify_witness accepts the empty relation for identical stops") {
  CHECK(verify_witness(EXT, stop(), stop(), {}).ok);
}

TEST_CASE("context cancellation") {
  {
    const auto [l, r] = cancel_context(normalized(P("c!m0 | a!m0")), normalized(P("c!m0 | b!m0")));
    CHECK(l == P("a!m0"));
    CHECK(r == P("b!m0"));
  }
  {
    const Process R = P("a?*x. b!x");
    const Process pm = P("b!m0");
    const auto [l, r] = cancel_context(normalized(parallel(parallel(pm, R), R)), normalized(parallel(pm, R)));
    CHECK(l == normalized(parallel(R, R)));
    CHECK(r == R);
  }
  {
    const Process p = normalized(P("a -> b | dup c"));
    const auto [l, r] = cancel_context(p, p);
    CHECK(l == stop());
    CHECK(r == stop());
  }
}

TEST_CASE("structural and idempotency instances") {
  CHECK(check_strong(EXT, P("a -> b | dup c"), P("dup c | a -> b")).verdict == Verdict::proven);
  CHECK(check_strong(EXT, P("lose a | lose a"), P("lose a")).verdict == Verdict::proven);
  CHECK(check_strong(EXT, P("duplose a | duplose a"), P("duplose a")).verdict == Verdict::proven);
}

TEST_CASE("a local relay is weakly but not strongly a bridge") {
  const Process p = P("new t. (a -> t | t -> b)");
  const Process q = P("a -> b");
  const auto r = check_strong(EXT, p, q, bounded());
  REQUIRE(r.verdict == Verdict::distinguished);
  check_replays(EXT, p, q, r, false);
}

TEST_CASE("plain game without up-to still proves finite-state pairs") {
  CheckOptions o = bounded();
  o.upto = UpToConfig::plain();
  CHECK(check_strong(EXT, P("a!m0 | b!m1"), P("b!m1 | a!m0"), o).verdict == Verdict::proven);
  const auto r = check_strong(EXT, P("a -> b | a -> b"), P("a -> b"), o);
  CHECK(r.verdict != Verdict::distinguished);
}

TEST_CASE("verdicts are symmetric and distinguishing traces replay") {
  int distinguished = 0;
  int proven = 0;
  for (const auto& [p, q] : random_pairs(17, 60)) {
    const auto pq = check_strong(EXT, p, q, bounded());
    const auto qp = check_strong(EXT, q, p, bounded());
    CHECK(pq.verdict == qp.verdict);
    if (pq.verdict == Verdict::distinguished) {
      ++distinguished;
      check_replays(EXT, p, q, pq, false);
      check_replays(EXT, q, p, qp, false);
    }
    if (pq.verdict == Verdict::proven) {
      ++proven;
      CHECK(verify_witness(EXT, p, q, pq.witness).ok);
    }
  }
  CHECK(distinguished > 0);
  CHECK(proven > 0);
}

TEST_CASE("strong proofs imply weak proofs") {
  for (const auto& [p, q] : random_pairs(18, 40)) {
    const auto strong = check_strong(EXT, p, q, bounded());
    if (strong.verdict != Verdict::proven) continue;
    const auto weak = check_weak(EXT, p, q, bounded());
    CHECK(weak.verdict == Verdict::proven);
    CHECK(verify_witness(EXT, p, q, weak.witness, UpToConfig::full(), true).ok);
  }
}

TEST_CASE("comm-language verdicts agree with the unfolded pi terms") {
  for (const auto& [p, q] : random_pairs(19, 40)) {
    const auto ext = check_strong(EXT, p, q, bounded());
    const auto pi = check_strong(PI, unfold_comm(p), unfold_comm(q), bounded());
    CHECK(ext.verdict == pi.verdict);
  }
}

TEST_CASE("pooled witnesses of a chain close over the composed pair") {
  const std::vector<std::vector<const char*>> chains = {
      {"a -> b | a -> b | a -> b", "a -> b | a -> b", "a -> b"},
      {"lose a | lose a", "lose a", "lose a | (0 | lose a)"},
      {"duplose a | duplose a", "duplose a", "dup a | lose a"},
      {"a?*x. b!x | a?*x. b!x", "a?*x. b!x", "a?*x. (b!x | 0)"},
  };
  for (const auto& chain : chains) {
    const Process p = P(chain[0]);
    const Process q = P(chain[1]);
    const Process r = P(chain[2]);
    const Lts& lts = infer_mode(p) == Mode::pi ? PI : EXT;
    const auto pq = check_strong(lts, p, q, bounded());
    const auto qr = check_strong(lts, q, r, bounded());
    REQUIRE(pq.verdict == Verdict::proven);
    REQUIRE(qr.verdict == Verdict::proven);
    std::vector<ProcessPair> pooled = pq.witness;
    pooled.insert(pooled.end(), qr.witness.begin(), qr.witness.end());
    // Greedy cancellation could drop a component the proof needs, so the
    // composed pair enters in normal form.
    pooled.push_back({normalized(p), normalized(r)});
    const auto audit = verify_witness(lts, p, r, pooled);
    const std::string context = std::string(chain[0]) + " ~ " + chain[2] + ": " + audit.reason;
    INFO(context);
    CHECK(audit.ok);
  }
}

TEST_CASE("minimal depth search on raw terms") {
  SearchOptions o;
  o.depth = 6;
  o.normalize_states = false;
  const auto s = find_distinguishing_trace(EXT, P("a -> b"), P("a -> c"), o);
  REQUIRE(s.trace);
  CHECK(s.trace->size() == 2);
  CHECK_FALSE(find_distinguishing_trace(EXT, P("a!m0 | b!m0"), P("b!m0 | a!m0"), o).trace);
}

TEST_CASE("serialization") {
  const auto r = check_strong(EXT, P("a -> b"), P("a -> c"), bounded());
  std::ostringstream trace;
  write_trace(trace, r.trace);
  CHECK(trace.str() == "1\tleft\ta?m0\tb!m0 | a => [b]\tc!m0 | a => [c]\n2\tleft\tb!m0\ta => [b]\t-\n");

  const auto w = check_strong(EXT, P("a -> b | a -> b"), P("a -> b"), bounded());
  std::ostringstream witness;
  write_witness(witness, w, U);
  CHECK(witness.str().rfind("# universe m0,m1\n# verdict proven\n", 0) == 0);
  CHECK(witness.str().find("pair\t") != std::string::npos);
}
