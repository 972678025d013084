#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "procnet/equivalence.hpp"
#include "procnet/errors.hpp"
#include "procnet/normalize.hpp"
#include "procnet/process.hpp"
#include "procnet/syntax.hpp"
#include "support/generators.hpp"

using namespace procnet;
using procnet::testing::TermGen;

namespace {

const Universe U = Universe::standard();

Process P(const char* text) { return parse(text, U); }

// Substitution oracle: walks the AST tracking how many receivers have been
// crossed, replacing the variable that points just outside `body`.
Process subst_value(const Process& p, const Value& v, std::uint32_t depth) {
  switch (p.tag()) {
    case Tag::stop:
    case Tag::distribute:
      return p;
    case Tag::send: {
      const Value& x = p.payload();
      if (x.kind == Value::Kind::var && x.index == depth) return send(p.channel(), v);
      if (x.kind == Value::Kind::var && x.index > depth) return send(p.channel(), Value::var(x.index - 1));
      return p;
    }
    case Tag::receive:
      return receive(p.channel(), subst_value(p.body(), v, depth + 1), p.hint());
    case Tag::repeat_receive:
      return repeat_receive(p.channel(), subst_value(p.body(), v, depth + 1), p.hint());
    case Tag::parallel:
      return parallel(subst_value(p.left(), v, depth), subst_value(p.right(), v, depth));
    case Tag::restrict:
      return restrict(subst_value(p.body(), v, depth), p.hint());
  }
  return p;
}

std::vector<Process> corpus(std::uint64_t seed, std::size_t n, int depth) {
  TermGen gen(seed);
  std::vector<Process> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.any(depth));
  return out;
}

}  // namespace

TEST_CASE("instantiate_value substitutes the receiver variable") {
  const Process body = parse_open("b!x", U, {}, {"x"});
  CHECK(instantiate_value(body, Value::atom("m0")) == P("b!m0"));
  CHECK(instantiate_value(stop(), Value::atom("m0")) == stop());

  const Process nested = parse_open("b!x | a?*y. c!x", U, {}, {"x"});
  CHECK(instantiate_value(nested, Value::atom("m0")) == P("b!m0 | a?*y. c!m0"));
}

TEST_CASE("instantiate_value agrees with the substitution oracle") {
  TermGen gen(11);
  for (int i = 0; i < 300; ++i) {
    // A receiver body: the generated continuation may refer to the variable.
    const Process r = receive(Channel::named("a"), gen.pi(3));
    if (!is_closed(r)) continue;
    for (const auto& atom : U.atoms()) {
      const Value v = Value::atom(atom);
      CHECK(instantiate_value(r.body(), v) == subst_value(r.body(), v, 0));
    }
  }
}

TEST_CASE("instantiate_channel opens a restriction") {
  CHECK(instantiate_channel(parse_open("t -> r", U, {"t"}, {}), "t0") == P("t0 -> r"));
  CHECK(instantiate_channel(parse_open("s -> t | t -> r", U, {"t"}, {}), "t0") == P("s -> t0 | t0 -> r"));
  CHECK(instantiate_channel(stop(), "t0") == stop());
  CHECK_THROWS_AS(instantiate_channel(parse_open("t -> t0", U, {"t"}, {}), "t0"), FreshnessViolation);
}

TEST_CASE("abstract_channel is the inverse of instantiate_channel") {
  CHECK(abstract_channel(P("t0 -> r"), "t0") == parse_open("t -> r", U, {"t"}, {}));
  CHECK(abstract_channel(P("s -> r"), "t0") == P("s -> r"));
  CHECK(abstract_channel(P("t0!m0 | t0 -> r"), "t0") == parse_open("t!m0 | t -> r", U, {"t"}, {}));

  TermGen gen(5);
  for (int i = 0; i < 300; ++i) {
    const Process r = restrict(gen.any(3));
    const Process body = r.body();
    const Process opened = instantiate_channel(body, "fresh0");
    CHECK(abstract_channel(opened, "fresh0") == body);
  }
}

TEST_CASE("normal form examples") {
  CHECK(normalized(P("0 | a!m0")) == P("a!m0"));
  CHECK(normalized(P("new t. s -> r")) == P("s -> r"));

  const Process in = P("(a!m0 | 0) | a!m0");
  const NormalForm nf = normalize(in);
  CHECK(nf.process == P("a!m0 | a!m0"));
  CHECK(nf.process.right().tag() == Tag::send);
  CHECK(std::find(nf.provenance.begin(), nf.provenance.end(), "drop-stop") != nf.provenance.end());
  CHECK(check_strong(Lts(Mode::extended, U), in, nf.process).verdict == Verdict::proven);
}

TEST_CASE("normal forms sort, drop unused binders and swap adjacent ones") {
  CHECK(normalized(P("b!m0 | a!m0")) == normalized(P("a!m0 | b!m0")));
  CHECK(pretty(normalized(P("b!m0 | (0 | a!m0)"))) == "a!m0 | b!m0");
  CHECK(normalized(P("new u. new v. (u -> v | a -> u)")) == normalized(P("new v. new u. (u -> v | a -> u)")));
  // No scope extrusion: the restriction stays put.
  CHECK(normalized(P("new t. (t -> a) | b!m0")).tag() == Tag::parallel);
  // Repeating receivers stay folded, bodies are normalized.
  CHECK(normalized(P("a?*x. (0 | b!x)")) == P("a?*x. b!x"));
}

TEST_CASE("term_order examples") {
  CHECK(term_order(P("0"), P("a!m0")) < 0);
  CHECK(term_order(P("a!m0"), P("a!m0")) == 0);
  CHECK(term_order(P("a!m0"), P("b!m0")) < 0);
}

TEST_CASE("normalize is idempotent") {
  for (const auto& p : corpus(1, 500, 4)) {
    const Process n = normalized(p);
    CHECK(normalized(n) == n);
    CHECK(normalize(n).provenance.empty());
  }
}

TEST_CASE("normalize makes parallel composition commutative") {
  const auto ps = corpus(2, 200, 3);
  for (std::size_t i = 0; i + 1 < ps.size(); i += 2) {
    CHECK(normalized(parallel(ps[i], ps[i + 1])) == normalized(parallel(ps[i + 1], ps[i])));
    CHECK(normalized(parallel(ps[i], stop())) == normalized(ps[i]));
  }
}

TEST_CASE("normalize preserves closedness") {
  for (const auto& p : corpus(3, 300, 4)) CHECK(is_closed(normalized(p)));
}

TEST_CASE("term_order is a total order") {
  const auto ps = corpus(4, 40, 2);
  for (const auto& p : ps) {
    for (const auto& q : ps) {
      const auto pq = term_order(p, q);
      const auto qp = term_order(q, p);
      CHECK((pq < 0) == (qp > 0));
      CHECK((pq == 0) == (p == q));
      for (const auto& r : ps) {
        if (pq < 0 && term_order(q, r) < 0) CHECK(term_order(p, r) < 0);
      }
    }
  }
}

TEST_CASE("parallel_components and restriction_prefix") {
  const Process p = P("a!m0 | (b!m0 | c!m0)");
  CHECK(parallel_components(p).size() == 3);
  CHECK(parallel_components(P("a!m0")).size() == 1);
  CHECK(restriction_prefix(P("new u. new v. (u -> v | a -> u)")) == 2);
  CHECK(restriction_prefix(P("a -> b")) == 0);
}
