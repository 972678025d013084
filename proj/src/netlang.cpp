#include "procnet/netlang.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>
#include <random>
#include <regex>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "procnet/errors.hpp"
#include "procnet/normalize.hpp"
#include "procnet/syntax.hpp"

namespace procnet {

std::string to_string(Construct kind) {
  switch (kind) {
    case Construct::distribute:
      return "distribute";
    case Construct::bridge:
      return "bridge";
    case Construct::bibridge:
      return "bibridge";
    case Construct::loser:
      return "loser";
    case Construct::duplicator:
      return "duplicator";
    case Construct::duploser:
      return "duploser";
  }
  return "distribute";
}

namespace {

Process forward(const std::string& from, std::vector<std::string> to) {
  std::vector<Channel> targets;
  for (auto& t : to) targets.push_back(Channel::named(std::move(t)));
  return distribute(Channel::named(from), std::move(targets));
}

void require_arity(Construct kind, std::size_t got, std::size_t want) {
  if (got != want) {
    throw ArityError(to_string(kind) + " takes " + std::to_string(want) + " channel(s), got " +
                     std::to_string(got));
  }
}

// Placeholder for a local channel while a network body is assembled; '%'
// never occurs in parsed names.
const std::string kLocal = "%local";

Process example_network(const std::vector<std::string>& names, bool lossy) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) throw DistinctnessError("channel '" + names[i] + "' is used twice");
    }
  }
  std::vector<Process> parts{forward(names[0], {kLocal})};
  if (lossy) {
    parts.push_back(forward(kLocal, {}));
    parts.push_back(forward(kLocal, {kLocal, kLocal}));
  }
  for (std::size_t i = 1; i < names.size(); ++i) parts.push_back(forward(kLocal, {names[i]}));
  return restrict(abstract_channel(compose(parts), kLocal), "t");
}

}  // namespace

Process build(Construct kind, std::span<const std::string> ch) {
  switch (kind) {
    case Construct::distribute:
      if (ch.empty()) throw ArityError("distribute needs a source channel");
      return forward(ch[0], {ch.begin() + 1, ch.end()});
    case Construct::bridge:
      require_arity(kind, ch.size(), 2);
      return forward(ch[0], {ch[1]});
    case Construct::bibridge:
      require_arity(kind, ch.size(), 2);
      return parallel(forward(ch[0], {ch[1]}), forward(ch[1], {ch[0]}));
    case Construct::loser:
      require_arity(kind, ch.size(), 1);
      return forward(ch[0], {});
    case Construct::duplicator:
      require_arity(kind, ch.size(), 1);
      return forward(ch[0], {ch[0], ch[0]});
    case Construct::duploser:
      require_arity(kind, ch.size(), 1);
      return parallel(forward(ch[0], {}), forward(ch[0], {ch[0], ch[0]}));
  }
  throw ArityError("unknown construct");
}

Process NetworkSpec::elaborate() const {
  std::set<std::string> declared;
  for (const auto& names : {free_channels, locals}) {
    for (const auto& n : names) {
      if (!declared.insert(n).second) throw ScopeError("channel '" + n + "' declared twice");
    }
  }
  std::vector<Process> parts;
  for (const auto& link : links) {
    for (const auto& c : link.channels) {
      if (!declared.contains(c)) throw ScopeError("link uses undeclared channel '" + c + "'");
    }
    parts.push_back(build(link.kind, link.channels));
  }
  Process p = compose(parts);
  for (auto it = locals.rbegin(); it != locals.rend(); ++it) p = restrict(abstract_channel(p, *it), *it);
  return p;
}

Process anycast3(const std::string& s, const std::string& r1, const std::string& r2, const std::string& r3) {
  return example_network({s, r1, r2, r3}, false);
}

Process broadcast3_unreliable(const std::string& s, const std::string& r1, const std::string& r2,
                              const std::string& r3) {
  return example_network({s, r1, r2, r3}, true);
}

Injection parse_injection(const std::string& text) {
  static const std::regex form(R"(^\s*([A-Za-z_][A-Za-z0-9_']*)\s*=\s*([A-Za-z_][A-Za-z0-9_']*)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) throw SyntaxError(1, 1, "expected CH=VAL, got '" + text + "'");
  return {m[1], m[2]};
}

Process inject(const Process& p, std::span<const Injection> inputs, const Universe& universe) {
  std::vector<Process> parts;
  for (const auto& in : inputs) {
    if (!universe.contains(in.value)) throw ScopeError("value '" + in.value + "' is not in the universe");
    parts.push_back(send(Channel::named(in.channel), Value::atom(in.value)));
  }
  parts.push_back(p);
  return compose(parts);
}

std::string digest(const Process& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : pretty(normalized(p))) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Query Query::parse(const std::string& text) {
  static const std::regex cond(R"(^\s*(deliveries|distinct|delivered)\s*(>=|<=|=)\s*([A-Za-z0-9_']+)\s*$)");
  Query q;
  q.text = text;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string part = text.substr(start, comma - start);
    std::smatch m;
    if (!std::regex_match(part, m, cond)) {
      throw SyntaxError(1, static_cast<int>(start) + 1, "bad query condition '" + part + "'");
    }
    const std::string key = m[1];
    const std::string op = m[2];
    const std::string arg = m[3];
    Condition c{};
    if (key == "delivered") {
      if (op != "=") throw SyntaxError(1, static_cast<int>(start) + 1, "delivered takes '='");
      c.kind = Kind::delivered;
      c.channel = arg;
    } else {
      if (!std::all_of(arg.begin(), arg.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
        throw SyntaxError(1, static_cast<int>(start) + 1, key + " takes a number");
      }
      c.number = std::stoul(arg);
      if (key == "distinct") {
        if (op != ">=") throw SyntaxError(1, static_cast<int>(start) + 1, "distinct takes '>='");
        c.kind = Kind::distinct_ge;
      } else {
        c.kind = op == "=" ? Kind::count_eq : op == ">=" ? Kind::count_ge : Kind::count_le;
      }
    }
    q.conditions.push_back(std::move(c));
    start = comma + 1;
  }
  return q;
}

bool Query::holds(std::span<const Delivery> deliveries) const {
  std::set<std::string> channels;
  for (const auto& d : deliveries) channels.insert(d.first);
  for (const auto& c : conditions) {
    switch (c.kind) {
      case Kind::count_eq:
        if (deliveries.size() != c.number) return false;
        break;
      case Kind::count_ge:
        if (deliveries.size() < c.number) return false;
        break;
      case Kind::count_le:
        if (deliveries.size() > c.number) return false;
        break;
      case Kind::distinct_ge:
        if (channels.size() < c.number) return false;
        break;
      case Kind::delivered:
        if (!channels.contains(c.channel)) return false;
        break;
    }
  }
  return true;
}

namespace {

struct NodeKey {
  Process state;
  std::vector<Delivery> deliveries;

  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::size_t h = k.state.hash();
    for (const auto& [c, v] : k.deliveries) {
      h = h * 31 + std::hash<std::string>{}(c);
      h = h * 31 + std::hash<std::string>{}(v);
    }
    return h;
  }
};

struct Node {
  NodeKey key;
  std::size_t parent = 0;
  Action via;
  std::size_t depth = 0;
  std::vector<std::size_t> next;
};

std::vector<TraceEvent> path_to(const std::vector<Node>& nodes, std::size_t i) {
  std::vector<TraceEvent> out;
  while (i != 0) {
    out.push_back({nodes[i].depth, nodes[i].via, digest(nodes[i].key.state)});
    i = nodes[i].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

bool has_cycle(const std::vector<Node>& nodes) {
  std::vector<std::size_t> indegree(nodes.size(), 0);
  for (const auto& n : nodes) {
    for (auto j : n.next) ++indegree[j];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    ++removed;
    for (auto j : nodes[i].next) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  return removed != nodes.size();
}

}  // namespace

ExploreReport explore(const Process& p, const Universe& universe, const ExploreOptions& options) {
  if (!is_closed(p)) throw ScopeError("explore requires a closed process");
  const Process start = normalized(inject(p, options.inputs, universe));
  const Lts lts(options.mode.value_or(infer_mode(start)), universe);

  ExploreReport report;
  if (options.observed) {
    report.observed = *options.observed;
  } else {
    report.observed = free_channels(p);
    for (const auto& in : options.inputs) report.observed.erase(in.channel);
  }

  std::vector<Node> nodes;
  std::unordered_map<NodeKey, std::size_t, NodeKeyHash> index;
  std::unordered_set<Process, ProcessHash> states;
  nodes.push_back({{start, {}}, 0, Action::tau(), 0, {}});
  index.emplace(nodes[0].key, 0);
  states.insert(start);

  std::map<std::vector<Delivery>, std::size_t> outcome_index;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    std::vector<Transition> steps;
    for (auto& t : lts.transitions(nodes[i].key.state)) {
      if (t.action.is_tau() ||
          (t.action.kind == Action::Kind::send && report.observed.contains(t.action.channel))) {
        steps.push_back(std::move(t));
      }
    }
    if (steps.empty()) {
      const auto& d = nodes[i].key.deliveries;
      auto [it, fresh] = outcome_index.emplace(d, report.outcomes.size());
      if (fresh) report.outcomes.push_back({d, 0, path_to(nodes, i)});
      ++report.outcomes[it->second].terminals;
      continue;
    }
    if (nodes[i].depth >= options.max_depth) {
      report.truncated = true;
      continue;
    }
    for (const auto& t : steps) {
      report.actions.insert(to_string(t.action));
      NodeKey key{normalized(t.target), nodes[i].key.deliveries};
      if (t.action.kind == Action::Kind::send) {
        key.deliveries.emplace_back(t.action.channel, t.action.value);
        std::sort(key.deliveries.begin(), key.deliveries.end());
      }
      auto found = index.find(key);
      if (found != index.end()) {
        nodes[i].next.push_back(found->second);
        continue;
      }
      if (nodes.size() >= options.max_states) {
        report.truncated = true;
        continue;
      }
      const std::size_t j = nodes.size();
      states.insert(key.state);
      index.emplace(key, j);
      nodes.push_back({std::move(key), i, t.action, nodes[i].depth + 1, {}});
      nodes[i].next.push_back(j);
      queue.push_back(j);
    }
  }

  report.nodes = nodes.size();
  report.states = states.size();
  report.divergent = has_cycle(nodes);
  for (const auto& q : options.queries) {
    QueryResult r{q.text, false, !report.outcomes.empty(), {}};
    for (const auto& o : report.outcomes) {
      if (q.holds(o.deliveries)) {
        if (!r.some) r.witness = o.witness;
        r.some = true;
      } else {
        r.all = false;
      }
    }
    report.queries.push_back(std::move(r));
  }
  return report;
}

std::vector<TraceEvent> simulate(const Process& p, const Universe& universe, std::span<const Injection> inputs,
                                 std::size_t steps, std::uint64_t seed, std::optional<Mode> mode) {
  Process state = normalized(inject(p, inputs, universe));
  const Lts lts(mode.value_or(infer_mode(state)), universe);
  std::mt19937_64 rng(seed);
  std::vector<TraceEvent> out;
  for (std::size_t step = 1; step <= steps; ++step) {
    std::vector<Process> targets;
    for (const auto& t : lts.transitions(state)) {
      if (!t.action.is_tau()) continue;
      Process n = normalized(t.target);
      if (std::find(targets.begin(), targets.end(), n) == targets.end()) targets.push_back(std::move(n));
    }
    if (targets.empty()) break;
    std::sort(targets.begin(), targets.end(), TermLess{});
    std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
    state = targets[pick(rng)];
    out.push_back({step, Action::tau(), digest(state)});
  }
  return out;
}

void write_events(std::ostream& out, std::span<const TraceEvent> events) {
  for (const auto& e : events) out << e.step << '\t' << to_string(e.action) << '\t' << e.digest << '\n';
}

void write_explore_report(std::ostream& out, const ExploreReport& report, const Universe& universe) {
  out << "# universe";
  for (std::size_t i = 0; i < universe.atoms().size(); ++i) out << (i ? "," : " ") << universe.atoms()[i];
  out << "\n# observed";
  for (const auto& c : report.observed) out << ' ' << c;
  out << "\nnodes\t" << report.nodes << "\nstates\t" << report.states << "\ntruncated\t"
      << (report.truncated ? "yes" : "no") << "\ndivergent\t" << (report.divergent ? "yes" : "no") << '\n';
  for (const auto& o : report.outcomes) {
    out << "outcome\t" << o.terminals << '\t';
    if (o.deliveries.empty()) out << '-';
    for (std::size_t i = 0; i < o.deliveries.size(); ++i) {
      out << (i ? "," : "") << o.deliveries[i].first << '!' << o.deliveries[i].second;
    }
    out << '\n';
    write_events(out, o.witness);
  }
  for (const auto& q : report.queries) {
    out << "query\t" << q.query << '\t' << (q.some ? "some" : "none") << '\t' << (q.all ? "all" : "not-all")
        << '\n';
    write_events(out, q.witness);
  }
}

}  // namespace procnet
