#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "procnet/equivalence.hpp"
#include "procnet/errors.hpp"
#include "procnet/laws.hpp"
#include "procnet/netlang.hpp"
#include "procnet/normalize.hpp"
#include "procnet/semantics.hpp"
#include "procnet/syntax.hpp"

namespace procnet {

namespace {

struct Globals {
  std::string mode = "auto";
  std::string values;
};

Universe resolve_universe(const Globals& g) {
  if (!g.values.empty()) return parse_universe(g.values);
  if (const char* env = std::getenv("PROCNET_VALUES"); env != nullptr && *env != '\0') {
    return parse_universe(env);
  }
  return Universe::standard();
}

std::optional<Mode> requested_mode(const Globals& g) {
  if (g.mode == "pi") return Mode::pi;
  if (g.mode == "extended") return Mode::extended;
  return std::nullopt;
}

// `@path` reads the term from a file.
std::string term_source(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw Error("io", "cannot read '" + arg.substr(1) + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Process read_term(const std::string& arg, const Universe& u) { return parse(term_source(arg), u); }

void echo_universe(std::ostream& out, const Universe& u) {
  out << "# universe";
  for (std::size_t i = 0; i < u.atoms().size(); ++i) out << (i ? "," : " ") << u.atoms()[i];
  out << '\n';
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string dot_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("io", "cannot write '" + path + "'");
  return f;
}

int cmd_transitions(const Globals& g, const std::string& term, std::ostream& out) {
  const Universe u = resolve_universe(g);
  const Process p = read_term(term, u);
  const Lts lts(requested_mode(g).value_or(infer_mode(p)), u);
  echo_universe(out, u);
  out << "# mode " << to_string(lts.mode()) << '\n';
  for (const auto& t : lts.transitions(p)) {
    out << to_string(t.action) << "  ->  " << pretty(normalized(t.target)) << '\n';
  }
  return kExitOk;
}

int cmd_lts(const Globals& g, const std::string& term, std::size_t depth, const std::string& dot,
            std::ostream& out) {
  const Universe u = resolve_universe(g);
  const Process p = read_term(term, u);
  const Lts lts(requested_mode(g).value_or(infer_mode(p)), u);

  struct Edge {
    std::size_t from;
    Action action;
    std::size_t to;
  };
  std::vector<Process> states;
  std::map<Process, std::size_t, TermLess> index;
  std::vector<Edge> edges;
  std::deque<std::pair<std::size_t, std::size_t>> queue;  // (state, depth)
  bool frontier = false;

  auto intern = [&](const Process& s) {
    auto [it, fresh] = index.emplace(s, states.size());
    if (fresh) states.push_back(s);
    return std::pair{it->second, fresh};
  };
  intern(normalized(p));
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [id, d] = queue.front();
    queue.pop_front();
    const auto moves = lts.transitions(states[id]);
    if (d == depth) {
      frontier = frontier || !moves.empty();
      continue;
    }
    for (const auto& t : moves) {
      auto [to, fresh] = intern(normalized(t.target));
      edges.push_back({id, t.action, to});
      if (fresh) queue.emplace_back(to, d + 1);
    }
  }

  echo_universe(out, u);
  out << "# mode " << to_string(lts.mode()) << '\n';
  for (std::size_t i = 0; i < states.size(); ++i) out << "state\t" << i << '\t' << pretty(states[i]) << '\n';
  for (const auto& e : edges) out << "edge\t" << e.from << '\t' << to_string(e.action) << '\t' << e.to << '\n';
  out << "# " << states.size() << " states, " << edges.size() << " edges"
      << (frontier ? ", unexplored moves beyond depth " + std::to_string(depth) : std::string()) << '\n';

  if (!dot.empty()) {
    auto f = open_output(dot);
    f << "digraph lts {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < states.size(); ++i) {
      f << "  s" << i << " [label=\"" << dot_escape(pretty(states[i])) << "\"];\n";
    }
    for (const auto& e : edges) {
      f << "  s" << e.from << " -> s" << e.to << " [label=\"" << dot_escape(to_string(e.action)) << "\"];\n";
    }
    f << "}\n";
  }
  return kExitOk;
}

struct CheckArgs {
  std::string left;
  std::string right;
  bool weak = false;
  bool no_upto = false;
  std::size_t max_pairs = CheckOptions{}.max_pairs;
  std::size_t tau_bound = CheckOptions{}.tau_bound;
  std::string witness_file;
};

int cmd_check(const Globals& g, const CheckArgs& a, std::ostream& out) {
  const Universe u = resolve_universe(g);
  const Process p = read_term(a.left, u);
  const Process q = read_term(a.right, u);
  const Lts lts(requested_mode(g).value_or(infer_mode(parallel(p, q))), u);

  CheckOptions options;
  options.upto = a.no_upto ? UpToConfig::plain() : UpToConfig::full();
  options.max_pairs = a.max_pairs;
  options.tau_bound = a.tau_bound;
  const CheckResult r = a.weak ? check_weak(lts, p, q, options) : check_strong(lts, p, q, options);

  echo_universe(out, u);
  out << "# mode " << to_string(lts.mode()) << '\n';
  out << "# game " << (a.weak ? "weak" : "strong") << (a.no_upto ? " plain" : " up-to") << '\n';
  out << "verdict\t" << to_string(r.verdict) << '\n';
  out << "pairs\t" << r.pairs_explored << '\n';
  if (r.verdict == Verdict::proven) out << "witness\t" << r.witness.size() << '\n';
  if (r.verdict == Verdict::distinguished) write_trace(out, r.trace);
  if (r.verdict == Verdict::inconclusive && r.bound_hit) out << "reason\t" << *r.bound_hit << '\n';

  if (!a.witness_file.empty()) {
    auto f = open_output(a.witness_file);
    write_witness(f, r, u);
  }
  switch (r.verdict) {
    case Verdict::proven:
      return kExitOk;
    case Verdict::distinguished:
      return kExitDistinguished;
    case Verdict::inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_laws(const Globals& g, const std::string& only, std::ostream& out) {
  const Universe u = resolve_universe(g);
  LawOptions options;
  options.only = split_list(only);
  const LawReport report = run_laws(u, options);
  write_law_table(out, report, u);
  if (report.passed()) return kExitOk;
  const bool refuted = std::any_of(report.rows.begin(), report.rows.end(), [](const LawRow& row) {
    return !row.pass && row.verdict == Verdict::distinguished;
  });
  return refuted ? kExitDistinguished : kExitInconclusive;
}

struct NetArgs {
  std::string spec;
  std::vector<std::string> injections;
  std::size_t max_states = ExploreOptions{}.max_states;
  std::size_t max_depth = ExploreOptions{}.max_depth;
  std::vector<std::string> queries;
  std::string observe;
  std::size_t steps = 20;
  std::uint64_t seed = 0;
};

std::vector<Injection> injections(const NetArgs& a) {
  std::vector<Injection> in;
  for (const auto& text : a.injections) in.push_back(parse_injection(text));
  return in;
}

int cmd_explore(const Globals& g, const NetArgs& a, std::ostream& out) {
  const Universe u = resolve_universe(g);
  const Process p = read_term(a.spec, u);
  ExploreOptions options;
  options.inputs = injections(a);
  options.max_states = a.max_states;
  options.max_depth = a.max_depth;
  options.mode = requested_mode(g);
  if (!a.observe.empty()) {
    const auto names = split_list(a.observe);
    options.observed = std::set<std::string>(names.begin(), names.end());
  }
  for (const auto& q : a.queries) options.queries.push_back(Query::parse(q));
  const ExploreReport report = explore(p, u, options);
  write_explore_report(out, report, u);

  // Queries are existential: a satisfying path settles them, and only an
  // exhaustive search can refute them.
  const bool unmet = std::any_of(report.queries.begin(), report.queries.end(),
                                 [](const QueryResult& r) { return !r.some; });
  if (!unmet) return kExitOk;
  return report.truncated ? kExitInconclusive : kExitDistinguished;
}

int cmd_simulate(const Globals& g, const NetArgs& a, std::ostream& out) {
  const Universe u = resolve_universe(g);
  const Process p = read_term(a.spec, u);
  const auto in = injections(a);
  const auto events = simulate(p, u, in, a.steps, a.seed, requested_mode(g));
  echo_universe(out, u);
  out << "# seed " << a.seed << '\n';
  write_events(out, events);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Process calculus toolkit: transitions, bisimulation checks, laws and networks", "procnet"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--mode", g.mode, "Rule set")->check(CLI::IsMember({"auto", "pi", "extended"}));
  app.add_option("--values", g.values, "Value universe, e.g. m0,m1 (default: $PROCNET_VALUES or m0,m1)");

  std::string term;
  auto* transitions = app.add_subcommand("transitions", "List the transitions of a term");
  transitions->add_option("TERM", term, "Term or @file")->required();

  std::size_t depth = 3;
  std::string dot;
  auto* lts = app.add_subcommand("lts", "Reachable normalized states up to a depth");
  lts->add_option("TERM", term, "Term or @file")->required();
  lts->add_option("--depth", depth, "Exploration depth")->capture_default_str();
  lts->add_option("--dot", dot, "Write a digraph description to FILE");

  CheckArgs c;
  auto* check = app.add_subcommand("check", "Decide bisimilarity of two terms");
  check->add_option("P", c.left, "Left term or @file")->required();
  check->add_option("Q", c.right, "Right term or @file")->required();
  check->add_flag("--weak", c.weak, "Weak bisimilarity");
  check->add_flag("--no-upto", c.no_upto, "Plain game without up-to reductions");
  check->add_option("--max-pairs", c.max_pairs, "Relation size bound")->capture_default_str();
  check->add_option("--tau-bound", c.tau_bound, "Bound on tau segments of weak answers")->capture_default_str();
  check->add_option("--emit-witness", c.witness_file, "Write the witness relation to FILE");

  std::string only;
  auto* laws = app.add_subcommand("laws", "Run the law catalog");
  laws->add_option("--only", only, "Comma-separated law ids");

  NetArgs n;
  auto* explore_cmd = app.add_subcommand("explore", "Exhaustively explore a network");
  explore_cmd->add_option("SPEC", n.spec, "Network term or @file")->required();
  explore_cmd->add_option("--inject", n.injections, "Input CH=VAL (repeatable)");
  explore_cmd->add_option("--max-states", n.max_states, "Node bound")->capture_default_str();
  explore_cmd->add_option("--max-depth", n.max_depth, "Path length bound")->capture_default_str();
  explore_cmd->add_option("--query", n.queries, "Delivery query (repeatable)");
  explore_cmd->add_option("--observe", n.observe, "Comma-separated observed channels");

  auto* simulate_cmd = app.add_subcommand("simulate", "One seeded random run of a network");
  simulate_cmd->add_option("SPEC", n.spec, "Network term or @file")->required();
  simulate_cmd->add_option("--inject", n.injections, "Input CH=VAL (repeatable)");
  simulate_cmd->add_option("--steps", n.steps, "Maximum number of steps")->capture_default_str();
  simulate_cmd->add_option("--seed", n.seed, "Random seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*transitions) return cmd_transitions(g, term, out);
    if (*lts) return cmd_lts(g, term, depth, dot, out);
    if (*check) return cmd_check(g, c, out);
    if (*laws) return cmd_laws(g, only, out);
    if (*explore_cmd) return cmd_explore(g, n, out);
    if (*simulate_cmd) return cmd_simulate(g, n, out);
  } catch (const Error& e) {
    err << "error: " << e.category() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace procnet
