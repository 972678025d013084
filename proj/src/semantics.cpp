#include "procnet/semantics.hpp"

#include <algorithm>
#include <unordered_set>

#include "procnet/errors.hpp"
#include "procnet/normalize.hpp"

namespace procnet {

std::string to_string(Mode mode) { return mode == Mode::pi ? "pi" : "extended"; }

std::string to_string(const Action& action) {
  switch (action.kind) {
    case Action::Kind::send:
      return action.channel + "!" + action.value;
    case Action::Kind::receive:
      return action.channel + "?" + action.value;
    case Action::Kind::tau:
      return "tau";
  }
  return "tau";
}

void Lts::check_mode(const Process& p) const {
  if (mode_ == Mode::pi && contains_tag(p, Tag::distribute)) {
    throw ModeViolation("distributors must be unfolded before using the pi rules");
  }
  if (mode_ == Mode::extended &&
      (contains_tag(p, Tag::receive) || contains_tag(p, Tag::repeat_receive))) {
    throw ModeViolation("receivers are outside the extended communication language");
  }
}

namespace {

bool transition_less(const Transition& a, const Transition& b) {
  if (a.action != b.action) return a.action < b.action;
  return term_order(a.target, b.target) < 0;
}

bool transition_same(const Transition& a, const Transition& b) {
  return a.action == b.action && a.target == b.target;
}

void sort_unique(std::vector<Transition>& ts) {
  std::sort(ts.begin(), ts.end(), transition_less);
  ts.erase(std::unique(ts.begin(), ts.end(), transition_same), ts.end());
}

}  // namespace

void Lts::enumerate(const Process& p, unsigned fresh_depth, std::vector<Transition>& out) const {
  switch (p.tag()) {
    case Tag::stop:
      return;
    case Tag::send:
      out.push_back({p, Action::sending(p.channel().name, p.payload().name), stop()});
      return;
    case Tag::receive:
      for (const auto& v : universe_.atoms()) {
        out.push_back({p, Action::receiving(p.channel().name, v),
                       instantiate_value(p.body(), Value::atom(v))});
      }
      return;
    case Tag::repeat_receive:
      for (const auto& v : universe_.atoms()) {
        out.push_back({p, Action::receiving(p.channel().name, v),
                       parallel(instantiate_value(p.body(), Value::atom(v)), p)});
      }
      return;
    case Tag::distribute:
      for (const auto& v : universe_.atoms()) {
        std::vector<Process> row;
        for (const auto& b : p.targets()) row.push_back(send(b, Value::atom(v)));
        row.push_back(stop());
        out.push_back({p, Action::receiving(p.channel().name, v), parallel(compose(row), p)});
      }
      return;
    case Tag::parallel: {
      std::vector<Transition> ls;
      std::vector<Transition> rs;
      enumerate(p.left(), fresh_depth, ls);
      enumerate(p.right(), fresh_depth, rs);
      for (const auto& t : ls) out.push_back({p, t.action, parallel(t.target, p.right())});
      for (const auto& t : rs) out.push_back({p, t.action, parallel(p.left(), t.target)});
      for (const auto& l : ls) {
        if (l.action.is_tau()) continue;
        for (const auto& r : rs) {
          if (r.action.is_tau() || r.action.kind == l.action.kind) continue;
          if (l.action.channel == r.action.channel && l.action.value == r.action.value) {
            out.push_back({p, Action::tau(), parallel(l.target, r.target)});
          }
        }
      }
      return;
    }
    case Tag::restrict: {
      // '%' cannot appear in parsed identifiers, so this name is fresh.
      const std::string local = "%" + std::to_string(fresh_depth);
      std::vector<Transition> inner;
      enumerate(instantiate_channel(p.body(), local), fresh_depth + 1, inner);
      for (const auto& t : inner) {
        if (t.action.mentions(local)) continue;
        out.push_back({p, t.action, restrict(abstract_channel(t.target, local), p.hint())});
      }
      return;
    }
  }
}

std::vector<Transition> Lts::transitions(const Process& p) const {
  check_mode(p);
  if (!is_closed(p)) throw ScopeError("transitions require a closed process");
  std::vector<Transition> out;
  enumerate(p, 0, out);
  sort_unique(out);
  return out;
}

TauClosure Lts::tau_closure(const Process& p, std::size_t bound, bool require_exact) const {
  TauClosure result;
  std::unordered_set<Process, ProcessHash> seen;
  Process start = normalized(p);
  seen.insert(start);
  result.states.push_back(start);
  std::vector<Process> frontier{start};
  for (std::size_t step = 0; !frontier.empty(); ++step) {
    std::vector<Process> next;
    for (const auto& s : frontier) {
      for (const auto& t : transitions(s)) {
        if (!t.action.is_tau()) continue;
        Process n = normalized(t.target);
        if (seen.contains(n)) continue;
        if (step == bound) {
          result.truncated = true;
          break;
        }
        seen.insert(n);
        result.states.push_back(n);
        next.push_back(std::move(n));
      }
      if (result.truncated) break;
    }
    if (step == bound) break;
    frontier = std::move(next);
  }
  if (result.truncated && require_exact) {
    throw BoundExceeded("tau closure still growing after " + std::to_string(bound) + " steps");
  }
  return result;
}

WeakTransitions Lts::weak_transitions(const Process& p, std::size_t bound,
                                      bool require_exact) const {
  WeakTransitions result;
  TauClosure pre = tau_closure(p, bound, require_exact);
  result.truncated = pre.truncated;
  for (const auto& s : pre.states) result.transitions.push_back({p, Action::tau(), s});
  for (const auto& s : pre.states) {
    for (const auto& t : transitions(s)) {
      if (t.action.is_tau()) continue;
      TauClosure post = tau_closure(t.target, bound, require_exact);
      result.truncated = result.truncated || post.truncated;
      for (const auto& u : post.states) result.transitions.push_back({p, t.action, u});
    }
  }
  sort_unique(result.transitions);
  return result;
}

Process unfold_comm(const Process& p) {
  switch (p.tag()) {
    case Tag::stop:
    case Tag::send:
      return p;
    case Tag::receive:
      return receive(p.channel(), unfold_comm(p.body()), p.hint());
    case Tag::repeat_receive:
      return repeat_receive(p.channel(), unfold_comm(p.body()), p.hint());
    case Tag::distribute: {
      std::vector<Process> row;
      for (const auto& b : p.targets()) row.push_back(send(b, Value::var(0)));
      row.push_back(stop());
      return repeat_receive(p.channel(), compose(row), "x");
    }
    case Tag::parallel:
      return parallel(unfold_comm(p.left()), unfold_comm(p.right()));
    case Tag::restrict:
      return restrict(unfold_comm(p.body()), p.hint());
  }
  return p;
}

Mode infer_mode(const Process& p) {
  const bool receivers = contains_tag(p, Tag::receive) || contains_tag(p, Tag::repeat_receive);
  const bool distributors = contains_tag(p, Tag::distribute);
  if (receivers && distributors) {
    throw ModeViolation("term mixes receivers and distributors; unfold the distributors first");
  }
  return receivers ? Mode::pi : Mode::extended;
}

}  // namespace procnet
