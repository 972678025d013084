#include "procnet/process.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

#include "procnet/errors.hpp"

namespace procnet {

struct Process::Node {
  Tag tag = Tag::stop;
  Channel channel;
  Value payload;
  std::vector<Channel> targets;
  Process first;   // body, or left operand
  Process second;  // right operand
  std::string hint;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

inline void mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_channel(const Channel& c) {
  std::size_t h = static_cast<std::size_t>(c.kind);
  mix(h, c.is_free() ? std::hash<std::string>{}(c.name) : c.index);
  return h;
}

std::size_t hash_value(const Value& v) {
  std::size_t h = 0x51 + static_cast<std::size_t>(v.kind);
  mix(h, v.is_atom() ? std::hash<std::string>{}(v.name) : v.index);
  return h;
}

}  // namespace

Process make_node(Process::Node node) {
  std::size_t h = static_cast<std::size_t>(node.tag) * 0x100000001b3ULL;
  std::size_t size = 1;
  switch (node.tag) {
    case Tag::stop:
      break;
    case Tag::send:
      mix(h, hash_channel(node.channel));
      mix(h, hash_value(node.payload));
      break;
    case Tag::receive:
    case Tag::repeat_receive:
      mix(h, hash_channel(node.channel));
      mix(h, node.first.hash());
      size += node.first.size();
      break;
    case Tag::distribute:
      mix(h, hash_channel(node.channel));
      mix(h, node.targets.size());
      for (const auto& t : node.targets) mix(h, hash_channel(t));
      break;
    case Tag::parallel:
      mix(h, node.first.hash());
      mix(h, node.second.hash());
      size += node.first.size() + node.second.size();
      break;
    case Tag::restrict:
      mix(h, node.first.hash());
      size += node.first.size();
      break;
  }
  node.hash = h;
  node.size = size;
  return Process(std::make_shared<const Process::Node>(std::move(node)));
}

// The stop process is represented by an empty node pointer.
Process::Process() = default;

Tag Process::tag() const noexcept { return node_ ? node_->tag : Tag::stop; }

const Channel& Process::channel() const {
  assert(tag() == Tag::send || tag() == Tag::receive ||
         tag() == Tag::repeat_receive || tag() == Tag::distribute);
  return node_->channel;
}

const Value& Process::payload() const {
  assert(tag() == Tag::send);
  return node_->payload;
}

const Process& Process::body() const {
  assert(tag() == Tag::receive || tag() == Tag::repeat_receive ||
         tag() == Tag::restrict);
  return node_->first;
}

const Process& Process::left() const {
  assert(tag() == Tag::parallel);
  return node_->first;
}

const Process& Process::right() const {
  assert(tag() == Tag::parallel);
  return node_->second;
}

std::span<const Channel> Process::targets() const {
  assert(tag() == Tag::distribute);
  return node_->targets;
}

const std::string& Process::hint() const {
  static const std::string none;
  return node_ ? node_->hint : none;
}

std::size_t Process::hash() const noexcept { return node_ ? node_->hash : 0; }

std::size_t Process::size() const noexcept { return node_ ? node_->size : 1; }

bool operator==(const Process& a, const Process& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.tag != y.tag || x.size != y.size) return false;
  switch (x.tag) {
    case Tag::stop:
      return true;
    case Tag::send:
      return x.channel == y.channel && x.payload == y.payload;
    case Tag::receive:
    case Tag::repeat_receive:
      return x.channel == y.channel && x.first == y.first;
    case Tag::distribute:
      return x.channel == y.channel && x.targets == y.targets;
    case Tag::parallel:
      return x.first == y.first && x.second == y.second;
    case Tag::restrict:
      return x.first == y.first;
  }
  return false;
}

Process stop() { return Process(); }

Process send(Channel channel, Value payload) {
  Process::Node n;
  n.tag = Tag::send;
  n.channel = std::move(channel);
  n.payload = std::move(payload);
  return make_node(std::move(n));
}

Process receive(Channel channel, Process body, std::string hint) {
  Process::Node n;
  n.tag = Tag::receive;
  n.channel = std::move(channel);
  n.first = std::move(body);
  n.hint = std::move(hint);
  return make_node(std::move(n));
}

Process repeat_receive(Channel channel, Process body, std::string hint) {
  Process::Node n;
  n.tag = Tag::repeat_receive;
  n.channel = std::move(channel);
  n.first = std::move(body);
  n.hint = std::move(hint);
  return make_node(std::move(n));
}

Process parallel(Process left, Process right) {
  Process::Node n;
  n.tag = Tag::parallel;
  n.first = std::move(left);
  n.second = std::move(right);
  return make_node(std::move(n));
}

Process restrict(Process body, std::string hint) {
  Process::Node n;
  n.tag = Tag::restrict;
  n.first = std::move(body);
  n.hint = std::move(hint);
  return make_node(std::move(n));
}

Process distribute(Channel source, std::vector<Channel> targets) {
  Process::Node n;
  n.tag = Tag::distribute;
  n.channel = std::move(source);
  n.targets = std::move(targets);
  return make_node(std::move(n));
}

Process compose(std::span<const Process> parts) {
  if (parts.empty()) return stop();
  Process acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = parallel(parts[i], acc);
  return acc;
}

Universe::Universe(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  if (atoms_.empty()) throw ScopeError("value universe must be nonempty");
}

Universe Universe::standard() { return Universe({"m0", "m1"}); }

bool Universe::contains(const std::string& atom) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

namespace {

// Generic bottom-up rewrite of channel and value occurrences. The callbacks
// receive the number of channel / value binders crossed so far.
struct Rewriter {
  std::function<Channel(const Channel&, std::uint32_t)> on_channel;
  std::function<Value(const Value&, std::uint32_t)> on_value;

  Process run(const Process& p, std::uint32_t cdepth, std::uint32_t vdepth) const {
    switch (p.tag()) {
      case Tag::stop:
        return p;
      case Tag::send: {
        Channel c = on_channel ? on_channel(p.channel(), cdepth) : p.channel();
        Value v = on_value ? on_value(p.payload(), vdepth) : p.payload();
        if (c == p.channel() && v == p.payload()) return p;
        return send(std::move(c), std::move(v));
      }
      case Tag::receive:
      case Tag::repeat_receive: {
        Channel c = on_channel ? on_channel(p.channel(), cdepth) : p.channel();
        Process b = run(p.body(), cdepth, vdepth + 1);
        if (c == p.channel() && b == p.body()) return p;
        return p.tag() == Tag::receive ? receive(std::move(c), std::move(b), p.hint())
                                       : repeat_receive(std::move(c), std::move(b), p.hint());
      }
      case Tag::distribute: {
        if (!on_channel) return p;
        Channel c = on_channel(p.channel(), cdepth);
        std::vector<Channel> ts;
        ts.reserve(p.targets().size());
        for (const auto& t : p.targets()) ts.push_back(on_channel(t, cdepth));
        return distribute(std::move(c), std::move(ts));
      }
      case Tag::parallel: {
        Process l = run(p.left(), cdepth, vdepth);
        Process r = run(p.right(), cdepth, vdepth);
        if (l == p.left() && r == p.right()) return p;
        return parallel(std::move(l), std::move(r));
      }
      case Tag::restrict: {
        Process b = run(p.body(), cdepth + 1, vdepth);
        if (b == p.body()) return p;
        return restrict(std::move(b), p.hint());
      }
    }
    return p;
  }
};

template <typename Visit>
void visit_channels(const Process& p, std::uint32_t cdepth, const Visit& visit) {
  switch (p.tag()) {
    case Tag::stop:
      return;
    case Tag::send:
      visit(p.channel(), cdepth);
      return;
    case Tag::receive:
    case Tag::repeat_receive:
      visit(p.channel(), cdepth);
      visit_channels(p.body(), cdepth, visit);
      return;
    case Tag::distribute:
      visit(p.channel(), cdepth);
      for (const auto& t : p.targets()) visit(t, cdepth);
      return;
    case Tag::parallel:
      visit_channels(p.left(), cdepth, visit);
      visit_channels(p.right(), cdepth, visit);
      return;
    case Tag::restrict:
      visit_channels(p.body(), cdepth + 1, visit);
      return;
  }
}

}  // namespace

Process instantiate_value(const Process& body, const Value& value) {
  if (!value.is_atom()) throw ScopeError("instantiate_value expects an atom");
  Rewriter rw;
  rw.on_value = [&](const Value& v, std::uint32_t depth) -> Value {
    if (v.is_atom() || v.index < depth) return v;
    if (v.index == depth) return value;
    return Value::var(v.index - 1);
  };
  return rw.run(body, 0, 0);
}

Process instantiate_channel(const Process& body, const std::string& name) {
  if (free_channels(body).contains(name)) {
    throw FreshnessViolation("channel '" + name + "' already occurs free");
  }
  Rewriter rw;
  rw.on_channel = [&](const Channel& c, std::uint32_t depth) -> Channel {
    if (c.is_free() || c.index < depth) return c;
    if (c.index == depth) return Channel::named(name);
    return Channel::bound(c.index - 1);
  };
  return rw.run(body, 0, 0);
}

Process abstract_channel(const Process& p, const std::string& name) {
  Rewriter rw;
  rw.on_channel = [&](const Channel& c, std::uint32_t depth) -> Channel {
    if (c.is_free()) return c.name == name ? Channel::bound(depth) : c;
    if (c.index < depth) return c;
    return Channel::bound(c.index + 1);
  };
  return rw.run(p, 0, 0);
}

Process lower_unused_channel(const Process& body) {
  assert(!uses_channel_index(body, 0));
  Rewriter rw;
  rw.on_channel = [](const Channel& c, std::uint32_t depth) -> Channel {
    if (c.is_free() || c.index <= depth) return c;
    return Channel::bound(c.index - 1);
  };
  return rw.run(body, 0, 0);
}

Process remap_channel_indices(const Process& p,
                              std::span<const std::uint32_t> mapping,
                              std::uint32_t offset) {
  const auto k = static_cast<std::uint32_t>(mapping.size());
  Rewriter rw;
  rw.on_channel = [&](const Channel& c, std::uint32_t depth) -> Channel {
    if (c.is_free() || c.index < depth) return c;
    const std::uint32_t rel = c.index - depth;
    if (rel < k) return Channel::bound(depth + mapping[rel]);
    return Channel::bound(depth + rel - k + offset);
  };
  return rw.run(p, 0, 0);
}

bool uses_channel_index(const Process& p, std::uint32_t index) {
  bool used = false;
  visit_channels(p, 0, [&](const Channel& c, std::uint32_t depth) {
    if (!c.is_free() && c.index == depth + index) used = true;
  });
  return used;
}

std::set<std::string> free_channels(const Process& p) {
  std::set<std::string> out;
  visit_channels(p, 0, [&](const Channel& c, std::uint32_t) {
    if (c.is_free()) out.insert(c.name);
  });
  return out;
}

namespace {

void collect_atoms(const Process& p, std::set<std::string>& out) {
  switch (p.tag()) {
    case Tag::send:
      if (p.payload().is_atom()) out.insert(p.payload().name);
      return;
    case Tag::receive:
    case Tag::repeat_receive:
    case Tag::restrict:
      collect_atoms(p.body(), out);
      return;
    case Tag::parallel:
      collect_atoms(p.left(), out);
      collect_atoms(p.right(), out);
      return;
    default:
      return;
  }
}

}  // namespace

std::set<std::string> value_atoms(const Process& p) {
  std::set<std::string> out;
  collect_atoms(p, out);
  return out;
}

bool is_well_scoped(const Process& p, std::uint32_t cdepth, std::uint32_t vdepth) {
  auto channel_ok = [&](const Channel& c) {
    return c.is_free() ? !c.name.empty() : c.index < cdepth;
  };
  switch (p.tag()) {
    case Tag::stop:
      return true;
    case Tag::send:
      return channel_ok(p.channel()) &&
             (p.payload().is_atom() ? !p.payload().name.empty()
                                    : p.payload().index < vdepth);
    case Tag::receive:
    case Tag::repeat_receive:
      return channel_ok(p.channel()) && is_well_scoped(p.body(), cdepth, vdepth + 1);
    case Tag::distribute:
      return channel_ok(p.channel()) &&
             std::all_of(p.targets().begin(), p.targets().end(), channel_ok);
    case Tag::parallel:
      return is_well_scoped(p.left(), cdepth, vdepth) &&
             is_well_scoped(p.right(), cdepth, vdepth);
    case Tag::restrict:
      return is_well_scoped(p.body(), cdepth + 1, vdepth);
  }
  return false;
}

bool contains_tag(const Process& p, Tag tag) {
  if (p.tag() == tag) return true;
  switch (p.tag()) {
    case Tag::receive:
    case Tag::repeat_receive:
    case Tag::restrict:
      return contains_tag(p.body(), tag);
    case Tag::parallel:
      return contains_tag(p.left(), tag) || contains_tag(p.right(), tag);
    default:
      return false;
  }
}

}  // namespace procnet
