#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace procnet {

/// A channel occurrence: either a free name or a de Bruijn index pointing at
/// an enclosing restriction. Index 0 is the innermost restriction.
struct Channel {
  enum class Kind : std::uint8_t { free, bound };

  Kind kind = Kind::free;
  std::string name;
  std::uint32_t index = 0;

  static Channel named(std::string name) {
    return Channel{Kind::free, std::move(name), 0};
  }
  static Channel bound(std::uint32_t index) {
    return Channel{Kind::bound, {}, index};
  }

  bool is_free() const noexcept { return kind == Kind::free; }

  friend bool operator==(const Channel& a, const Channel& b) noexcept {
    return a.kind == b.kind && a.index == b.index && a.name == b.name;
  }
  // Free names sort before bound indices.
  friend std::strong_ordering operator<=>(const Channel& a, const Channel& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    if (a.kind == Kind::free) return a.name.compare(b.name) <=> 0;
    return a.index <=> b.index;
  }
};

/// A value occurrence: an atom of the declared universe, or a de Bruijn index
/// pointing at an enclosing receiver.
struct Value {
  enum class Kind : std::uint8_t { atom, var };

  Kind kind = Kind::atom;
  std::string name;
  std::uint32_t index = 0;

  static Value atom(std::string name) {
    return Value{Kind::atom, std::move(name), 0};
  }
  static Value var(std::uint32_t index) { return Value{Kind::var, {}, index}; }

  bool is_atom() const noexcept { return kind == Kind::atom; }

  friend bool operator==(const Value& a, const Value& b) noexcept {
    return a.kind == b.kind && a.index == b.index && a.name == b.name;
  }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    if (a.kind == Kind::atom) return a.name.compare(b.name) <=> 0;
    return a.index <=> b.index;
  }
};

/// Constructor tags, listed in the order used by `term_order`.
enum class Tag : std::uint8_t {
  stop,
  send,
  receive,
  repeat_receive,
  distribute,
  parallel,
  restrict,
};

/// Immutable process term with structural sharing.
///
/// Binders carry a display hint (the name written in source text); hints do
/// not take part in equality, hashing or ordering.
class Process {
 public:
  struct Node;

  /// The stop process.
  Process();

  Tag tag() const noexcept;
  bool is_stop() const noexcept { return tag() == Tag::stop; }

  /// Subject channel of a sender, receiver, repeating receiver or distributor.
  const Channel& channel() const;
  /// Payload of a sender.
  const Value& payload() const;
  /// Continuation of a receiver / repeating receiver, or body of a restriction.
  const Process& body() const;
  const Process& left() const;
  const Process& right() const;
  /// Target list of a distributor.
  std::span<const Channel> targets() const;
  const std::string& hint() const;

  std::size_t hash() const noexcept;
  /// Number of constructor nodes.
  std::size_t size() const noexcept;

  friend bool operator==(const Process& a, const Process& b) noexcept;

 private:
  explicit Process(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend Process make_node(Node node);

  std::shared_ptr<const Node> node_;
};

struct ProcessHash {
  std::size_t operator()(const Process& p) const noexcept { return p.hash(); }
};

Process stop();
Process send(Channel channel, Value payload);
Process receive(Channel channel, Process body, std::string hint = "x");
Process repeat_receive(Channel channel, Process body, std::string hint = "x");
Process parallel(Process left, Process right);
Process restrict(Process body, std::string hint = "t");
Process distribute(Channel source, std::vector<Channel> targets);

/// Right-nested parallel composition of `parts`; `stop()` when empty.
Process compose(std::span<const Process> parts);

/// The finite set of value atoms receivers range over.
class Universe {
 public:
  /// Atoms are deduplicated and sorted; the list must be nonempty.
  explicit Universe(std::vector<std::string> atoms);

  /// The default universe {m0, m1}.
  static Universe standard();

  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool contains(const std::string& atom) const;

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  std::vector<std::string> atoms_;
};

/// Replaces the value variable bound by an enclosing receiver (index 0 at the
/// top of `body`) with `value`, which must be an atom.
Process instantiate_value(const Process& body, const Value& value);

/// Replaces the channel bound by an enclosing restriction (index 0 at the top
/// of `body`) with the free channel `name`. Throws FreshnessViolation when
/// `name` already occurs free in `body`.
Process instantiate_channel(const Process& body, const std::string& name);

/// Inverse of instantiate_channel: every free occurrence of `name` becomes
/// index 0 and existing dangling indices are shifted up.
Process abstract_channel(const Process& p, const std::string& name);

/// Drops an unused restriction binder: indices above the top binder shift
/// down by one. Precondition: index 0 is not referenced at the top of `body`.
Process lower_unused_channel(const Process& body);

/// Renames dangling channel indices at the top of `p`: index i becomes
/// mapping[i] for i < mapping.size(); larger indices become
/// i - mapping.size() + offset.
Process remap_channel_indices(const Process& p,
                              std::span<const std::uint32_t> mapping,
                              std::uint32_t offset);

/// True when dangling channel index `index` (relative to the top of `p`) is
/// referenced.
bool uses_channel_index(const Process& p, std::uint32_t index);

std::set<std::string> free_channels(const Process& p);
std::set<std::string> value_atoms(const Process& p);

/// True when every bound index of `p` is captured by an enclosing binder,
/// given `channel_depth` / `value_depth` binders outside `p`.
bool is_well_scoped(const Process& p, std::uint32_t channel_depth = 0,
                    std::uint32_t value_depth = 0);

inline bool is_closed(const Process& p) { return is_well_scoped(p, 0, 0); }

/// Whether any subterm carries the given tag.
bool contains_tag(const Process& p, Tag tag);

}  // namespace procnet
