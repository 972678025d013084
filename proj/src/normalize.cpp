#include "procnet/normalize.hpp"

#include <algorithm>
#include <numeric>

namespace procnet {

std::strong_ordering term_order(const Process& p, const Process& q) {
  if (p.tag() != q.tag()) return p.tag() <=> q.tag();
  switch (p.tag()) {
    case Tag::stop:
      return std::strong_ordering::equal;
    case Tag::send:
      if (auto c = p.channel() <=> q.channel(); c != 0) return c;
      return p.payload() <=> q.payload();
    case Tag::receive:
    case Tag::repeat_receive:
      if (auto c = p.channel() <=> q.channel(); c != 0) return c;
      return term_order(p.body(), q.body());
    case Tag::distribute: {
      if (auto c = p.channel() <=> q.channel(); c != 0) return c;
      const auto a = p.targets();
      const auto b = q.targets();
      return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(),
                                                    b.end());
    }
    case Tag::parallel:
      if (auto c = term_order(p.left(), q.left()); c != 0) return c;
      return term_order(p.right(), q.right());
    case Tag::restrict:
      return term_order(p.body(), q.body());
  }
  return std::strong_ordering::equal;
}

std::vector<Process> parallel_components(const Process& p) {
  std::vector<Process> out;
  std::vector<Process> stack{p};
  while (!stack.empty()) {
    Process cur = stack.back();
    stack.pop_back();
    if (cur.tag() == Tag::parallel) {
      stack.push_back(cur.right());
      stack.push_back(cur.left());
    } else {
      out.push_back(std::move(cur));
    }
  }
  return out;
}

std::size_t restriction_prefix(const Process& p) {
  std::size_t n = 0;
  const Process* cur = &p;
  while (cur->tag() == Tag::restrict) {
    ++n;
    cur = &cur->body();
  }
  return n;
}

namespace {

constexpr std::size_t kMaxPermutedChain = 6;

class Normalizer {
 public:
  explicit Normalizer(std::vector<std::string>* provenance) : prov_(provenance) {}

  Process run(const Process& p) {
    switch (p.tag()) {
      case Tag::stop:
      case Tag::send:
      case Tag::distribute:
        return p;
      case Tag::receive:
      case Tag::repeat_receive: {
        Process b = run(p.body());
        if (b == p.body()) return p;
        note("body");
        return p.tag() == Tag::receive ? receive(p.channel(), std::move(b), p.hint())
                                       : repeat_receive(p.channel(), std::move(b), p.hint());
      }
      case Tag::parallel:
        return run_parallel(p);
      case Tag::restrict:
        return run_restrict(p);
    }
    return p;
  }

 private:
  void note(const char* rule) {
    if (prov_ && (prov_->empty() || prov_->back() != rule)) prov_->push_back(rule);
  }

  static Process quiet(const Process& p) { return Normalizer(nullptr).run(p); }

  Process run_parallel(const Process& p) {
    bool reassociated = false;
    std::vector<Process> leaves;
    collect(p, leaves, reassociated);
    if (reassociated) note("reassociate");

    std::vector<Process> parts;
    for (const auto& leaf : leaves) {
      Process n = run(leaf);
      if (n.is_stop()) {
        note("drop-stop");
      } else if (n.tag() == Tag::parallel) {
        for (auto& c : parallel_components(n)) parts.push_back(std::move(c));
      } else {
        parts.push_back(std::move(n));
      }
    }
    std::vector<Process> sorted = parts;
    std::stable_sort(sorted.begin(), sorted.end(), TermLess{});
    if (!std::equal(sorted.begin(), sorted.end(), parts.begin())) note("sort");
    return compose(sorted);
  }

  static void collect(const Process& p, std::vector<Process>& out, bool& reassociated) {
    if (p.tag() != Tag::parallel) {
      out.push_back(p);
      return;
    }
    if (p.left().tag() == Tag::parallel) reassociated = true;
    collect(p.left(), out, reassociated);
    collect(p.right(), out, reassociated);
  }

  Process run_restrict(const Process& p) {
    // Binder hints, outermost first. Dangling index j at the top of `body`
    // refers to hints[k - 1 - j].
    std::vector<std::string> hints;
    Process cur = p;
    while (cur.tag() == Tag::restrict) {
      hints.push_back(cur.hint());
      cur = cur.body();
    }
    Process body = run(cur);
    while (body.tag() == Tag::restrict) {
      hints.push_back(body.hint());
      body = body.body();
    }

    const auto k = static_cast<std::uint32_t>(hints.size());
    std::vector<std::uint32_t> mapping(k, 0);
    std::vector<std::string> kept;  // innermost first
    std::uint32_t next = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (uses_channel_index(body, j)) {
        mapping[j] = next++;
        kept.push_back(hints[k - 1 - j]);
      }
    }
    if (next < k) {
      note("drop-new");
      body = quiet(remap_channel_indices(body, mapping, next));
    }
    const std::uint32_t live = next;
    if (live == 0) return body;

    if (live > 1 && live <= kMaxPermutedChain) {
      std::vector<std::uint32_t> perm(live);
      std::iota(perm.begin(), perm.end(), 0u);
      Process best = body;
      std::vector<std::uint32_t> best_perm = perm;
      while (std::next_permutation(perm.begin(), perm.end())) {
        Process candidate = quiet(remap_channel_indices(body, perm, live));
        if (term_order(candidate, best) < 0) {
          best = std::move(candidate);
          best_perm = perm;
        }
      }
      if (!(best == body)) {
        note("swap-new");
        std::vector<std::string> moved(live);
        for (std::uint32_t j = 0; j < live; ++j) moved[best_perm[j]] = kept[j];
        kept = std::move(moved);
        body = std::move(best);
      }
    }

    for (std::uint32_t j = 0; j < live; ++j) body = restrict(std::move(body), kept[j]);
    return body;
  }

  std::vector<std::string>* prov_;
};

}  // namespace

NormalForm normalize(const Process& p) {
  NormalForm nf;
  nf.process = Normalizer(&nf.provenance).run(p);
  return nf;
}

Process normalized(const Process& p) { return Normalizer(nullptr).run(p); }

}  // namespace procnet
