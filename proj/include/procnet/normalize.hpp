#pragma once

#include <compare>
#include <string>
#include <vector>

#include "procnet/process.hpp"

namespace procnet {

/// Total structural order: constructor tag first (stop lowest), then the
/// fields of the constructor left to right. Binder hints are ignored.
std::strong_ordering term_order(const Process& p, const Process& q);

struct TermLess {
  bool operator()(const Process& p, const Process& q) const {
    return term_order(p, q) < 0;
  }
};

/// Result of `normalize`: the canonical term and the names of the rewrite
/// rules that fired, in application order.
struct NormalForm {
  Process process;
  std::vector<std::string> provenance;
};

/// Structural-congruence normal form.
///
/// Orients the unit, associativity, commutativity, restriction-swap and
/// unused-restriction laws as rewrites:
///  - "drop-stop"    0 components of a parallel composition are removed
///  - "reassociate"  parallel compositions become right-nested
///  - "sort"         parallel components are sorted by `term_order`
///  - "drop-new"     restrictions whose binder is unused are removed
///  - "swap-new"     an adjacent chain of restrictions is put in the binder
///                   order that makes the body least under `term_order`
///  - "body"         continuations of receivers are normalized in place
///
/// Restrictions are never floated across parallel composition and repeating
/// receivers are never unfolded. Chains longer than six binders keep their
/// source order.
NormalForm normalize(const Process& p);

/// Shorthand for `normalize(p).process`.
Process normalized(const Process& p);

/// Top-level components of a parallel composition (any nesting), in order.
/// A non-parallel term is its own single component.
std::vector<Process> parallel_components(const Process& p);

/// Number of directly nested restrictions at the root of `p`.
std::size_t restriction_prefix(const Process& p);

}  // namespace procnet
