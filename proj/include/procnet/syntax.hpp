#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "procnet/process.hpp"

namespace procnet {

// ASCII surface syntax.
//
//   P ::= "0" | CH "!" V | CH "?" ID "." P | CH "?*" ID "." P | P "|" P
//       | "new" ID "." P | CH "=>" "[" [CH {"," CH}] "]" | CH "->" CH
//       | CH "<->" CH | "lose" CH | "dup" CH | "duplose" CH | "(" P ")"
//
// `|` is right-associative and binds weakest; every prefix form (including
// `new`) binds tighter, so `new t. P | Q` is `(new t. P) | Q`. Bridges,
// losers, duplicators and duplosers are expanded into distributors while
// parsing. `#` starts a comment that runs to the end of the line.
//
// Identifiers in value position must name an enclosing receiver binder or an
// atom of the universe; identifiers in channel position are free unless bound
// by an enclosing `new`.

Process parse(std::string_view text, const Universe& universe = Universe::standard());

/// Parses a term with binders already in scope (outermost first). The result
/// has dangling indices for those binders, e.g. parse_open("b!x", u, {}, {"x"})
/// is a receiver continuation.
Process parse_open(std::string_view text, const Universe& universe,
                   const std::vector<std::string>& channel_binders,
                   const std::vector<std::string>& value_binders);

/// Comma-separated atom list, e.g. "m0,m1".
Universe parse_universe(std::string_view list);

/// Canonical text with minimal parentheses; parse(pretty(p)) == p for closed
/// p. Dangling indices print as `_t`, `_t1`, ... and `_x`, `_x1`, ...
std::string pretty(const Process& p);

}  // namespace procnet
