#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "procnet/equivalence.hpp"
#include "procnet/process.hpp"
#include "procnet/semantics.hpp"

namespace procnet {

enum class LawKind { structural, idempotency, meta };

struct Law {
  std::string id;
  LawKind kind;
  std::string statement;
};

/// Every law the runner knows, structural laws first, meta laws last.
const std::vector<Law>& law_catalog();

/// A closed instance of a structural or idempotency law.
struct LawInstance {
  std::string law;
  Mode mode;
  Process left;
  Process right;
};

/// Instances of a non-meta law over the fixed parameter corpus. Meta laws
/// have no instances of their own.
std::vector<LawInstance> law_instances(const Law& law, const Universe& universe);

/// Small comm-language terms over channels a, b, c used as process
/// parameters; the pi corpus adds the unfolded forms and two receivers.
std::vector<Process> extended_corpus(const Universe& universe);
std::vector<Process> pi_corpus(const Universe& universe);

struct LawRow {
  std::string law;
  std::string instance;
  Mode mode = Mode::extended;
  Verdict verdict = Verdict::inconclusive;
  std::size_t pairs = 0;
  bool pass = false;
  std::string note;
};

struct LawReport {
  std::vector<LawRow> rows;

  bool passed() const;
  std::size_t failures() const;
};

struct LawOptions {
  /// Law ids to report; empty means all.
  std::vector<std::string> only;
  CheckOptions check;
  /// Sampled premise combinations for each congruence law.
  std::size_t congruence_samples = 25;
  std::uint64_t seed = 2024;
};

/// Checks every selected law instance. Proven instances also have their
/// witness audited. Meta laws draw their premises from the proven
/// structural and idempotency instances (computed even when not selected).
/// Throws ScopeError for an unknown law id.
LawReport run_laws(const Universe& universe, const LawOptions& options = {});

/// Tab-separated table: law, mode, verdict, pairs, status, instance.
void write_law_table(std::ostream& out, const LawReport& report, const Universe& universe);

}  // namespace procnet
