#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "folpipe/reasoner/clausify.hpp"
#include "folpipe/taxonomy/category.hpp"

namespace folpipe::reasoner {

enum class TruthLabel { True, False, Uncertain };

std::string_view to_string(TruthLabel label);
std::optional<TruthLabel> parse_truth_label(std::string_view s);

struct Verdict {
  enum class State { True, False, Uncertain, Error };

  State state = State::Uncertain;
  std::optional<taxonomy::ErrorCategory> error;  // set when state == Error

  static Verdict of(TruthLabel label);
  bool matches(TruthLabel label) const;
  bool decided() const { return state == State::True || state == State::False; }
};

std::string_view to_string(Verdict::State state);

struct ProofLimits {
  std::uint64_t max_clauses = 10000;  // kept clauses per refutation search
  std::chrono::milliseconds max_time{5000};
  int max_clause_weight = 64;
};

struct ProofResult {
  Verdict verdict;
  bool premises_inconsistent = false;
  bool limit_hit = false;  // some resource limit cut a search short
  std::uint64_t clauses_kept = 0;
  std::uint64_t clauses_generated = 0;
};

// Refutation-based entailment: proves the conclusion, then its negation.
// Both searches always run so the inconsistency flag is stable. Timeouts and
// saturation yield Uncertain; Error is reserved for inputs that fail
// validation (open formulas).
ProofResult prove(const std::vector<fol::FormulaPtr>& premises,
                  const fol::FormulaPtr& conclusion, const ProofLimits& limits = {});

// Single resolution search over a clause set; exposed for tests.
enum class SearchOutcome { Refuted, Saturated, Limited };

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Saturated;
  std::uint64_t kept = 0;
  std::uint64_t generated = 0;
};

SearchResult refute(const std::vector<Clause>& clauses, const ProofLimits& limits,
                    std::chrono::steady_clock::time_point deadline);

// Escape hatch for differential testing against an external Prover9 binary:
// premises and goal in Prover9's ASCII input syntax. Xor is rewritten to
// (a | b) & -(a & b) since Prover9's grammar has no xor operator.
std::string to_prover9_input(const std::vector<fol::FormulaPtr>& premises,
                             const fol::FormulaPtr& conclusion);

}  // namespace folpipe::reasoner
