#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "folpipe/reasoner/prover.hpp"

namespace folpipe::reasoner {

struct OracleLimits {
  std::size_t max_constants = 6;
  std::size_t max_predicates = 32;
  // The enumeration space is capped at 2^24 assignments; ground atoms fixed
  // by literal facts are propagated first and do not count.
  int max_free_atoms = 24;
};

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Verdict verdict;
  bool premises_inconsistent = false;
};

// Brute-force reference: expands quantifiers over the constants occurring in
// the problem (one fresh constant if there are none) and enumerates truth
// assignments over the ground atoms, with three-valued short-circuiting.
// The conclusion holds in every model of the premises -> True; fails in
// every model -> False; otherwise Uncertain. Unsatisfiable premises yield
// True with the inconsistency flag, matching refutation semantics.
OracleResult grounding_oracle(const std::vector<fol::FormulaPtr>& premises,
                              const fol::FormulaPtr& conclusion,
                              const OracleLimits& limits = {});

}  // namespace folpipe::reasoner
