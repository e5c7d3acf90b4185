#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmopt/arch_model.hpp"

namespace dsmopt {

// Exhaustive search over every assignment of the free functions to the
// system components. Exact but exponential: S^F candidates for S system
// components and F free functions. Used to certify optimizer results on
// small models.

struct OracleOptions {
  std::int64_t limit = 10'000'000;  // refuse larger search spaces
  bool parallel = true;             // OpenMP over candidate ranges
  bool include_actors = true;       // same switch the optimizer exposes
  // Assignments whose coupling is within tie_eps of the minimum count as
  // optimal. Mathematically equal sums can differ by rounding when the
  // additions happen in a different order.
  double tie_eps = 1e-9;
};

class OracleLimitError : public std::runtime_error {
 public:
  OracleLimitError(std::int64_t candidates, std::int64_t limit)
      : std::runtime_error("search space has " + std::to_string(candidates) +
                           " assignments, above the limit of " + std::to_string(limit)),
        candidates_(candidates),
        limit_(limit) {}

  std::int64_t candidates() const { return candidates_; }
  std::int64_t limit() const { return limit_; }

 private:
  std::int64_t candidates_;
  std::int64_t limit_;
};

struct OracleResult {
  double optimum = 0.0;
  // Every optimal assignment, in lexicographic enumeration order (first free
  // position most significant, component ids ascending).
  std::vector<Allocation> optimal_allocations;
  std::int64_t enumerated = 0;
};

// Throws OracleLimitError when S^F exceeds options.limit (or overflows).
// A model with no free function yields the single fully locked assignment.
OracleResult enumerate_optima(const ArchitectureModel& model, const OracleOptions& options = {});

// Number of assignments enumerate_optima would visit, or -1 when S^F
// overflows std::int64_t.
std::int64_t oracle_search_size(const ArchitectureModel& model);

}  // namespace dsmopt
