#include "dsmopt/oracle.hpp"

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dsmopt/evaluator.hpp"

namespace dsmopt {

namespace {

// Decode candidate index -> assignment. The first free position is the most
// significant digit, so ascending indices enumerate assignments in
// lexicographic order of their free genes.
void decode(std::int64_t index, const std::vector<FunctionId>& free_positions,
            const std::vector<ComponentId>& systems, std::vector<ComponentId>& assignment) {
  const auto base = static_cast<std::int64_t>(systems.size());
  for (std::size_t i = free_positions.size(); i-- > 0;) {
    assignment[static_cast<std::size_t>(free_positions[i])] =
        systems[static_cast<std::size_t>(index % base)];
    index /= base;
  }
}

struct ChunkResult {
  double min = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> argmin;  // candidate indices within tie_eps, ascending
};

// Scan [begin, end), keeping the indices within tie_eps of the chunk minimum.
// Two passes would need re-decoding, so the tie set is pruned as the minimum
// drops instead.
ChunkResult scan_range(std::int64_t begin, std::int64_t end, const CouplingEvaluator& evaluator,
                       const std::vector<FunctionId>& free_positions,
                       const std::vector<ComponentId>& systems,
                       const std::vector<ComponentId>& locked, double tie_eps) {
  ChunkResult result;
  auto scratch = evaluator.make_scratch();
  std::vector<ComponentId> assignment = locked;
  for (std::int64_t idx = begin; idx < end; ++idx) {
    decode(idx, free_positions, systems, assignment);
    const double value = evaluator.total_coupling(assignment, scratch);
    if (value < result.min - tie_eps) {
      result.min = value;
      result.argmin.clear();
      result.argmin.push_back(idx);
    } else if (value <= result.min + tie_eps) {
      if (value < result.min) result.min = value;
      result.argmin.push_back(idx);
    }
  }
  return result;
}

}  // namespace

std::int64_t oracle_search_size(const ArchitectureModel& model) {
  const auto free_count = model.free_function_ids().size();
  const auto base = static_cast<std::int64_t>(model.system_component_ids().size());
  if (free_count == 0) return 1;
  std::int64_t total = 1;
  const auto cap = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < free_count; ++i) {
    if (base != 0 && total > cap / base) return -1;
    total *= base;
  }
  return total;
}

OracleResult enumerate_optima(const ArchitectureModel& model, const OracleOptions& options) {
  validate_model(model);
  const auto free_positions = model.free_function_ids();
  const auto systems = model.system_component_ids();
  if (!free_positions.empty() && systems.empty()) {
    throw ModelError("/components", "no system component available for a free function");
  }

  const auto total = oracle_search_size(model);
  if (total < 0 || total > options.limit) {
    throw OracleLimitError(total, options.limit);
  }

  std::vector<ComponentId> locked(model.functions.size(), -1);
  for (const auto& f : model.functions) {
    if (f.pre_allocated_to) locked[static_cast<std::size_t>(f.id)] = *f.pre_allocated_to;
  }

  const CouplingEvaluator evaluator(model, {options.include_actors});

  std::vector<ChunkResult> chunks;
  if (options.parallel) {
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    const auto n_chunks = std::max<std::int64_t>(1, std::min<std::int64_t>(threads, total));
    chunks.resize(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      const auto begin = total * c / n_chunks;
      const auto end = total * (c + 1) / n_chunks;
      chunks[static_cast<std::size_t>(c)] =
          scan_range(begin, end, evaluator, free_positions, systems, locked, options.tie_eps);
    }
  } else {
    chunks.push_back(
        scan_range(0, total, evaluator, free_positions, systems, locked, options.tie_eps));
  }

  // Merge in chunk order. Chunk boundaries depend on thread count, but the
  // global minimum and the surviving index set do not: every candidate is
  // evaluated with the same scratch-free arithmetic.
  double global_min = std::numeric_limits<double>::infinity();
  for (const auto& chunk : chunks) global_min = std::min(global_min, chunk.min);

  std::vector<std::int64_t> winners;
  for (const auto& chunk : chunks) {
    for (const auto idx : chunk.argmin) winners.push_back(idx);
  }
  // Per-chunk pruning used the chunk-local minimum; re-filter against the
  // global one and restore enumeration order.
  std::sort(winners.begin(), winners.end());

  OracleResult result;
  result.optimum = global_min;
  result.enumerated = total;
  std::vector<ComponentId> assignment = locked;
  auto scratch = evaluator.make_scratch();
  for (const auto idx : winners) {
    decode(idx, free_positions, systems, assignment);
    if (evaluator.total_coupling(assignment, scratch) <= global_min + options.tie_eps) {
      result.optimal_allocations.push_back(Allocation{assignment});
    }
  }
  return result;
}

}  // namespace dsmopt
