#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsmopt/arch_model.hpp"
#include "dsmopt/coupling.hpp"

namespace dsmopt {

// Flat, allocation-free coupling evaluation for the optimizer's hot loop.
// Produces bit-identical totals to architecture_coupling(): both iterate
// components in ascending id order and evaluate 1 - 1/denominator on integer
// denominators.
//
// Batch entry points come in two flavors: evaluate_batch_serial is the
// reference loop, evaluate_batch_parallel fans the same loop out across
// OpenMP threads with one scratch buffer per thread. Fitness values land in
// per-index slots, so thread count never changes the result.
class CouplingEvaluator {
 public:
  struct Scratch {
    std::vector<std::int32_t> param_weight;  // per component: d + 2c, both directions
    std::vector<std::int32_t> fan;           // per component: fan_out + fan_in
    std::vector<std::uint8_t> pair_seen;     // component_count^2 flags
  };

  explicit CouplingEvaluator(const ArchitectureModel& model, CouplingOptions options = {});

  Scratch make_scratch() const;

  // Total architecture coupling of one assignment (lower is better).
  double total_coupling(std::span<const ComponentId> assignment, Scratch& scratch) const;

  // Convenience wrapper that owns a scratch internally.
  double total_coupling(const Allocation& alloc) const;

  template <typename ChromosomeAt>
  void evaluate_batch_serial(std::int64_t count, ChromosomeAt chromosome_at,
                             double* fitness_out) const {
    Scratch scratch = make_scratch();
    for (std::int64_t i = 0; i < count; ++i) {
      fitness_out[i] = total_coupling(chromosome_at(i), scratch);
    }
  }

  template <typename ChromosomeAt>
  void evaluate_batch_parallel(std::int64_t count, ChromosomeAt chromosome_at,
                               double* fitness_out) const {
#pragma omp parallel
    {
      Scratch scratch = make_scratch();
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < count; ++i) {
        fitness_out[i] = total_coupling(chromosome_at(i), scratch);
      }
    }
  }

  template <typename ChromosomeAt>
  void evaluate_batch(std::int64_t count, ChromosomeAt chromosome_at, double* fitness_out,
                      bool parallel) const {
    if (parallel) {
      evaluate_batch_parallel(count, chromosome_at, fitness_out);
    } else {
      evaluate_batch_serial(count, chromosome_at, fitness_out);
    }
  }

  std::int32_t component_count() const { return component_count_; }

 private:
  std::int32_t component_count_ = 0;
  std::vector<FunctionId> exchange_source_;
  std::vector<FunctionId> exchange_target_;
  std::vector<std::int32_t> exchange_weight_;   // 1 for data, 2 for control
  std::vector<std::uint8_t> component_in_sum_;  // actors drop out when excluded
};

}  // namespace dsmopt
