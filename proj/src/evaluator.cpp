#include "dsmopt/evaluator.hpp"

#include <algorithm>

namespace dsmopt {

CouplingEvaluator::CouplingEvaluator(const ArchitectureModel& model, CouplingOptions options)
    : component_count_(model.component_count()) {
  exchange_source_.reserve(model.exchanges.size());
  exchange_target_.reserve(model.exchanges.size());
  exchange_weight_.reserve(model.exchanges.size());
  for (const auto& e : model.exchanges) {
    exchange_source_.push_back(e.source);
    exchange_target_.push_back(e.target);
    exchange_weight_.push_back(e.kind == ExchangeKind::control ? 2 : 1);
  }
  component_in_sum_.resize(static_cast<std::size_t>(component_count_), 1);
  if (!options.include_actors) {
    for (ComponentId c = 0; c < component_count_; ++c) {
      if (model.is_actor(c)) component_in_sum_[static_cast<std::size_t>(c)] = 0;
    }
  }
}

CouplingEvaluator::Scratch CouplingEvaluator::make_scratch() const {
  Scratch s;
  const auto c = static_cast<std::size_t>(component_count_);
  s.param_weight.assign(c, 0);
  s.fan.assign(c, 0);
  s.pair_seen.assign(c * c, 0);
  return s;
}

double CouplingEvaluator::total_coupling(std::span<const ComponentId> assignment,
                                         Scratch& s) const {
  const auto c = static_cast<std::size_t>(component_count_);
  std::fill(s.param_weight.begin(), s.param_weight.end(), 0);
  std::fill(s.fan.begin(), s.fan.end(), 0);
  std::fill(s.pair_seen.begin(), s.pair_seen.end(), 0);

  const std::size_t exchange_count = exchange_source_.size();
  for (std::size_t e = 0; e < exchange_count; ++e) {
    const auto src = static_cast<std::size_t>(assignment[static_cast<std::size_t>(exchange_source_[e])]);
    const auto dst = static_cast<std::size_t>(assignment[static_cast<std::size_t>(exchange_target_[e])]);
    if (src == dst) continue;
    const auto w = exchange_weight_[e];
    s.param_weight[src] += w;
    s.param_weight[dst] += w;
    s.pair_seen[src * c + dst] = 1;
  }
  for (std::size_t a = 0; a < c; ++a) {
    const std::uint8_t* row = s.pair_seen.data() + a * c;
    for (std::size_t b = 0; b < c; ++b) {
      if (row[b]) {
        ++s.fan[a];  // fan-out of a
        ++s.fan[b];  // fan-in of b
      }
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    if (!component_in_sum_[k]) continue;
    const std::int64_t denom = static_cast<std::int64_t>(s.param_weight[k]) + s.fan[k];
    if (denom > 0) total += 1.0 - 1.0 / static_cast<double>(denom);
  }
  return total;
}

double CouplingEvaluator::total_coupling(const Allocation& alloc) const {
  Scratch s = make_scratch();
  return total_coupling(alloc.assignment, s);
}

}  // namespace dsmopt
