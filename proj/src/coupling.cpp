#include "dsmopt/coupling.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace dsmopt {

namespace {

void require_valid(const ArchitectureModel& model, const Allocation& alloc) {
  auto violations = validate_allocation(model, alloc);
  if (!violations.empty()) {
    std::string msg = "invalid allocation (" + std::to_string(violations.size()) + " violation" +
                      (violations.size() == 1 ? "" : "s") + ")";
    for (const auto& v : violations) msg += "\n  - " + v.message;
    throw AllocationError(std::move(msg), std::move(violations));
  }
}

CouplingTerms tally_unchecked(const ArchitectureModel& model, const Allocation& alloc,
                              ComponentId component) {
  CouplingTerms terms;
  terms.component = component;
  std::set<ComponentId> receivers;  // components this one sends to
  std::set<ComponentId> senders;    // components sending into this one
  for (const auto& e : model.exchanges) {
    const auto src = alloc.assignment[static_cast<std::size_t>(e.source)];
    const auto dst = alloc.assignment[static_cast<std::size_t>(e.target)];
    if (src == dst) continue;
    if (src == component) {
      (e.kind == ExchangeKind::data ? terms.data_out : terms.control_out) += 1;
      receivers.insert(dst);
    }
    if (dst == component) {
      (e.kind == ExchangeKind::data ? terms.data_in : terms.control_in) += 1;
      senders.insert(src);
    }
  }
  terms.fan_out = static_cast<std::int64_t>(receivers.size());
  terms.fan_in = static_cast<std::int64_t>(senders.size());
  return terms;
}

}  // namespace

CouplingTerms tally_terms(const ArchitectureModel& model, const Allocation& alloc,
                          ComponentId component) {
  require_valid(model, alloc);
  if (component < 0 || component >= model.component_count()) {
    throw std::invalid_argument("unknown component id " + std::to_string(component));
  }
  return tally_unchecked(model, alloc, component);
}

double component_coupling(const CouplingTerms& terms) {
  const std::int64_t denom = terms.data_in + 2 * terms.control_in + terms.data_out +
                             2 * terms.control_out + terms.fan_out + terms.fan_in;
  if (denom == 0) return 0.0;  // isolated component, minimal coupling
  return 1.0 - 1.0 / static_cast<double>(denom);
}

ArchitectureCoupling architecture_coupling(const ArchitectureModel& model,
                                           const Allocation& alloc,
                                           const CouplingOptions& options) {
  require_valid(model, alloc);
  ArchitectureCoupling result;
  for (ComponentId c = 0; c < model.component_count(); ++c) {
    if (!options.include_actors && model.is_actor(c)) continue;
    const auto terms = tally_unchecked(model, alloc, c);
    const double value = component_coupling(terms);
    result.per_component.push_back({c, value});
    result.total += value;
  }
  for (const auto& e : model.exchanges) {
    const auto src = alloc.assignment[static_cast<std::size_t>(e.source)];
    const auto dst = alloc.assignment[static_cast<std::size_t>(e.target)];
    if (src != dst) ++result.interactions;
  }
  return result;
}

}  // namespace dsmopt
