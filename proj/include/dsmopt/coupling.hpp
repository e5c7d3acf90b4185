#pragma once

#include <cstdint>
#include <vector>

#include "dsmopt/arch_model.hpp"

namespace dsmopt {

// Per-component tallies feeding the coupling formula. Every cross-boundary
// functional exchange counts as one parameter at each endpoint component:
// data exchanges feed data_in/data_out, control exchanges control_in/
// control_out. fan_out and fan_in count distinct partner components, not
// exchange multiplicity.
struct CouplingTerms {
  ComponentId component = 0;
  std::int64_t data_in = 0;      // incoming data parameters
  std::int64_t control_in = 0;   // incoming control parameters
  std::int64_t data_out = 0;     // outgoing data parameters
  std::int64_t control_out = 0;  // outgoing control parameters
  std::int64_t fan_out = 0;      // distinct components this one sends to
  std::int64_t fan_in = 0;       // distinct components sending to this one

  bool operator==(const CouplingTerms&) const = default;
};

struct ComponentCoupling {
  ComponentId component = 0;
  double value = 0.0;
};

struct ArchitectureCoupling {
  std::vector<ComponentCoupling> per_component;  // the components in the sum
  double total = 0.0;                            // sum of per_component values
  std::int64_t interactions = 0;                 // cross-component exchanges
};

struct CouplingOptions {
  // When false, actor components are dropped from the per-component sum
  // (their exchanges still count toward the system components they touch).
  bool include_actors = true;
};

// Tallies the coupling terms of one component under an allocation.
// Throws AllocationError on an invalid allocation, std::invalid_argument on
// an unknown component id.
CouplingTerms tally_terms(const ArchitectureModel& model, const Allocation& alloc,
                          ComponentId component);

// Coupling value of one component:
//   1 - 1/(data_in + 2*control_in + data_out + 2*control_out + fan_out + fan_in)
// An isolated component (denominator 0) scores 0, the minimal coupling.
double component_coupling(const CouplingTerms& terms);

// Coupling of the whole architecture: the per-component values summed over
// all components (actors included unless options say otherwise), plus the
// count of functional exchanges whose endpoints live in different components.
ArchitectureCoupling architecture_coupling(const ArchitectureModel& model,
                                           const Allocation& alloc,
                                           const CouplingOptions& options = {});

}  // namespace dsmopt
