#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsmopt {

using FunctionId = std::int32_t;
using ComponentId = std::int32_t;
using ExchangeId = std::int32_t;

enum class ComponentKind { system, actor };
enum class ExchangeKind { data, control };

// Logical function. Ids are dense (0..N-1): the chromosome index of the
// optimizer is the function id, so positional indexing must hold.
struct FunctionDef {
  FunctionId id = 0;
  std::string name;
  std::optional<ComponentId> pre_allocated_to;  // locked gene when set

  bool operator==(const FunctionDef&) const = default;
};

// Logical component or external actor. Actors may hold pre-allocated
// functions but never receive free ones.
struct ComponentDef {
  ComponentId id = 0;
  std::string name;
  ComponentKind kind = ComponentKind::system;

  bool operator==(const ComponentDef&) const = default;
};

// Directed functional exchange. Parallel exchanges between the same function
// pair are kept as distinct ids; the DSM entry stays binary regardless.
struct FunctionalExchange {
  ExchangeId id = 0;
  FunctionId source = 0;
  FunctionId target = 0;
  ExchangeKind kind = ExchangeKind::data;

  bool operator==(const FunctionalExchange&) const = default;
};

// Tool-neutral logical-architecture model. A validated model has functions
// and components sorted so that functions[i].id == i and
// components[i].id == i. Instances are immutable after construction by
// convention; every operation on them is a pure function.
struct ArchitectureModel {
  std::vector<FunctionDef> functions;
  std::vector<ComponentDef> components;
  std::vector<FunctionalExchange> exchanges;

  std::int32_t function_count() const { return static_cast<std::int32_t>(functions.size()); }
  std::int32_t component_count() const { return static_cast<std::int32_t>(components.size()); }

  bool is_actor(ComponentId id) const {
    return components[static_cast<std::size_t>(id)].kind == ComponentKind::actor;
  }

  // Function ids without a pre-allocation, ascending.
  std::vector<FunctionId> free_function_ids() const;
  // Component ids with kind == system, ascending.
  std::vector<ComponentId> system_component_ids() const;

  bool operator==(const ArchitectureModel&) const = default;
};

// Total map from function id to component id; doubles as the GA chromosome.
struct Allocation {
  std::vector<ComponentId> assignment;

  bool operator==(const Allocation&) const = default;
};

// Inter-component interface derived from an allocation: the functional
// exchanges crossing from source_component into target_component.
struct ComponentExchange {
  ComponentId source_component = 0;
  ComponentId target_component = 0;
  std::vector<ExchangeId> carried_exchanges;  // ascending

  bool operator==(const ComponentExchange&) const = default;
};

// Parse or validation failure; path() points at the offending element,
// JSON-pointer style (e.g. "/functions/2/preAllocatedTo").
class ModelError : public std::runtime_error {
 public:
  ModelError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class AllocationRule {
  component_exists,  // assignment entry must reference an existing component
  locked_gene,       // pre-allocated function must keep its component
  actor_target,      // free functions may not land on an actor
};

struct AllocationViolation {
  FunctionId function = 0;
  AllocationRule rule = AllocationRule::component_exists;
  std::string message;
};

// Thrown by operations whose precondition is a valid allocation.
class AllocationError : public std::runtime_error {
 public:
  AllocationError(std::string message, std::vector<AllocationViolation> violations)
      : std::runtime_error(std::move(message)), violations_(std::move(violations)) {}

  const std::vector<AllocationViolation>& violations() const { return violations_; }

 private:
  std::vector<AllocationViolation> violations_;
};

// Loads a model document (JSON text / file). Throws ModelError on malformed
// JSON, schema deviations (unknown keys included) and invariant violations.
// The returned model is normalized: functions and components sorted by id.
ArchitectureModel load_model(const std::string& json_text);
ArchitectureModel load_model_file(const std::filesystem::path& path);

// Serializes a model back to the document format. load_model(save_model(m))
// reproduces m for any valid model.
std::string save_model(const ArchitectureModel& model);

// Checks every model invariant; throws ModelError naming the element.
void validate_model(const ArchitectureModel& model);

// Allocation documents: {"assignment": [componentId, ...]}.
Allocation load_allocation(const std::string& json_text);
Allocation load_allocation_file(const std::filesystem::path& path);
std::string save_allocation(const Allocation& alloc);

// Empty result iff alloc satisfies every Allocation invariant against model.
// Violations are data, not failures. Throws std::invalid_argument only when
// alloc's length differs from the model's function count.
std::vector<AllocationViolation> validate_allocation(const ArchitectureModel& model,
                                                     const Allocation& alloc);

// One ComponentExchange per ordered component pair (A, B), A != B, that has
// at least one functional exchange from a function in A to a function in B.
// Output is sorted by (source_component, target_component); carried ids
// ascending. Throws AllocationError when alloc is invalid.
std::vector<ComponentExchange> derive_component_exchanges(const ArchitectureModel& model,
                                                          const Allocation& alloc);

}  // namespace dsmopt
