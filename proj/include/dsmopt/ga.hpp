#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dsmopt/arch_model.hpp"

namespace dsmopt {

// The six search parameters plus the seed. Defaults are a known-good
// configuration for a ~23-function model.
struct GaConfig {
  std::int64_t initial_population = 1000;
  std::int64_t max_generations = 50;
  double survivor_pct = 0.70;        // fraction RETAINED each generation
  double parent_pct = 0.20;          // fraction of survivors entering the mating pool
  double child_mutation_pct = 0.70;  // fraction of offspring mutated
  double gene_mutation_pct = 0.30;   // fraction of free genes redrawn per mutated child
  std::uint64_t seed = 0;

  bool operator==(const GaConfig&) const = default;
};

// Throws std::invalid_argument when a parameter is out of range
// (initial_population >= 3, survivor/parent in (0,1], mutations in [0,1]).
void validate_config(const GaConfig& config);

// JSON config file with the same field names as GaConfig. Missing fields
// keep their defaults; unknown keys are rejected.
GaConfig config_from_json(const std::string& json_text);
std::string config_to_json(const GaConfig& config);

struct Individual {
  Allocation chromosome;
  double fitness = 0.0;  // total coupling, lower is better
};

enum class Termination { max_generations, population_underflow };

const char* termination_name(Termination t);

struct RunReport {
  Individual best;
  std::int64_t generations_run = 0;
  std::int64_t evaluations = 0;
  std::vector<double> history;  // best-ever fitness per generation, entry 0 = initial
  double wall_time_seconds = 0.0;
  Termination termination = Termination::max_generations;
  std::uint64_t seed = 0;
};

// Population snapshot handed to the optional per-generation observer.
struct GenerationStats {
  std::int64_t generation = 0;
  std::vector<double> population_fitness;
  double best_ever = 0.0;
};

struct OptimizeOptions {
  bool include_actors = true;       // actors dropped from the fitness sum when false
  bool parallel = true;             // OpenMP fitness evaluation (result-identical)
  bool validate_individuals = false;  // check every individual against the model
  std::function<void(const GenerationStats&)> on_generation;
};

// Stage 1: initial population. Locked genes take their pre-allocation, free
// genes are drawn uniformly from the system components, fitness is evaluated
// for every individual. Deterministic in config.seed.
std::vector<Individual> random_population(const ArchitectureModel& model, const GaConfig& config,
                                          const OptimizeOptions& options = {});

// Stage 3: rank truncation. Sorts by fitness ascending (ties: lexicographic
// chromosome order, then insertion order) and keeps the best
// ceil(survivor_pct * size).
std::vector<Individual> select_survivors(std::vector<Individual> population, double survivor_pct);

// Stage 4: single-point crossover over the free-gene positions. The mating
// pool is the best floor(parent_pct * survivors.size()) individuals;
// shuffled disjoint pairs produce two children each. Fitness of the children
// is NOT evaluated here. A pool smaller than 2 yields no offspring.
std::vector<Individual> crossover(const std::vector<Individual>& survivors, double parent_pct,
                                  std::mt19937_64& rng, const ArchitectureModel& model);

// Deterministic core of the crossover: children of one pair with the cut
// after `cut` free positions (child A starts with a's genes).
std::pair<Allocation, Allocation> crossover_pair(const Allocation& a, const Allocation& b,
                                                 std::int32_t cut,
                                                 const std::vector<FunctionId>& free_positions);

// Stage 5: mutation. ceil(child_mutation_pct * offspring) children are
// chosen uniformly; each has ceil(gene_mutation_pct * free_gene_count)
// distinct free positions redrawn uniformly from the system components
// (possibly to the same value). Locked genes never change.
void mutate(std::vector<Individual>& offspring, double child_mutation_pct,
            double gene_mutation_pct, std::mt19937_64& rng, const ArchitectureModel& model);

// The full generational loop: evaluate, select survivors, cross over,
// mutate, merge survivors with offspring, repeat. Termination is checked at
// the top of each generation: generation count reaching max_generations or
// the population dropping below 3 individuals. The best-ever individual is
// preserved across generations, so `history` never increases. Identical
// (model, config) inputs produce bit-identical reports up to
// wall_time_seconds, independent of thread count.
RunReport optimize(const ArchitectureModel& model, const GaConfig& config,
                   const OptimizeOptions& options = {});

}  // namespace dsmopt
