#include "dsmopt/ga.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "json.hpp"

#include "dsmopt/evaluator.hpp"
#include "dsmopt/rng.hpp"

namespace dsmopt {

namespace {

// Model facts the operators need, computed once per run.
struct SearchSpace {
  std::vector<FunctionId> free_positions;     // ascending
  std::vector<ComponentId> system_components;  // ascending
  Allocation locked_template;                  // locked genes set, free genes -1
};

SearchSpace make_search_space(const ArchitectureModel& model) {
  SearchSpace space;
  space.free_positions = model.free_function_ids();
  space.system_components = model.system_component_ids();
  space.locked_template.assignment.assign(model.functions.size(), -1);
  for (const auto& f : model.functions) {
    if (f.pre_allocated_to) {
      space.locked_template.assignment[static_cast<std::size_t>(f.id)] = *f.pre_allocated_to;
    }
  }
  if (!space.free_positions.empty() && space.system_components.empty()) {
    throw ModelError("/components", "no system component available for a free function");
  }
  return space;
}

Allocation random_chromosome(const SearchSpace& space, std::mt19937_64& rng) {
  Allocation alloc = space.locked_template;
  const auto n_sys = static_cast<std::int64_t>(space.system_components.size());
  for (const auto pos : space.free_positions) {
    alloc.assignment[static_cast<std::size_t>(pos)] =
        space.system_components[static_cast<std::size_t>(uniform_index(rng, n_sys))];
  }
  return alloc;
}

void evaluate(const CouplingEvaluator& evaluator, std::vector<Individual>& individuals,
              bool parallel) {
  std::vector<double> fitness(individuals.size());
  evaluator.evaluate_batch(
      static_cast<std::int64_t>(individuals.size()),
      [&](std::int64_t i) {
        return std::span<const ComponentId>(
            individuals[static_cast<std::size_t>(i)].chromosome.assignment);
      },
      fitness.data(), parallel);
  for (std::size_t i = 0; i < individuals.size(); ++i) individuals[i].fitness = fitness[i];
}

void check_individuals(const ArchitectureModel& model, const std::vector<Individual>& batch) {
  for (const auto& ind : batch) {
    const auto violations = validate_allocation(model, ind.chromosome);
    if (!violations.empty()) {
      throw std::logic_error("optimizer produced an invalid individual: " +
                             violations.front().message);
    }
  }
}

// fitness ascending, then chromosome lexicographic; stable sort keeps
// insertion order for full ties.
bool fitter(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness < b.fitness;
  return a.chromosome.assignment < b.chromosome.assignment;
}

std::vector<Individual> crossover_impl(const std::vector<Individual>& survivors,
                                       double parent_pct, std::mt19937_64& rng,
                                       const SearchSpace& space) {
  const auto pool =
      frac_floor(parent_pct, static_cast<std::int64_t>(survivors.size()));
  std::vector<Individual> offspring;
  if (pool < 2) return offspring;

  const auto pairing = sample_distinct(rng, static_cast<std::int32_t>(pool),
                                       static_cast<std::int32_t>(pool));
  const auto free_count = static_cast<std::int64_t>(space.free_positions.size());
  offspring.reserve(static_cast<std::size_t>(pool / 2) * 2);
  for (std::int64_t p = 0; p + 1 < pool; p += 2) {
    const auto& first = survivors[static_cast<std::size_t>(pairing[static_cast<std::size_t>(p)])];
    const auto& second =
        survivors[static_cast<std::size_t>(pairing[static_cast<std::size_t>(p + 1)])];
    // A single-point cut needs at least two free genes; below that the
    // children are exact clones of the parents.
    std::int32_t cut = static_cast<std::int32_t>(free_count);
    if (free_count >= 2) {
      cut = 1 + static_cast<std::int32_t>(uniform_index(rng, free_count - 1));
    }
    auto [child_a, child_b] =
        crossover_pair(first.chromosome, second.chromosome, cut, space.free_positions);
    offspring.push_back({std::move(child_a), 0.0});
    offspring.push_back({std::move(child_b), 0.0});
  }
  return offspring;
}

void mutate_impl(std::vector<Individual>& offspring, double child_mutation_pct,
                 double gene_mutation_pct, std::mt19937_64& rng, const SearchSpace& space) {
  const auto n_children = static_cast<std::int64_t>(offspring.size());
  const auto free_count = static_cast<std::int32_t>(space.free_positions.size());
  const auto n_sys = static_cast<std::int64_t>(space.system_components.size());
  const auto mutate_children = frac_ceil(child_mutation_pct, n_children);
  const auto mutate_genes =
      static_cast<std::int32_t>(frac_ceil(gene_mutation_pct, free_count));
  if (mutate_children == 0 || mutate_genes == 0 || free_count == 0) return;

  const auto chosen = sample_distinct(rng, static_cast<std::int32_t>(n_children),
                                      static_cast<std::int32_t>(mutate_children));
  for (const auto child_idx : chosen) {
    auto& chromo = offspring[static_cast<std::size_t>(child_idx)].chromosome;
    const auto positions = sample_distinct(rng, free_count, mutate_genes);
    for (const auto pos_idx : positions) {
      const auto gene = space.free_positions[static_cast<std::size_t>(pos_idx)];
      chromo.assignment[static_cast<std::size_t>(gene)] =
          space.system_components[static_cast<std::size_t>(uniform_index(rng, n_sys))];
    }
  }
}

std::vector<Individual> random_population_impl(const SearchSpace& space, const GaConfig& config,
                                               std::mt19937_64& rng) {
  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(config.initial_population));
  for (std::int64_t i = 0; i < config.initial_population; ++i) {
    population.push_back({random_chromosome(space, rng), 0.0});
  }
  return population;
}

}  // namespace

void validate_config(const GaConfig& config) {
  if (config.initial_population < 3) {
    throw std::invalid_argument("initial_population must be at least 3 (the loop exits below 3)");
  }
  if (config.max_generations < 1) {
    throw std::invalid_argument("max_generations must be positive");
  }
  auto in_range = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!(config.survivor_pct > 0.0 && config.survivor_pct <= 1.0)) {
    throw std::invalid_argument("survivor_pct must be in (0, 1]");
  }
  if (!(config.parent_pct > 0.0 && config.parent_pct <= 1.0)) {
    throw std::invalid_argument("parent_pct must be in (0, 1]");
  }
  if (!in_range(config.child_mutation_pct, 0.0, 1.0)) {
    throw std::invalid_argument("child_mutation_pct must be in [0, 1]");
  }
  if (!in_range(config.gene_mutation_pct, 0.0, 1.0)) {
    throw std::invalid_argument("gene_mutation_pct must be in [0, 1]");
  }
}

GaConfig config_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const char* known[] = {"initial_population", "max_generations",   "survivor_pct",
                                "parent_pct",         "child_mutation_pct", "gene_mutation_pct",
                                "seed"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const bool ok = std::any_of(std::begin(known), std::end(known),
                                [&](const char* k) { return it.key() == k; });
    if (!ok) throw std::invalid_argument("unknown config key \"" + it.key() + "\"");
  }
  GaConfig config;
  auto get_int = [&](const char* key, std::int64_t& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number_integer()) throw std::invalid_argument(std::string(key) + ": expected an integer");
      out = it->get<std::int64_t>();
    }
  };
  auto get_pct = [&](const char* key, double& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number()) throw std::invalid_argument(std::string(key) + ": expected a number");
      out = it->get<double>();
    }
  };
  get_int("initial_population", config.initial_population);
  get_int("max_generations", config.max_generations);
  get_pct("survivor_pct", config.survivor_pct);
  get_pct("parent_pct", config.parent_pct);
  get_pct("child_mutation_pct", config.child_mutation_pct);
  get_pct("gene_mutation_pct", config.gene_mutation_pct);
  if (auto it = doc.find("seed"); it != doc.end()) {
    const bool negative = it->is_number_integer() && !it->is_number_unsigned() &&
                          it->get<std::int64_t>() < 0;
    if (!it->is_number_integer() || negative) {
      throw std::invalid_argument("seed: expected a non-negative integer");
    }
    config.seed = it->get<std::uint64_t>();
  }
  validate_config(config);
  return config;
}

std::string config_to_json(const GaConfig& config) {
  nlohmann::ordered_json doc;
  doc["initial_population"] = config.initial_population;
  doc["max_generations"] = config.max_generations;
  doc["survivor_pct"] = config.survivor_pct;
  doc["parent_pct"] = config.parent_pct;
  doc["child_mutation_pct"] = config.child_mutation_pct;
  doc["gene_mutation_pct"] = config.gene_mutation_pct;
  doc["seed"] = config.seed;
  return doc.dump(2) + "\n";
}

const char* termination_name(Termination t) {
  return t == Termination::max_generations ? "max_generations" : "population_underflow";
}

std::vector<Individual> random_population(const ArchitectureModel& model, const GaConfig& config,
                                          const OptimizeOptions& options) {
  validate_model(model);
  validate_config(config);
  const auto space = make_search_space(model);
  std::mt19937_64 rng(config.seed);
  auto population = random_population_impl(space, config, rng);
  const CouplingEvaluator evaluator(model, {options.include_actors});
  evaluate(evaluator, population, options.parallel);
  return population;
}

std::vector<Individual> select_survivors(std::vector<Individual> population,
                                         double survivor_pct) {
  std::stable_sort(population.begin(), population.end(), fitter);
  const auto keep = frac_ceil(survivor_pct, static_cast<std::int64_t>(population.size()));
  population.resize(static_cast<std::size_t>(keep));
  return population;
}

std::pair<Allocation, Allocation> crossover_pair(const Allocation& a, const Allocation& b,
                                                 std::int32_t cut,
                                                 const std::vector<FunctionId>& free_positions) {
  Allocation child_a = a;
  Allocation child_b = b;
  for (std::size_t i = static_cast<std::size_t>(cut); i < free_positions.size(); ++i) {
    const auto pos = static_cast<std::size_t>(free_positions[i]);
    child_a.assignment[pos] = b.assignment[pos];
    child_b.assignment[pos] = a.assignment[pos];
  }
  return {std::move(child_a), std::move(child_b)};
}

std::vector<Individual> crossover(const std::vector<Individual>& survivors, double parent_pct,
                                  std::mt19937_64& rng, const ArchitectureModel& model) {
  return crossover_impl(survivors, parent_pct, rng, make_search_space(model));
}

void mutate(std::vector<Individual>& offspring, double child_mutation_pct,
            double gene_mutation_pct, std::mt19937_64& rng, const ArchitectureModel& model) {
  mutate_impl(offspring, child_mutation_pct, gene_mutation_pct, rng, make_search_space(model));
}

RunReport optimize(const ArchitectureModel& model, const GaConfig& config,
                   const OptimizeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate_model(model);
  validate_config(config);
  const auto space = make_search_space(model);
  const CouplingEvaluator evaluator(model, {options.include_actors});
  std::mt19937_64 rng(config.seed);

  auto population = random_population_impl(space, config, rng);
  evaluate(evaluator, population, options.parallel);
  if (options.validate_individuals) check_individuals(model, population);

  RunReport report;
  report.seed = config.seed;
  report.evaluations = static_cast<std::int64_t>(population.size());

  Individual best_ever = *std::min_element(population.begin(), population.end(), fitter);
  report.history.push_back(best_ever.fitness);

  auto notify = [&](std::int64_t generation) {
    if (!options.on_generation) return;
    GenerationStats stats;
    stats.generation = generation;
    stats.population_fitness.reserve(population.size());
    for (const auto& ind : population) stats.population_fitness.push_back(ind.fitness);
    stats.best_ever = best_ever.fitness;
    options.on_generation(stats);
  };
  notify(0);

  std::int64_t generation = 0;
  Termination termination = Termination::max_generations;
  while (true) {
    if (generation >= config.max_generations) {
      termination = Termination::max_generations;
      break;
    }
    if (static_cast<std::int64_t>(population.size()) < 3) {
      termination = Termination::population_underflow;
      break;
    }
    auto survivors = select_survivors(std::move(population), config.survivor_pct);
    auto offspring = crossover_impl(survivors, config.parent_pct, rng, space);
    mutate_impl(offspring, config.child_mutation_pct, config.gene_mutation_pct, rng, space);
    evaluate(evaluator, offspring, options.parallel);
    if (options.validate_individuals) check_individuals(model, offspring);
    report.evaluations += static_cast<std::int64_t>(offspring.size());

    population = std::move(survivors);
    population.insert(population.end(), std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
    ++generation;

    const auto& generation_best =
        *std::min_element(population.begin(), population.end(), fitter);
    if (fitter(generation_best, best_ever)) best_ever = generation_best;
    report.history.push_back(best_ever.fitness);
    notify(generation);
  }

  report.best = std::move(best_ever);
  report.generations_run = generation;
  report.termination = termination;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dsmopt
