#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

#include "dsmopt/coupling.hpp"
#include "dsmopt/ga.hpp"
#include "dsmopt/rng.hpp"
#include "support/instance_gen.hpp"

using namespace dsmopt;

namespace {

// n functions (optionally with locks), k system components, no exchanges.
ArchitectureModel plain_model(std::int32_t functions, std::int32_t systems,
                              std::vector<std::pair<FunctionId, ComponentId>> locks = {}) {
  ArchitectureModel model;
  for (std::int32_t f = 0; f < functions; ++f) {
    model.functions.push_back({f, "f" + std::to_string(f), std::nullopt});
  }
  for (const auto& [f, c] : locks) {
    model.functions[static_cast<std::size_t>(f)].pre_allocated_to = c;
  }
  for (std::int32_t c = 0; c < systems; ++c) {
    model.components.push_back({c, "s" + std::to_string(c), ComponentKind::system});
  }
  return model;
}

Individual make_individual(std::vector<ComponentId> genes, double fitness) {
  Individual ind;
  ind.chromosome.assignment = std::move(genes);
  ind.fitness = fitness;
  return ind;
}

}  // namespace

TEST_CASE("out-of-range search parameters are rejected") {
  GaConfig good;
  validate_config(good);  // defaults pass

  auto expect_reject = [](auto&& tweak) {
    GaConfig config;
    tweak(config);
    CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  };
  expect_reject([](GaConfig& c) { c.initial_population = 2; });
  expect_reject([](GaConfig& c) { c.initial_population = 0; });
  expect_reject([](GaConfig& c) { c.max_generations = 0; });
  expect_reject([](GaConfig& c) { c.survivor_pct = 0.0; });
  expect_reject([](GaConfig& c) { c.survivor_pct = 1.2; });
  expect_reject([](GaConfig& c) { c.parent_pct = 0.0; });
  expect_reject([](GaConfig& c) { c.parent_pct = -0.3; });
  expect_reject([](GaConfig& c) { c.child_mutation_pct = -0.1; });
  expect_reject([](GaConfig& c) { c.child_mutation_pct = 1.1; });
  expect_reject([](GaConfig& c) { c.gene_mutation_pct = 1.5; });
}

TEST_CASE("config JSON: empty object keeps every default") {
  CHECK(config_from_json("{}") == GaConfig{});
}

TEST_CASE("config JSON: partial overrides keep the other defaults") {
  const auto config = config_from_json(R"({"initial_population": 40, "seed": 9})");
  GaConfig expected;
  expected.initial_population = 40;
  expected.seed = 9;
  CHECK(config == expected);
}

TEST_CASE("config JSON round-trips through its writer") {
  GaConfig config;
  config.initial_population = 2500;
  config.max_generations = 200;
  config.survivor_pct = 0.70;
  config.parent_pct = 0.30;
  config.child_mutation_pct = 0.40;
  config.gene_mutation_pct = 0.70;
  config.seed = 12345;
  CHECK(config_from_json(config_to_json(config)) == config);
}

TEST_CASE("config JSON: malformed documents are rejected") {
  CHECK_THROWS_AS(config_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"population": 10})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"survivor_pct": "high"})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"initial_population": 10.5})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"seed": -1})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"initial_population": 2})"), std::invalid_argument);
}

TEST_CASE("initial population honors locks, systems, and the seed") {
  std::mt19937_64 rng(31);
  const auto model = testgen::random_instance(rng);
  GaConfig config;
  config.initial_population = 40;
  config.seed = 1234;

  const auto population = random_population(model, config);
  REQUIRE(population.size() == 40);

  const std::set<ComponentId> systems = [&] {
    std::set<ComponentId> s;
    for (const auto c : model.system_component_ids()) s.insert(c);
    return s;
  }();
  for (const auto& ind : population) {
    REQUIRE(ind.chromosome.assignment.size() == model.functions.size());
    for (const auto& f : model.functions) {
      const auto gene = ind.chromosome.assignment[static_cast<std::size_t>(f.id)];
      if (f.pre_allocated_to) {
        CHECK(gene == *f.pre_allocated_to);
      } else {
        CHECK(systems.count(gene) == 1);
      }
    }
    CHECK(ind.fitness == architecture_coupling(model, ind.chromosome).total);
  }

  const auto replay = random_population(model, config);
  REQUIRE(replay.size() == population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    CHECK(replay[i].chromosome.assignment == population[i].chromosome.assignment);
    CHECK(replay[i].fitness == population[i].fitness);
  }
}

TEST_CASE("different seeds draw different initial populations") {
  const auto model = plain_model(8, 3);
  GaConfig config;
  config.initial_population = 30;
  config.seed = 1;
  const auto a = random_population(model, config);
  config.seed = 2;
  const auto b = random_population(model, config);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].chromosome.assignment != b[i].chromosome.assignment) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("population generation rejects a model whose free functions have nowhere to go") {
  ArchitectureModel model;
  model.functions.push_back({0, "f0", std::nullopt});
  model.components.push_back({0, "user", ComponentKind::actor});
  CHECK_THROWS_AS(random_population(model, GaConfig{}), ModelError);
}

TEST_CASE("survivor selection ranks by fitness, then chromosome order") {
  std::vector<Individual> population;
  population.push_back(make_individual({1, 1}, 0.75));
  population.push_back(make_individual({1, 0}, 0.50));
  population.push_back(make_individual({0, 1}, 0.50));
  population.push_back(make_individual({0, 0}, 0.25));

  const auto ranked = select_survivors(population, 1.0);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].chromosome.assignment == std::vector<ComponentId>{0, 0});
  CHECK(ranked[1].chromosome.assignment == std::vector<ComponentId>{0, 1});  // tie broken lexically
  CHECK(ranked[2].chromosome.assignment == std::vector<ComponentId>{1, 0});
  CHECK(ranked[3].chromosome.assignment == std::vector<ComponentId>{1, 1});

  const auto kept = select_survivors(population, 0.5);
  REQUIRE(kept.size() == 2);  // ceil(0.5 * 4)
  CHECK(kept[0].fitness == 0.25);
  CHECK(kept[1].chromosome.assignment == std::vector<ComponentId>{0, 1});

  CHECK(select_survivors(population, 0.70).size() == 3);  // ceil(2.8)
  CHECK(select_survivors(std::vector<Individual>{}, 0.5).empty());
}

TEST_CASE("single-point crossover swaps the tail of the free genes") {
  Allocation a{{0, 0, 0}};
  Allocation b{{1, 1, 1}};
  const std::vector<FunctionId> all_free{0, 1, 2};
  const auto [child_a, child_b] = crossover_pair(a, b, 1, all_free);
  CHECK(child_a.assignment == std::vector<ComponentId>{0, 1, 1});
  CHECK(child_b.assignment == std::vector<ComponentId>{1, 0, 0});

  const auto [head_a, head_b] = crossover_pair(a, b, 2, all_free);
  CHECK(head_a.assignment == std::vector<ComponentId>{0, 0, 1});
  CHECK(head_b.assignment == std::vector<ComponentId>{1, 1, 0});
}

TEST_CASE("crossover cut indexes free positions, skipping locked genes") {
  // Gene 1 is locked (value 9 in both parents); free positions are 0, 2, 3.
  Allocation a{{0, 9, 0, 0}};
  Allocation b{{1, 9, 1, 1}};
  const std::vector<FunctionId> free_positions{0, 2, 3};
  const auto [child_a, child_b] = crossover_pair(a, b, 2, free_positions);
  CHECK(child_a.assignment == std::vector<ComponentId>{0, 9, 0, 1});
  CHECK(child_b.assignment == std::vector<ComponentId>{1, 9, 1, 0});
}

TEST_CASE("mating pool size controls how many offspring appear") {
  const auto model = plain_model(4, 2);
  std::vector<Individual> survivors;
  for (int i = 0; i < 10; ++i) {
    survivors.push_back(make_individual({0, 0, 0, 0}, 0.0));
  }
  std::mt19937_64 rng(3);

  // floor(0.5 * 10) = 5 parents -> 2 disjoint pairs -> 4 children.
  CHECK(crossover(survivors, 0.5, rng, model).size() == 4);
  // floor(0.1 * 10) = 1 parent: nobody to mate with.
  CHECK(crossover(survivors, 0.1, rng, model).empty());
  // A lone survivor can never mate, even at 100%.
  std::vector<Individual> lone(1, make_individual({0, 0, 0, 0}, 0.0));
  CHECK(crossover(lone, 1.0, rng, model).empty());
}

TEST_CASE("only the leading survivors enter the mating pool") {
  const auto model = plain_model(4, 2);
  std::vector<Individual> survivors;
  for (int i = 0; i < 3; ++i) survivors.push_back(make_individual({0, 0, 0, 0}, 0.1));
  for (int i = 0; i < 3; ++i) survivors.push_back(make_individual({1, 1, 1, 1}, 0.9));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    // Pool = floor(0.5 * 6) = 3, all drawn from the leading all-zero block,
    // so children can only ever carry zeros.
    const auto offspring = crossover(survivors, 0.5, rng, model);
    REQUIRE(offspring.size() == 2);
    for (const auto& child : offspring) {
      CHECK(child.chromosome.assignment == std::vector<ComponentId>{0, 0, 0, 0});
    }
  }
}

TEST_CASE("crossover with a single free gene clones the parents") {
  const auto model = plain_model(3, 2, {{0, 1}, {1, 0}});  // only gene 2 is free
  std::vector<Individual> survivors;
  survivors.push_back(make_individual({1, 0, 0}, 0.0));
  survivors.push_back(make_individual({1, 0, 1}, 0.0));
  std::mt19937_64 rng(5);
  const auto offspring = crossover(survivors, 1.0, rng, model);
  REQUIRE(offspring.size() == 2);
  std::vector<std::vector<ComponentId>> genes{offspring[0].chromosome.assignment,
                                              offspring[1].chromosome.assignment};
  std::sort(genes.begin(), genes.end());
  CHECK(genes[0] == std::vector<ComponentId>{1, 0, 0});
  CHECK(genes[1] == std::vector<ComponentId>{1, 0, 1});
}

TEST_CASE("mutation touches the configured number of children and genes") {
  const auto model = plain_model(4, 3, {{1, 2}});  // free genes: 0, 2, 3
  std::mt19937_64 rng(17);

  std::int64_t max_changed_children = 0;
  std::int64_t max_changed_genes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Individual> offspring;
    for (int i = 0; i < 10; ++i) offspring.push_back(make_individual({0, 2, 0, 0}, 0.0));
    const auto before = offspring;

    // ceil(0.25 * 10) = 3 children; ceil(0.5 * 3 free genes) = 2 genes each.
    mutate(offspring, 0.25, 0.5, rng, model);

    std::int64_t changed_children = 0;
    for (std::size_t i = 0; i < offspring.size(); ++i) {
      const auto& now = offspring[i].chromosome.assignment;
      const auto& was = before[i].chromosome.assignment;
      CHECK(now[1] == 2);  // locked gene untouched
      std::int64_t changed_genes = 0;
      for (std::size_t g = 0; g < now.size(); ++g) {
        if (now[g] != was[g]) ++changed_genes;
      }
      if (changed_genes > 0) ++changed_children;
      CHECK(changed_genes <= 2);
      max_changed_genes = std::max(max_changed_genes, changed_genes);
      for (const auto gene : now) {
        CHECK((gene == 0 || gene == 1 || gene == 2));
      }
    }
    CHECK(changed_children <= 3);
    max_changed_children = std::max(max_changed_children, changed_children);
  }
  // Redraws may land on the old value, but with 3 systems and 60 trials the
  // configured maxima are reached essentially surely.
  CHECK(max_changed_children == 3);
  CHECK(max_changed_genes == 2);
}

TEST_CASE("mutation is a no-op at zero rates") {
  const auto model = plain_model(4, 3);
  std::mt19937_64 rng(2);
  std::vector<Individual> offspring;
  for (int i = 0; i < 6; ++i) offspring.push_back(make_individual({0, 1, 2, 0}, 0.0));
  const auto before = offspring;

  mutate(offspring, 0.0, 0.9, rng, model);
  for (std::size_t i = 0; i < offspring.size(); ++i) {
    CHECK(offspring[i].chromosome.assignment == before[i].chromosome.assignment);
  }
  mutate(offspring, 0.9, 0.0, rng, model);
  for (std::size_t i = 0; i < offspring.size(); ++i) {
    CHECK(offspring[i].chromosome.assignment == before[i].chromosome.assignment);
  }
}

TEST_CASE("a fully locked model optimizes to its only allocation") {
  auto model = plain_model(3, 2, {{0, 1}, {1, 0}, {2, 1}});
  model.exchanges.push_back({0, 0, 1, ExchangeKind::data});
  model.exchanges.push_back({1, 1, 2, ExchangeKind::control});

  GaConfig config;
  config.initial_population = 5;
  config.max_generations = 3;
  const auto report = optimize(model, config);

  CHECK(report.best.chromosome.assignment == std::vector<ComponentId>{1, 0, 1});
  CHECK(report.best.fitness == architecture_coupling(model, report.best.chromosome).total);
  for (const auto h : report.history) CHECK(h == report.best.fitness);
}

TEST_CASE("identical inputs reproduce the run bit for bit") {
  std::mt19937_64 rng(91);
  const auto model = testgen::random_instance(rng);
  GaConfig config;
  config.initial_population = 30;
  config.max_generations = 8;
  config.seed = 77;

  OptimizeOptions serial;
  serial.parallel = false;
  const auto a = optimize(model, config);
  const auto b = optimize(model, config);
  const auto c = optimize(model, config, serial);
  for (const auto* other : {&b, &c}) {
    CHECK(a.best.chromosome.assignment == other->best.chromosome.assignment);
    CHECK(a.best.fitness == other->best.fitness);
    CHECK(a.history == other->history);
    CHECK(a.evaluations == other->evaluations);
    CHECK(a.generations_run == other->generations_run);
    CHECK(a.termination == other->termination);
    CHECK(a.seed == config.seed);
  }
}

TEST_CASE("the loop stops when the population falls below three") {
  const auto model = plain_model(5, 2);
  GaConfig config;
  config.initial_population = 3;
  config.max_generations = 50;
  config.survivor_pct = 0.34;  // keeps ceil(1.02) = 2 of 3
  config.parent_pct = 0.4;     // pool floor(0.8) = 0: no offspring

  const auto report = optimize(model, config);
  CHECK(report.termination == Termination::population_underflow);
  CHECK(report.generations_run == 1);
  CHECK(report.history.size() == 2);
  CHECK(report.evaluations == 3);
  CHECK(termination_name(report.termination) == std::string("population_underflow"));
}

TEST_CASE("the loop stops at the generation budget") {
  const auto model = plain_model(5, 2);
  GaConfig config;
  config.initial_population = 8;
  config.max_generations = 2;
  config.survivor_pct = 1.0;
  config.parent_pct = 1.0;
  config.child_mutation_pct = 0.0;
  config.gene_mutation_pct = 0.0;

  std::vector<std::size_t> population_sizes;
  OptimizeOptions options;
  options.on_generation = [&](const GenerationStats& stats) {
    population_sizes.push_back(stats.population_fitness.size());
  };
  const auto report = optimize(model, config, options);

  CHECK(report.termination == Termination::max_generations);
  CHECK(report.generations_run == 2);
  CHECK(report.history.size() == 3);
  CHECK(termination_name(report.termination) == std::string("max_generations"));
  // Full retention and a full mating pool double the population each round.
  CHECK(population_sizes == std::vector<std::size_t>{8, 16, 32});
  CHECK(report.evaluations == 8 + 8 + 16);
}

TEST_CASE("retaining every survivor never loses a fitness value") {
  std::mt19937_64 rng(314);
  const auto model = testgen::random_instance(rng);
  GaConfig config;
  config.initial_population = 10;
  config.max_generations = 4;
  config.survivor_pct = 1.0;
  config.parent_pct = 1.0;
  config.child_mutation_pct = 0.5;
  config.gene_mutation_pct = 0.5;

  std::vector<std::vector<double>> generations;
  OptimizeOptions options;
  options.on_generation = [&](const GenerationStats& stats) {
    auto sorted = stats.population_fitness;
    std::sort(sorted.begin(), sorted.end());
    generations.push_back(std::move(sorted));
  };
  const auto report = optimize(model, config, options);
  REQUIRE(generations.size() == static_cast<std::size_t>(report.generations_run) + 1);

  for (std::size_t g = 1; g < generations.size(); ++g) {
    const auto& prev = generations[g - 1];
    const auto& next = generations[g];
    REQUIRE(next.size() >= prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      // The previous population is a sub-multiset of the next one, so the
      // i-th best can only improve or stay.
      CHECK(next[i] <= prev[i]);
    }
  }
}

TEST_CASE("best-ever history never increases") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = testgen::random_instance(rng);
    GaConfig config;
    config.initial_population = 20;
    config.max_generations = 10;
    config.seed = static_cast<std::uint64_t>(trial);
    const auto report = optimize(model, config);
    REQUIRE(!report.history.empty());
    for (std::size_t g = 1; g < report.history.size(); ++g) {
      CHECK(report.history[g] <= report.history[g - 1]);
    }
    CHECK(report.best.fitness == report.history.back());
  }
}

TEST_CASE("history starts at the initial population's best") {
  std::mt19937_64 rng(555);
  const auto model = testgen::random_instance(rng);
  GaConfig config;
  config.initial_population = 25;
  config.max_generations = 3;
  config.seed = 42;

  const auto population = random_population(model, config);
  double best = population.front().fitness;
  for (const auto& ind : population) best = std::min(best, ind.fitness);

  const auto report = optimize(model, config);
  CHECK(report.history.front() == best);
}

TEST_CASE("every individual stays valid throughout random runs") {
  std::mt19937_64 rng(161803);
  for (int trial = 0; trial < 15; ++trial) {
    const auto model = testgen::random_instance(rng);
    GaConfig config;
    config.initial_population = 15;
    config.max_generations = 6;
    config.seed = static_cast<std::uint64_t>(trial * 13 + 1);
    OptimizeOptions options;
    options.validate_individuals = true;  // throws std::logic_error on a bad chromosome
    options.include_actors = (trial % 2 == 0);
    const auto report = optimize(model, config, options);
    CHECK(validate_allocation(model, report.best.chromosome).empty());
  }
}
