#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsmopt/arch_model.hpp"
#include "dsmopt/csv.hpp"
#include "dsmopt/fs.hpp"
#include "dsmopt/ga.hpp"
#include "dsmopt/oracle.hpp"
#include "dsmopt/pipeline.hpp"

namespace {

// Search parameter flags shared by run and bench. Explicit flags override a
// --config file, which overrides the built-in defaults.
struct GaFlags {
  dsmopt::GaConfig values;
  CLI::Option* population = nullptr;
  CLI::Option* max_generations = nullptr;
  CLI::Option* survivor = nullptr;
  CLI::Option* parent = nullptr;
  CLI::Option* child_mutation = nullptr;
  CLI::Option* gene_mutation = nullptr;
  CLI::Option* seed = nullptr;
};

void add_ga_flags(CLI::App& cmd, GaFlags& flags) {
  flags.population =
      cmd.add_option("--population", flags.values.initial_population, "Initial population size");
  flags.max_generations =
      cmd.add_option("--max-generations", flags.values.max_generations, "Generation limit");
  flags.survivor = cmd.add_option("--survivor-pct", flags.values.survivor_pct,
                                  "Fraction of the population retained each generation");
  flags.parent = cmd.add_option("--parent-pct", flags.values.parent_pct,
                                "Fraction of survivors entering the mating pool");
  flags.child_mutation = cmd.add_option("--child-mutation-pct", flags.values.child_mutation_pct,
                                        "Fraction of offspring mutated");
  flags.gene_mutation = cmd.add_option("--gene-mutation-pct", flags.values.gene_mutation_pct,
                                       "Fraction of free genes redrawn per mutated child");
  flags.seed = cmd.add_option("--seed", flags.values.seed, "Random seed");
}

dsmopt::GaConfig resolve_config(const GaFlags& flags, const std::string& config_path) {
  dsmopt::GaConfig config;
  if (!config_path.empty()) {
    config = dsmopt::config_from_json(dsmopt::read_file(config_path));
  }
  if (flags.population->count() > 0) config.initial_population = flags.values.initial_population;
  if (flags.max_generations->count() > 0) config.max_generations = flags.values.max_generations;
  if (flags.survivor->count() > 0) config.survivor_pct = flags.values.survivor_pct;
  if (flags.parent->count() > 0) config.parent_pct = flags.values.parent_pct;
  if (flags.child_mutation->count() > 0) {
    config.child_mutation_pct = flags.values.child_mutation_pct;
  }
  if (flags.gene_mutation->count() > 0) config.gene_mutation_pct = flags.values.gene_mutation_pct;
  if (flags.seed->count() > 0) config.seed = flags.values.seed;
  dsmopt::validate_config(config);
  return config;
}

int cmd_run(const std::string& model_path, const std::string& out_dir, const GaFlags& flags,
            const std::string& config_path, bool exclude_actors, bool serial) {
  const auto config = resolve_config(flags, config_path);
  dsmopt::PipelineOptions options;
  options.include_actors = !exclude_actors;
  options.parallel = !serial;
  const auto artifacts = dsmopt::run_pipeline(model_path, out_dir, config, options);
  std::cout << "wrote " << artifacts.initial_matrix.string() << "\n"
            << "wrote " << artifacts.optimized_matrix.string() << "\n"
            << "wrote " << artifacts.allocation.string() << "\n"
            << "wrote " << artifacts.component_exchanges.string() << "\n"
            << "wrote " << artifacts.report.string() << "\n";
  return 0;
}

int cmd_oracle(const std::string& model_path, std::int64_t limit, bool exclude_actors,
               bool serial) {
  const auto model = dsmopt::load_model_file(model_path);
  dsmopt::OracleOptions options;
  options.limit = limit;
  options.include_actors = !exclude_actors;
  options.parallel = !serial;
  const auto result = dsmopt::enumerate_optima(model, options);

  nlohmann::ordered_json doc;
  doc["optimum"] = result.optimum;
  doc["enumerated"] = result.enumerated;
  doc["optimalCount"] = result.optimal_allocations.size();
  auto allocations = nlohmann::ordered_json::array();
  for (const auto& alloc : result.optimal_allocations) allocations.push_back(alloc.assignment);
  doc["optimalAllocations"] = std::move(allocations);
  std::cout << doc.dump(2) << "\n";
  return 0;
}

// A sweep file maps search parameter names to candidate lists, plus "seeds".
// Absent parameters stay at their defaults; every list must be non-empty.
struct Sweep {
  std::vector<std::int64_t> population{1000};
  std::vector<std::int64_t> max_generations{50};
  std::vector<double> survivor{0.70};
  std::vector<double> parent{0.20};
  std::vector<double> child_mutation{0.70};
  std::vector<double> gene_mutation{0.30};
  std::vector<std::uint64_t> seeds{0};
};

Sweep load_sweep(const std::string& path) {
  const auto doc = nlohmann::json::parse(dsmopt::read_file(path));
  if (!doc.is_object()) throw std::runtime_error("sweep file must be a JSON object");
  Sweep sweep;
  auto take = [&](const char* key, auto& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_array() || it->empty()) {
        throw std::runtime_error(std::string("sweep key \"") + key +
                                 "\" must be a non-empty array");
      }
      out = it->get<std::decay_t<decltype(out)>>();
    }
  };
  take("initial_population", sweep.population);
  take("max_generations", sweep.max_generations);
  take("survivor_pct", sweep.survivor);
  take("parent_pct", sweep.parent);
  take("child_mutation_pct", sweep.child_mutation);
  take("gene_mutation_pct", sweep.gene_mutation);
  take("seeds", sweep.seeds);
  static const char* known[] = {"initial_population", "max_generations",   "survivor_pct",
                                "parent_pct",         "child_mutation_pct", "gene_mutation_pct",
                                "seeds"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::runtime_error("unknown sweep key \"" + it.key() + "\"");
  }
  return sweep;
}

int cmd_bench(const std::string& model_path, const std::string& sweep_path,
              const std::string& out_path, bool exclude_actors, bool serial) {
  const auto model = dsmopt::load_model_file(model_path);
  const auto sweep = load_sweep(sweep_path);

  std::string csv = dsmopt::csv::join_row({"population", "maxGenerations", "survivorPct",
                                           "parentPct", "childMutationPct", "geneMutationPct",
                                           "seed", "bestCoupling", "generationsRun",
                                           "evaluations", "wallTimeSeconds"});
  dsmopt::OptimizeOptions options;
  options.include_actors = !exclude_actors;
  options.parallel = !serial;

  for (const auto population : sweep.population) {
    for (const auto generations : sweep.max_generations) {
      for (const auto survivor : sweep.survivor) {
        for (const auto parent : sweep.parent) {
          for (const auto child_mutation : sweep.child_mutation) {
            for (const auto gene_mutation : sweep.gene_mutation) {
              for (const auto seed : sweep.seeds) {
                dsmopt::GaConfig config;
                config.initial_population = population;
                config.max_generations = generations;
                config.survivor_pct = survivor;
                config.parent_pct = parent;
                config.child_mutation_pct = child_mutation;
                config.gene_mutation_pct = gene_mutation;
                config.seed = seed;
                dsmopt::validate_config(config);
                const auto run = dsmopt::optimize(model, config, options);
                csv += dsmopt::csv::join_row(
                    {std::to_string(population), std::to_string(generations),
                     std::to_string(survivor), std::to_string(parent),
                     std::to_string(child_mutation), std::to_string(gene_mutation),
                     std::to_string(seed), std::to_string(run.best.fitness),
                     std::to_string(run.generations_run), std::to_string(run.evaluations),
                     std::to_string(run.wall_time_seconds)});
              }
            }
          }
        }
      }
    }
  }

  if (out_path.empty()) {
    std::cout << csv;
  } else {
    dsmopt::write_file_atomic(out_path, csv);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allocates logical functions to components, minimizing coupling"};
  app.require_subcommand(1);

  std::string model_path;
  std::string out_dir = ".";
  std::string config_path;
  std::string sweep_path;
  std::string out_path;
  std::int64_t limit = 10'000'000;
  bool exclude_actors = false;
  bool serial = false;
  GaFlags flags;

  auto* run = app.add_subcommand("run", "Optimize a model and write all artifacts");
  run->add_option("--model", model_path, "Architecture model JSON")->required();
  run->add_option("--out-dir", out_dir, "Output directory (created when missing)");
  run->add_option("--config", config_path, "JSON file with search parameters");
  add_ga_flags(*run, flags);
  run->add_flag("--exclude-actors", exclude_actors,
                "Drop actor components from the coupling sum");
  run->add_flag("--serial", serial, "Disable parallel fitness evaluation");

  auto* oracle = app.add_subcommand("oracle", "Enumerate every allocation of a small model");
  oracle->add_option("--model", model_path, "Architecture model JSON")->required();
  oracle->add_option("--limit", limit, "Largest search space to enumerate");
  oracle->add_flag("--exclude-actors", exclude_actors,
                   "Drop actor components from the coupling sum");
  oracle->add_flag("--serial", serial, "Disable parallel enumeration");

  auto* bench = app.add_subcommand("bench", "Sweep search parameters and report outcomes");
  bench->add_option("--model", model_path, "Architecture model JSON")->required();
  bench->add_option("--sweep", sweep_path, "JSON file with parameter grids")->required();
  bench->add_option("--out", out_path, "Write the CSV here instead of stdout");
  bench->add_flag("--exclude-actors", exclude_actors,
                  "Drop actor components from the coupling sum");
  bench->add_flag("--serial", serial, "Disable parallel fitness evaluation");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(model_path, out_dir, flags, config_path, exclude_actors, serial);
    }
    if (oracle->parsed()) return cmd_oracle(model_path, limit, exclude_actors, serial);
    if (bench->parsed()) return cmd_bench(model_path, sweep_path, out_path, exclude_actors, serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
