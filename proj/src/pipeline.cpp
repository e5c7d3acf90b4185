#include "dsmopt/pipeline.hpp"

#include <utility>

#include "json.hpp"

#include "dsmopt/coupling.hpp"
#include "dsmopt/csv.hpp"
#include "dsmopt/dsm.hpp"
#include "dsmopt/fs.hpp"

namespace dsmopt {

std::string write_component_exchanges_csv(const std::vector<ComponentExchange>& exchanges) {
  std::string text =
      csv::join_row({"sourceComponent", "targetComponent", "exchangeCount", "exchangeIds"});
  for (const auto& ce : exchanges) {
    std::string ids;
    for (const auto id : ce.carried_exchanges) {
      if (!ids.empty()) ids += ' ';
      ids += std::to_string(id);
    }
    text += csv::join_row({std::to_string(ce.source_component),
                           std::to_string(ce.target_component),
                           std::to_string(ce.carried_exchanges.size()), ids});
  }
  return text;
}

std::string write_report_json(const ArchitectureModel& model, const std::string& model_name,
                              const RunArtifacts& artifacts, const GaConfig& config,
                              const PipelineOptions& options, const RunReport& run) {
  const auto coupling =
      architecture_coupling(model, run.best.chromosome, {options.include_actors});

  nlohmann::ordered_json doc;
  doc["formatVersion"] = 1;
  doc["model"] = model_name;
  doc["artifacts"] = {
      {"initialMatrix", artifacts.initial_matrix.filename().string()},
      {"optimizedMatrix", artifacts.optimized_matrix.filename().string()},
      {"allocation", artifacts.allocation.filename().string()},
      {"componentExchanges", artifacts.component_exchanges.filename().string()},
  };
  doc["gaParameters"] = {
      {"initialPopulation", config.initial_population},
      {"maxGenerations", config.max_generations},
      {"survivorPct", config.survivor_pct},
      {"parentPct", config.parent_pct},
      {"childMutationPct", config.child_mutation_pct},
      {"geneMutationPct", config.gene_mutation_pct},
      {"seed", config.seed},
  };
  doc["includeActors"] = options.include_actors;

  nlohmann::ordered_json per_component = nlohmann::ordered_json::array();
  for (const auto& cc : coupling.per_component) {
    per_component.push_back({
        {"component", cc.component},
        {"name", model.components[static_cast<std::size_t>(cc.component)].name},
        {"coupling", cc.value},
    });
  }
  doc["result"] = {
      {"totalCoupling", coupling.total},
      {"interactions", coupling.interactions},
      {"perComponent", std::move(per_component)},
      {"generationsRun", run.generations_run},
      {"evaluations", run.evaluations},
      {"termination", termination_name(run.termination)},
      {"bestHistory", run.history},
      {"wallTimeSeconds", run.wall_time_seconds},
  };
  return doc.dump(2) + "\n";
}

RunArtifacts run_pipeline(const std::filesystem::path& model_path,
                          const std::filesystem::path& out_dir, const GaConfig& config,
                          const PipelineOptions& options) {
  const auto model = load_model_file(model_path);
  validate_config(config);

  std::filesystem::create_directories(out_dir);
  const auto stem = model_path.stem().string();
  RunArtifacts artifacts;
  artifacts.initial_matrix = out_dir / (stem + "-initial.csv");
  artifacts.optimized_matrix = out_dir / (stem + "-optimized.csv");
  artifacts.allocation = out_dir / (stem + "-allocation.json");
  artifacts.component_exchanges = out_dir / (stem + "-component-exchanges.csv");
  artifacts.report = out_dir / (stem + "-report.json");

  const auto dsm = build_dsm(model);
  write_matrix_file(artifacts.initial_matrix, dsm);

  OptimizeOptions opt;
  opt.include_actors = options.include_actors;
  opt.parallel = options.parallel;
  const auto run = optimize(model, config, opt);

  MatrixGrouping grouping;
  grouping.allocation = run.best.chromosome;
  grouping.component_names.reserve(model.components.size());
  for (const auto& c : model.components) grouping.component_names.push_back(c.name);
  write_matrix_file(artifacts.optimized_matrix,
                    with_display_order(dsm, cluster_order(model, run.best.chromosome)),
                    grouping);

  write_file_atomic(artifacts.allocation, save_allocation(run.best.chromosome));
  write_file_atomic(artifacts.component_exchanges,
                    write_component_exchanges_csv(
                        derive_component_exchanges(model, run.best.chromosome)));
  write_file_atomic(artifacts.report,
                    write_report_json(model, model_path.filename().string(), artifacts, config,
                                      options, run));
  return artifacts;
}

}  // namespace dsmopt
