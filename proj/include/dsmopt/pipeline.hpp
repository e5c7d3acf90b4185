#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dsmopt/arch_model.hpp"
#include "dsmopt/ga.hpp"

namespace dsmopt {

// One end-to-end run: load the model, write the function dependency matrix
// as-is, optimize the allocation, write the matrix again clustered by the
// winning allocation, and record the allocation, the component-level
// exchanges, and a machine-readable report.

struct RunArtifacts {
  std::filesystem::path initial_matrix;      // <stem>-initial.csv
  std::filesystem::path optimized_matrix;    // <stem>-optimized.csv
  std::filesystem::path allocation;          // <stem>-allocation.json
  std::filesystem::path component_exchanges; // <stem>-component-exchanges.csv
  std::filesystem::path report;              // <stem>-report.json
};

struct PipelineOptions {
  bool include_actors = true;
  bool parallel = true;
};

// Component exchange table as CSV:
//   sourceComponent,targetComponent,exchangeCount,exchangeIds
// ids space-separated, rows ordered by (source, target). The exchangeCount
// column sums to the architecture's interaction count.
std::string write_component_exchanges_csv(const std::vector<ComponentExchange>& exchanges);

// Report document (formatVersion 1) with the artifact names, the search
// parameters, and the outcome. Artifact paths are recorded relative to the
// output directory. wall_time_seconds is the only field that varies between
// reruns with the same seed.
std::string write_report_json(const ArchitectureModel& model, const std::string& model_name,
                              const RunArtifacts& artifacts, const GaConfig& config,
                              const PipelineOptions& options, const RunReport& run);

// Executes the whole pipeline; all files land in out_dir (created when
// missing), named after the model file's stem. Throws on validation or I/O
// failure; on return every artifact is fully written.
RunArtifacts run_pipeline(const std::filesystem::path& model_path,
                          const std::filesystem::path& out_dir, const GaConfig& config,
                          const PipelineOptions& options = {});

}  // namespace dsmopt
