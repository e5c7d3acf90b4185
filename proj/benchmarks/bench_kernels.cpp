// Times the two parallel kernels against their serial reference loops on a
// synthetic instance and checks that both produce identical results.
//
//   bench_kernels [functions] [components] [population] [repeats]

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "dsmopt/arch_model.hpp"
#include "dsmopt/evaluator.hpp"
#include "dsmopt/oracle.hpp"
#include "dsmopt/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

dsmopt::ArchitectureModel synthetic_model(std::int32_t functions, std::int32_t components,
                                          std::int32_t exchanges, std::mt19937_64& rng) {
  dsmopt::ArchitectureModel model;
  for (std::int32_t i = 0; i < functions; ++i) {
    model.functions.push_back({i, "Function " + std::to_string(i), std::nullopt});
  }
  for (std::int32_t i = 0; i < components; ++i) {
    model.components.push_back(
        {i, "Component " + std::to_string(i), dsmopt::ComponentKind::system});
  }
  std::int32_t id = 0;
  while (id < exchanges) {
    const auto src = static_cast<dsmopt::FunctionId>(dsmopt::uniform_index(rng, functions));
    const auto dst = static_cast<dsmopt::FunctionId>(dsmopt::uniform_index(rng, functions));
    if (src == dst) continue;
    const auto kind =
        dsmopt::uniform_index(rng, 4) == 0 ? dsmopt::ExchangeKind::control : dsmopt::ExchangeKind::data;
    model.exchanges.push_back({id, src, dst, kind});
    ++id;
  }
  dsmopt::validate_model(model);
  return model;
}

}  // namespace

int main(int argc, char** argv) {
  const std::int32_t functions = argc > 1 ? std::atoi(argv[1]) : 60;
  const std::int32_t components = argc > 2 ? std::atoi(argv[2]) : 15;
  const std::int64_t population = argc > 3 ? std::atoll(argv[3]) : 20000;
  const int repeats = argc > 4 ? std::atoi(argv[4]) : 5;

  std::mt19937_64 rng(42);
  const auto model = synthetic_model(functions, components, functions * 2, rng);
  const dsmopt::CouplingEvaluator evaluator(model);

  std::vector<std::vector<dsmopt::ComponentId>> chromosomes(
      static_cast<std::size_t>(population));
  for (auto& chromo : chromosomes) {
    chromo.resize(static_cast<std::size_t>(functions));
    for (auto& gene : chromo) {
      gene = static_cast<dsmopt::ComponentId>(dsmopt::uniform_index(rng, components));
    }
  }
  auto chromosome_at = [&](std::int64_t i) {
    return std::span<const dsmopt::ComponentId>(chromosomes[static_cast<std::size_t>(i)]);
  };

  std::printf("fitness evaluation: %d functions, %d components, %lld chromosomes\n", functions,
              components, static_cast<long long>(population));
  std::vector<double> serial(chromosomes.size());
  std::vector<double> parallel(chromosomes.size());
  double serial_best = 1e300;
  double parallel_best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto start = Clock::now();
    evaluator.evaluate_batch_serial(population, chromosome_at, serial.data());
    serial_best = std::min(serial_best, seconds_since(start));

    start = Clock::now();
    evaluator.evaluate_batch_parallel(population, chromosome_at, parallel.data());
    parallel_best = std::min(parallel_best, seconds_since(start));
  }
  if (serial != parallel) {
    std::fprintf(stderr, "FAIL: parallel fitness differs from the serial reference\n");
    return 1;
  }
  std::printf("  serial   %8.3f ms\n", serial_best * 1e3);
  std::printf("  parallel %8.3f ms  (x%.2f, results identical)\n", parallel_best * 1e3,
              serial_best / parallel_best);

  // Oracle enumeration on a model sized for ~2M candidates.
  std::mt19937_64 rng2(7);
  const auto small = synthetic_model(9, 5, 18, rng2);
  std::printf("exhaustive enumeration: 9 free functions, 5 components (%lld candidates)\n",
              static_cast<long long>(dsmopt::oracle_search_size(small)));
  dsmopt::OracleOptions serial_opts;
  serial_opts.parallel = false;
  dsmopt::OracleOptions parallel_opts;
  parallel_opts.parallel = true;

  double oracle_serial = 1e300;
  double oracle_parallel = 1e300;
  dsmopt::OracleResult result_serial;
  dsmopt::OracleResult result_parallel;
  for (int r = 0; r < repeats; ++r) {
    auto start = Clock::now();
    result_serial = dsmopt::enumerate_optima(small, serial_opts);
    oracle_serial = std::min(oracle_serial, seconds_since(start));

    start = Clock::now();
    result_parallel = dsmopt::enumerate_optima(small, parallel_opts);
    oracle_parallel = std::min(oracle_parallel, seconds_since(start));
  }
  const bool same_optimum = result_serial.optimum == result_parallel.optimum;
  bool same_set = result_serial.optimal_allocations.size() ==
                  result_parallel.optimal_allocations.size();
  for (std::size_t i = 0; same_set && i < result_serial.optimal_allocations.size(); ++i) {
    same_set = result_serial.optimal_allocations[i].assignment ==
               result_parallel.optimal_allocations[i].assignment;
  }
  if (!same_optimum || !same_set) {
    std::fprintf(stderr, "FAIL: parallel enumeration differs from the serial reference\n");
    return 1;
  }
  std::printf("  serial   %8.3f ms\n", oracle_serial * 1e3);
  std::printf("  parallel %8.3f ms  (x%.2f, results identical)\n", oracle_parallel * 1e3,
              oracle_serial / oracle_parallel);
  return 0;
}
