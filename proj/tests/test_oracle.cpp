#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "dsmopt/coupling.hpp"
#include "dsmopt/oracle.hpp"
#include "dsmopt/rng.hpp"
#include "support/instance_gen.hpp"

using namespace dsmopt;

namespace {

// Chain model: functions 0 -> 1 -> ... -> n-1, all free, k system components.
ArchitectureModel chain_model(std::int32_t functions, std::int32_t systems) {
  ArchitectureModel model;
  for (std::int32_t f = 0; f < functions; ++f) {
    model.functions.push_back({f, "f" + std::to_string(f), std::nullopt});
  }
  for (std::int32_t c = 0; c < systems; ++c) {
    model.components.push_back({c, "s" + std::to_string(c), ComponentKind::system});
  }
  for (std::int32_t f = 0; f + 1 < functions; ++f) {
    model.exchanges.push_back({f, f, f + 1, ExchangeKind::data});
  }
  return model;
}

// Plain odometer enumeration used as an in-test cross-check. Deliberately
// written differently from the library's index-decoding loop.
std::pair<double, std::int64_t> brute_force_minimum(const ArchitectureModel& model) {
  const auto free_ids = model.free_function_ids();
  const auto systems = model.system_component_ids();
  Allocation alloc;
  alloc.assignment.assign(model.functions.size(), -1);
  for (const auto& f : model.functions) {
    if (f.pre_allocated_to) alloc.assignment[static_cast<std::size_t>(f.id)] = *f.pre_allocated_to;
  }
  std::vector<std::size_t> odometer(free_ids.size(), 0);
  double minimum = std::numeric_limits<double>::infinity();
  std::int64_t visited = 0;
  while (true) {
    for (std::size_t i = 0; i < free_ids.size(); ++i) {
      alloc.assignment[static_cast<std::size_t>(free_ids[i])] = systems[odometer[i]];
    }
    minimum = std::min(minimum, architecture_coupling(model, alloc).total);
    ++visited;
    // Advance the least significant (last) digit first.
    std::size_t d = free_ids.size();
    while (d > 0) {
      --d;
      if (++odometer[d] < systems.size()) break;
      odometer[d] = 0;
      if (d == 0) return {minimum, visited};
    }
    if (free_ids.empty()) return {minimum, visited};
  }
}

}  // namespace

TEST_CASE("search size is systems to the power of free functions") {
  CHECK(oracle_search_size(chain_model(6, 3)) == 729);
  CHECK(oracle_search_size(chain_model(2, 10)) == 100);

  auto locked = chain_model(4, 2);
  locked.functions[0].pre_allocated_to = 0;
  locked.functions[2].pre_allocated_to = 1;
  CHECK(oracle_search_size(locked) == 4);  // 2 free functions, 2 systems

  // 10 systems, 40 free functions: 10^40 overflows 64-bit, reported as -1.
  CHECK(oracle_search_size(chain_model(40, 10)) == -1);
}

TEST_CASE("a fully locked model enumerates exactly one assignment") {
  auto model = chain_model(3, 2);
  model.functions[0].pre_allocated_to = 0;
  model.functions[1].pre_allocated_to = 1;
  model.functions[2].pre_allocated_to = 0;

  CHECK(oracle_search_size(model) == 1);
  const auto result = enumerate_optima(model);
  CHECK(result.enumerated == 1);
  REQUIRE(result.optimal_allocations.size() == 1);
  CHECK(result.optimal_allocations[0].assignment == std::vector<ComponentId>{0, 1, 0});
  CHECK(result.optimum == architecture_coupling(model, result.optimal_allocations[0]).total);
}

TEST_CASE("with no exchanges every assignment is optimal, in enumeration order") {
  ArchitectureModel model;
  model.functions.push_back({0, "a", std::nullopt});
  model.functions.push_back({1, "b", std::nullopt});
  model.components.push_back({0, "s0", ComponentKind::system});
  model.components.push_back({1, "s1", ComponentKind::system});

  const auto result = enumerate_optima(model);
  CHECK(result.enumerated == 4);
  CHECK(result.optimum == 0.0);
  REQUIRE(result.optimal_allocations.size() == 4);
  CHECK(result.optimal_allocations[0].assignment == std::vector<ComponentId>{0, 0});
  CHECK(result.optimal_allocations[1].assignment == std::vector<ComponentId>{0, 1});
  CHECK(result.optimal_allocations[2].assignment == std::vector<ComponentId>{1, 0});
  CHECK(result.optimal_allocations[3].assignment == std::vector<ComponentId>{1, 1});
}

TEST_CASE("oracle minimum matches an independent exhaustive scan") {
  const auto model = chain_model(6, 3);
  const auto result = enumerate_optima(model);
  const auto [expected_min, expected_visited] = brute_force_minimum(model);

  CHECK(result.enumerated == 729);
  CHECK(expected_visited == 729);
  CHECK(result.optimum == doctest::Approx(expected_min).epsilon(1e-12));

  // A chain that fits entirely into one component has zero coupling.
  CHECK(result.optimum == 0.0);
  for (const auto& alloc : result.optimal_allocations) {
    CHECK(architecture_coupling(model, alloc).total == doctest::Approx(result.optimum));
    const auto first = alloc.assignment[0];
    for (const auto gene : alloc.assignment) CHECK(gene == first);
  }
  CHECK(result.optimal_allocations.size() == 3);  // one per component
}

TEST_CASE("every reported optimum is optimal on random instances") {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 20) {
    const auto model = testgen::random_instance(rng);
    if (oracle_search_size(model) > 50'000) continue;
    ++checked;
    CAPTURE(checked);

    const auto result = enumerate_optima(model);
    const auto [expected_min, expected_visited] = brute_force_minimum(model);
    CHECK(result.enumerated == expected_visited);
    CHECK(std::abs(result.optimum - expected_min) <= 1e-9);
    REQUIRE(!result.optimal_allocations.empty());
    for (const auto& alloc : result.optimal_allocations) {
      CHECK(validate_allocation(model, alloc).empty());
      CHECK(architecture_coupling(model, alloc).total <= result.optimum + 1e-9);
    }
    CHECK(std::is_sorted(result.optimal_allocations.begin(), result.optimal_allocations.end(),
                         [](const Allocation& a, const Allocation& b) {
                           return a.assignment < b.assignment;
                         }));
  }
}

TEST_CASE("serial and parallel enumeration agree exactly") {
  std::mt19937_64 rng(440);
  int checked = 0;
  while (checked < 20) {
    const auto model = testgen::random_instance(rng);
    if (oracle_search_size(model) > 50'000) continue;
    ++checked;

    OracleOptions serial;
    serial.parallel = false;
    const auto a = enumerate_optima(model);
    const auto b = enumerate_optima(model, serial);
    CHECK(a.optimum == b.optimum);
    CHECK(a.enumerated == b.enumerated);
    REQUIRE(a.optimal_allocations.size() == b.optimal_allocations.size());
    for (std::size_t i = 0; i < a.optimal_allocations.size(); ++i) {
      CHECK(a.optimal_allocations[i].assignment == b.optimal_allocations[i].assignment);
    }
  }
}

TEST_CASE("search spaces above the limit are refused with the exact count") {
  const auto model = chain_model(6, 3);  // 729 candidates
  OracleOptions options;
  options.limit = 728;
  try {
    enumerate_optima(model, options);
    FAIL("expected OracleLimitError");
  } catch (const OracleLimitError& e) {
    CHECK(e.candidates() == 729);
    CHECK(e.limit() == 728);
    CHECK(std::string(e.what()).find("729") != std::string::npos);
  }

  // An overflowing search space is refused regardless of the limit.
  CHECK_THROWS_AS(enumerate_optima(chain_model(40, 10)), OracleLimitError);
}

TEST_CASE("the optimum is invariant under component relabeling") {
  std::mt19937_64 rng(808);
  int checked = 0;
  while (checked < 10) {
    const auto model = testgen::random_instance(rng);
    if (oracle_search_size(model) > 20'000) continue;
    ++checked;

    const auto n = model.component_count();
    const auto perm32 = sample_distinct(rng, n, n);
    std::vector<ComponentId> inverse(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i) {
      inverse[static_cast<std::size_t>(perm32[static_cast<std::size_t>(i)])] = i;
    }

    auto relabeled = model;
    for (std::int32_t c = 0; c < n; ++c) {
      relabeled.components[static_cast<std::size_t>(c)].kind =
          model.components[static_cast<std::size_t>(perm32[static_cast<std::size_t>(c)])].kind;
    }
    for (auto& f : relabeled.functions) {
      if (f.pre_allocated_to) {
        f.pre_allocated_to = inverse[static_cast<std::size_t>(*f.pre_allocated_to)];
      }
    }
    validate_model(relabeled);

    const auto a = enumerate_optima(model);
    const auto b = enumerate_optima(relabeled);
    CHECK(a.enumerated == b.enumerated);
    CHECK(std::abs(a.optimum - b.optimum) <= 1e-9);
    CHECK(a.optimal_allocations.size() == b.optimal_allocations.size());
  }
}

TEST_CASE("excluding actors never raises the optimum") {
  std::mt19937_64 rng(3001);
  int checked = 0;
  while (checked < 10) {
    const auto model = testgen::random_instance(rng);
    if (oracle_search_size(model) > 20'000) continue;
    ++checked;

    OracleOptions no_actors;
    no_actors.include_actors = false;
    const auto with = enumerate_optima(model);
    const auto without = enumerate_optima(model, no_actors);
    CHECK(without.optimum <= with.optimum + 1e-9);
  }
}
