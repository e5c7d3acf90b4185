#include "dsmopt/dsm.hpp"

#include <algorithm>
#include <stdexcept>

#include "dsmopt/csv.hpp"
#include "dsmopt/fs.hpp"

namespace dsmopt {

Dsm build_dsm(const ArchitectureModel& model) {
  const auto n = static_cast<std::size_t>(model.function_count());
  Dsm dsm;
  dsm.size = model.function_count();
  dsm.entries.assign(n * n, 0);
  dsm.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) dsm.order[i] = static_cast<FunctionId>(i);
  dsm.labels.reserve(n);
  dsm.diagonal_tags.reserve(n);
  for (const auto& f : model.functions) {
    dsm.labels.push_back(f.name);
    dsm.diagonal_tags.push_back("F" + std::to_string(f.id + 1));
  }
  for (const auto& e : model.exchanges) {
    dsm.entries[static_cast<std::size_t>(e.source) * n + static_cast<std::size_t>(e.target)] = 1;
  }
  return dsm;
}

std::vector<FunctionId> cluster_order(const ArchitectureModel& model, const Allocation& alloc) {
  auto violations = validate_allocation(model, alloc);
  if (!violations.empty()) {
    std::string msg = "invalid allocation (" + std::to_string(violations.size()) + " violation" +
                      (violations.size() == 1 ? "" : "s") + ")";
    for (const auto& v : violations) msg += "\n  - " + v.message;
    throw AllocationError(std::move(msg), std::move(violations));
  }
  std::vector<FunctionId> order;
  order.reserve(alloc.assignment.size());
  for (ComponentId c = 0; c < model.component_count(); ++c) {
    for (std::size_t f = 0; f < alloc.assignment.size(); ++f) {
      if (alloc.assignment[f] == c) order.push_back(static_cast<FunctionId>(f));
    }
  }
  return order;
}

Dsm with_display_order(Dsm dsm, std::vector<FunctionId> order) {
  if (order.size() != static_cast<std::size_t>(dsm.size)) {
    throw std::invalid_argument("display order length does not match matrix size");
  }
  std::vector<std::uint8_t> seen(order.size(), 0);
  for (const auto f : order) {
    if (f < 0 || static_cast<std::size_t>(f) >= order.size() ||
        seen[static_cast<std::size_t>(f)]) {
      throw std::invalid_argument("display order is not a permutation of 0..N-1");
    }
    seen[static_cast<std::size_t>(f)] = 1;
  }
  dsm.order = std::move(order);
  return dsm;
}

std::string write_matrix(const Dsm& dsm, const std::optional<MatrixGrouping>& grouping) {
  const auto n = static_cast<std::size_t>(dsm.size);
  std::string out;

  std::vector<std::string> header;
  header.reserve(n + 2);
  header.emplace_back("LogicalFunctionName");
  header.emplace_back("Index");
  for (std::size_t q = 0; q < n; ++q) header.push_back(std::to_string(q));
  out += csv::join_row(header);

  for (std::size_t p = 0; p < n; ++p) {
    const auto f = static_cast<std::size_t>(dsm.order[p]);
    std::vector<std::string> row;
    row.reserve(n + 2);
    row.push_back(dsm.labels[f]);
    row.push_back(std::to_string(p));
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) {
        row.push_back(dsm.diagonal_tags[f]);
      } else {
        const auto g = static_cast<std::size_t>(dsm.order[q]);
        row.push_back(dsm.entries[f * n + g] ? "1" : "0");
      }
    }
    out += csv::join_row(row);
  }

  if (grouping) {
    std::vector<std::string> footer;
    footer.reserve(n + 2);
    footer.emplace_back("LogicalComponentName");
    footer.emplace_back("");
    ComponentId previous = -1;
    for (std::size_t p = 0; p < n; ++p) {
      const auto f = static_cast<std::size_t>(dsm.order[p]);
      const auto c = grouping->allocation.assignment[f];
      if (p == 0 || c != previous) {
        footer.push_back(grouping->component_names[static_cast<std::size_t>(c)]);
      } else {
        footer.emplace_back("");
      }
      previous = c;
    }
    out += csv::join_row(footer);
  }
  return out;
}

void write_matrix_file(const std::filesystem::path& path, const Dsm& dsm,
                       const std::optional<MatrixGrouping>& grouping) {
  write_file_atomic(path, write_matrix(dsm, grouping));
}

ParsedMatrix read_matrix_csv(const std::string& text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw std::runtime_error("matrix CSV is empty");
  const auto& header = rows[0];
  if (header.size() < 2 || header[0] != "LogicalFunctionName") {
    throw std::runtime_error("matrix CSV header is malformed");
  }
  const auto n = header.size() - 2;
  ParsedMatrix parsed;
  parsed.size = static_cast<std::int32_t>(n);
  parsed.display_entries.assign(n * n, 0);
  std::size_t p = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!row.empty() && row[0] == "LogicalComponentName") {
      parsed.footer.assign(row.begin() + 2, row.end());
      break;
    }
    if (p >= n) throw std::runtime_error("matrix CSV has more rows than columns");
    if (row.size() != n + 2) {
      throw std::runtime_error("matrix CSV row " + std::to_string(r) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(n + 2));
    }
    parsed.row_names.push_back(row[0]);
    for (std::size_t q = 0; q < n; ++q) {
      const auto& cell = row[q + 2];
      if (q == p) {
        parsed.diagonal_tags.push_back(cell);
      } else if (cell == "1") {
        parsed.display_entries[p * n + q] = 1;
      } else if (cell != "0") {
        throw std::runtime_error("unexpected off-diagonal cell \"" + cell + "\" at row " +
                                 std::to_string(r));
      }
    }
    ++p;
  }
  if (p != n) {
    throw std::runtime_error("matrix CSV has " + std::to_string(p) + " function rows, expected " +
                             std::to_string(n));
  }
  return parsed;
}

}  // namespace dsmopt
