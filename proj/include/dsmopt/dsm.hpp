#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dsmopt/arch_model.hpp"

namespace dsmopt {

// Binary function-level dependency matrix. Row = source function, column =
// target function; entry 1 means at least one functional exchange flows that
// way. The diagonal is reserved for the function's tag and is always 0 in
// `entries`. `order` is the display permutation: order[p] is the function id
// shown at position p.
struct Dsm {
  std::int32_t size = 0;
  std::vector<std::uint8_t> entries;       // row-major size*size, values 0/1
  std::vector<FunctionId> order;           // display order (permutation of 0..size-1)
  std::vector<std::string> labels;         // function names, indexed by id
  std::vector<std::string> diagonal_tags;  // e.g. "F5", indexed by id

  std::uint8_t at(FunctionId row, FunctionId col) const {
    return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(size) +
                   static_cast<std::size_t>(col)];
  }
};

// Builds the binary DSM of a model. Display order is the identity; diagonal
// tags follow the figures' convention "F<id+1>".
Dsm build_dsm(const ArchitectureModel& model);

// Display permutation that groups functions contiguously by allocated
// component: blocks ordered by component id, functions ordered by id inside
// each block. Throws AllocationError when alloc is invalid.
std::vector<FunctionId> cluster_order(const ArchitectureModel& model, const Allocation& alloc);

// Returns a copy of dsm with the given display order. Throws
// std::invalid_argument unless order is a permutation of 0..size-1.
Dsm with_display_order(Dsm dsm, std::vector<FunctionId> order);

// Optional grouping footer for write_matrix: the component names are indexed
// by component id and stamped at the start of each block of the display
// order (the spreadsheet's bottom "LogicalComponentName" row).
struct MatrixGrouping {
  Allocation allocation;
  std::vector<std::string> component_names;
};

// Spreadsheet-compatible CSV (UTF-8, LF):
//   LogicalFunctionName,Index,0,1,...,N-1
//   <name>,<display position>,cells...        one row per function
//   [LogicalComponentName,,names at block starts]
// Cells are 0/1 except the display diagonal, which carries the function tag.
std::string write_matrix(const Dsm& dsm, const std::optional<MatrixGrouping>& grouping = {});

// write_matrix to a file (atomic: temp file + rename). I/O failures surface
// as std::runtime_error naming the path.
void write_matrix_file(const std::filesystem::path& path, const Dsm& dsm,
                       const std::optional<MatrixGrouping>& grouping = {});

// The display-order view recovered from a matrix CSV: row_names[p] and
// display_entries[p*size+q] mirror what write_matrix emitted; diagonal cells
// report 0 with tags captured separately. footer is empty when the file has
// no grouping row.
struct ParsedMatrix {
  std::int32_t size = 0;
  std::vector<std::string> row_names;
  std::vector<std::string> diagonal_tags;
  std::vector<std::uint8_t> display_entries;
  std::vector<std::string> footer;
};

ParsedMatrix read_matrix_csv(const std::string& text);

}  // namespace dsmopt
