#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "navier/grid.hpp"
#include "navier/relaxed_solver.hpp"

namespace navier {

/// Header `x,y,value`, one row per node in flat-index order, %.17g numbers.
std::string field_to_csv(const Field& u);
/// Same layout for nodal weights; infinite weights print as `inf`.
std::string weights_to_csv(const MeasureWeights& m);

/// Reads a field written by field_to_csv onto `mask`. Row count must match the
/// grid; values at pinned nodes are dropped.
Field field_from_csv(std::string_view text, MaskPtr mask);

/// Plain PGM (P2), 8-bit, linear min/max scaling, top row = largest y.
std::string field_to_pgm(const Field& u);

/// Writes to `<path>.tmp` and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace navier
