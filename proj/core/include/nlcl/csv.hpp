#pragma once

#include <filesystem>
#include <string>

#include "nlcl/solver.hpp"

namespace nlcl {

/// Shortest round-trippable decimal representation of a double.
std::string format_double(double x);

/// Cell field as `x,value` rows at cell centers.
std::string cell_field_csv(const CellField& f);

/// Interface field as `x,w` rows at interface coordinates.
std::string interface_field_csv(const InterfaceField& w);

/// Long-format trajectory: `t,x,q,w` with one row per snapshot and cell.
/// The w column is the cell-centered speed: V(q_j) for the local model,
/// the mean of the two adjacent interface values otherwise.
std::string trajectory_csv(const Trajectory& traj);

/// Matrix of snapshots: header `t,x0,x1,...`, one row per snapshot time.
std::string heatmap_csv(const Trajectory& traj);

/// Write atomically (temp file + rename) so partial outputs never appear.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace nlcl
