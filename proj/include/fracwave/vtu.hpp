#pragma once

#include <string>
#include <vector>

#include "fracwave/mesh.hpp"

namespace fracwave {

// One scalar field for file output; size must match the number of mesh
// vertices (point field) or cells (cell field).
struct VtuField {
  std::string name;
  std::vector<double> values;
};

// ASCII UnstructuredGrid snapshot of the mesh with the given scalar fields.
void write_vtu(const Mesh& mesh, const std::vector<VtuField>& point_fields,
               const std::vector<VtuField>& cell_fields, const std::string& path);

// One row of the run trace; kind is "midpoint" for elastic steps and "euler"
// for dissipative (material-change) steps.
struct TraceRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::string kind;
  double energy = 0.0;
  double dissipation = 0.0;  // cumulative
  long cracked_nodes = 0;
  long gmres_iters = 0;
};

// CSV with the fixed header step,t,dt,kind,energy,dissipation,cracked_nodes,
// gmres_iters; doubles are printed so that read_trace reproduces them exactly.
void write_trace(const std::vector<TraceRecord>& records, const std::string& path);
std::vector<TraceRecord> read_trace(const std::string& path);

}  // namespace fracwave
