#include "fracwave/vtu.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracwave {

namespace {

constexpr char kTraceHeader[] = "step,t,dt,kind,energy,dissipation,cracked_nodes,gmres_iters";

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void check_field_sizes(const std::vector<VtuField>& fields, std::size_t expected,
                       const char* what) {
  for (const auto& f : fields)
    if (f.values.size() != expected)
      throw std::invalid_argument("write_vtu: " + std::string(what) + " field '" + f.name +
                                  "' has " + std::to_string(f.values.size()) + " values, expected " +
                                  std::to_string(expected));
}

}  // namespace

void write_vtu(const Mesh& mesh, const std::vector<VtuField>& point_fields,
               const std::vector<VtuField>& cell_fields, const std::string& path) {
  check_field_sizes(point_fields, static_cast<std::size_t>(mesh.num_vertices()), "point");
  check_field_sizes(cell_fields, static_cast<std::size_t>(mesh.num_cells()), "cell");

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtu: cannot open '" + path + "'");

  out << "<?xml version=\"1.0\"?>\n"
      << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n"
      << "  <UnstructuredGrid>\n"
      << "    <Piece NumberOfPoints=\"" << mesh.num_vertices() << "\" NumberOfCells=\""
      << mesh.num_cells() << "\">\n";

  out << "      <Points>\n"
      << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& x = mesh.vertex(v);
    out << "          " << num(x.x()) << " " << num(x.y()) << " 0\n";
  }
  out << "        </DataArray>\n      </Points>\n";

  out << "      <Cells>\n"
      << "        <DataArray type=\"Int32\" Name=\"connectivity\" format=\"ascii\">\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cell_vertices(c);
    out << "          " << cv[0] << " " << cv[1] << " " << cv[2] << " " << cv[3] << "\n";
  }
  out << "        </DataArray>\n"
      << "        <DataArray type=\"Int32\" Name=\"offsets\" format=\"ascii\">\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << "          " << 4 * (c + 1) << "\n";
  out << "        </DataArray>\n"
      << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << "          9\n";
  out << "        </DataArray>\n      </Cells>\n";

  out << "      <PointData>\n";
  for (const auto& f : point_fields) {
    out << "        <DataArray type=\"Float64\" Name=\"" << f.name << "\" format=\"ascii\">\n";
    for (double v : f.values) out << "          " << num(v) << "\n";
    out << "        </DataArray>\n";
  }
  out << "      </PointData>\n";

  out << "      <CellData>\n";
  for (const auto& f : cell_fields) {
    out << "        <DataArray type=\"Float64\" Name=\"" << f.name << "\" format=\"ascii\">\n";
    for (double v : f.values) out << "          " << num(v) << "\n";
    out << "        </DataArray>\n";
  }
  out << "      </CellData>\n";

  out << "    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
  if (!out) throw std::runtime_error("write_vtu: write failed for '" + path + "'");
}

void write_trace(const std::vector<TraceRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace: cannot open '" + path + "'");
  out << kTraceHeader << "\n";
  for (const auto& r : records) {
    out << r.step << "," << num(r.t) << "," << num(r.dt) << "," << r.kind << "," << num(r.energy)
        << "," << num(r.dissipation) << "," << r.cracked_nodes << "," << r.gmres_iters << "\n";
  }
  if (!out) throw std::runtime_error("write_trace: write failed for '" + path + "'");
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trace: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_trace: empty file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader)
    throw std::runtime_error("read_trace: unexpected header '" + line + "'");

  std::vector<TraceRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cols.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols.size() != 8)
      throw std::runtime_error("read_trace: line " + std::to_string(lineno) + " has " +
                               std::to_string(cols.size()) + " columns, expected 8");
    const auto to_long = [&](const std::string& s) {
      char* end = nullptr;
      const long v = std::strtol(s.c_str(), &end, 10);
      if (end != s.c_str() + s.size())
        throw std::runtime_error("read_trace: line " + std::to_string(lineno) +
                                 ": bad integer '" + s + "'");
      return v;
    };
    const auto to_double = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size())
        throw std::runtime_error("read_trace: line " + std::to_string(lineno) + ": bad number '" +
                                 s + "'");
      return v;
    };
    TraceRecord r;
    r.step = to_long(cols[0]);
    r.t = to_double(cols[1]);
    r.dt = to_double(cols[2]);
    r.kind = cols[3];
    r.energy = to_double(cols[4]);
    r.dissipation = to_double(cols[5]);
    r.cracked_nodes = to_long(cols[6]);
    r.gmres_iters = to_long(cols[7]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace fracwave
