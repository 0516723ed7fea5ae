#include "chb/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace chb {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string energy_csv(std::span<const EnergyReport> reports) {
  std::string out = kEnergyCsvHeader;
  out += '\n';
  for (const EnergyReport& r : reports) {
    for (double v : {r.time, r.e_chemical, r.e_elastic, r.e_fluid, r.boundary_term,
                     r.boundary_work_accumulated}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(r.e_total);
    out += '\n';
  }
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

void write_energy_csv(const fs::path& path, std::span<const EnergyReport> reports) {
  write_text(path, energy_csv(reports));
}

std::vector<EnergyReport> read_energy_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line != kEnergyCsvHeader) throw std::runtime_error(path.string() + ": unexpected CSV header");
  std::vector<EnergyReport> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 7) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(lineno) + " is malformed");
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return rows;
}

std::string snapshot_filename(ScenarioKind kind, Index step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06lld.vtk", std::string(to_string(kind)).c_str(),
                static_cast<long long>(step));
  return buf;
}

std::string snapshot_vtk(const StructuredGrid& grid, const SimState& s, ScenarioKind kind,
                         Index step) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.num_nodes()) * 160);
  auto line = [&](const std::string& text) {
    out += text;
    out += '\n';
  };
  line("# vtk DataFile Version 3.0");
  line("chb scenario=" + std::string(to_string(kind)) + " step=" + std::to_string(step) +
       " time=" + format_number(s.time));
  line("ASCII");
  line("DATASET STRUCTURED_GRID");
  line("DIMENSIONS " + std::to_string(grid.nx() + 1) + " " + std::to_string(grid.ny() + 1) + " 1");
  line("POINTS " + std::to_string(grid.num_nodes()) + " double");
  for (Index n = 0; n < grid.num_nodes(); ++n) {
    const Point x = grid.node_position(n);
    line(format_number(x.x) + " " + format_number(x.y) + " 0");
  }

  line("POINT_DATA " + std::to_string(grid.num_nodes()));
  for (const auto& [name, field] : {std::pair{"phi", &s.phi}, std::pair{"mu", &s.mu}}) {
    line(std::string("SCALARS ") + name + " double 1");
    line("LOOKUP_TABLE default");
    for (Index n = 0; n < grid.num_nodes(); ++n) line(format_number((*field)[n]));
  }
  line("VECTORS u double");
  for (Index n = 0; n < grid.num_nodes(); ++n)
    line(format_number(s.u[vector_dof(n, 0)]) + " " + format_number(s.u[vector_dof(n, 1)]) + " 0");

  line("CELL_DATA " + std::to_string(grid.num_cells()));
  for (const auto& [name, field] : {std::pair{"p", &s.p}, std::pair{"theta", &s.theta}}) {
    line(std::string("SCALARS ") + name + " double 1");
    line("LOOKUP_TABLE default");
    for (Index c = 0; c < grid.num_cells(); ++c) line(format_number((*field)[c]));
  }
  line("VECTORS q double");
  for (const Point& v : rt0_cell_average(grid, s.q))
    line(format_number(v.x) + " " + format_number(v.y) + " 0");
  return out;
}

fs::path write_snapshot(const fs::path& dir, const StructuredGrid& grid, const SimState& state,
                        ScenarioKind kind, Index step) {
  const fs::path path = dir / snapshot_filename(kind, step);
  write_text(path, snapshot_vtk(grid, state, kind, step));
  return path;
}

SnapshotData read_snapshot(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  auto bad = [&](const std::string& why) {
    return std::runtime_error(path.string() + ": " + why);
  };
  SnapshotData d;
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile", 0) != 0) throw bad("not a legacy VTK file");
  std::getline(in, line);
  {
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "scenario") d.scenario = val;
      else if (key == "step") d.step = std::stoll(val);
      else if (key == "time") d.time = std::stod(val);
    }
  }
  std::string tok;
  Index points = 0;
  while (in >> tok) {
    if (tok == "DIMENSIONS") {
      Index a = 0, b = 0, c = 0;
      in >> a >> b >> c;
      d.nx = a - 1;
      d.ny = b - 1;
      points = a * b;
    } else if (tok == "SCALARS") {
      std::string name, type, lookup, table;
      int comps = 1;
      in >> name >> type >> comps >> lookup >> table;
      const Index count = name == "phi" || name == "mu" ? points : d.nx * d.ny;
      Vector v(count);
      for (Index i = 0; i < count; ++i) {
        if (!(in >> v[i])) throw bad("truncated SCALARS " + name);
      }
      if (name == "phi") d.phi = std::move(v);
      else if (name == "p") d.p = std::move(v);
    }
  }
  if (d.phi.size() == 0 || points == 0) throw bad("missing phi point data");
  if (d.p.size() == 0) throw bad("missing p cell data");
  return d;
}

double relative_l2(const StructuredGrid& grid, const Vector& a, const Vector& b) {
  const SparseMatrix m = assemble_q1_mass(grid, QuadratureField(grid, 1.0));
  const Vector diff = a - b;
  const double denom = std::sqrt(b.dot(m * b));
  return std::sqrt(diff.dot(m * diff)) / std::max(denom, 1e-300);
}

std::vector<Discrepancy> compare_runs(const fs::path& a, const fs::path& b) {
  auto list = [](const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("'" + dir.string() + "' is not a directory");
    std::map<Index, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path& p = entry.path();
      if (p.extension() != ".vtk") continue;
      const std::string stem = p.stem().string();
      const auto us = stem.rfind('_');
      if (us == std::string::npos) continue;
      try {
        files[std::stoll(stem.substr(us + 1))] = p;
      } catch (const std::exception&) {
      }
    }
    return files;
  };
  const auto fa = list(a);
  const auto fb = list(b);
  std::vector<Discrepancy> out;
  for (const auto& [step, path] : fa) {
    const auto it = fb.find(step);
    if (it == fb.end()) continue;
    const SnapshotData sa = read_snapshot(path);
    const SnapshotData sb = read_snapshot(it->second);
    if (sa.nx != sb.nx || sa.ny != sb.ny) {
      throw std::runtime_error("compare: grids differ at step " + std::to_string(step));
    }
    const StructuredGrid grid(sa.nx, sa.ny);
    out.push_back({step, sa.time, relative_l2(grid, sa.phi, sb.phi)});
  }
  if (out.empty()) throw std::runtime_error("compare: the two runs share no snapshot steps");
  return out;
}

}  // namespace chb
