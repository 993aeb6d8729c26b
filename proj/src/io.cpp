#include "roughscl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "roughscl/errors.hpp"

namespace roughscl {

namespace {

struct Row {
  double a = 0;
  double b = 0;
};

double parse_field(const std::string& text, const std::string& filename) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(filename + ": bad number '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument(filename + ": bad number '" + text + "'");
  }
  return v;
}

std::vector<Row> read_rows(const std::string& filename, const std::string& header) {
  std::ifstream in(filename);
  if (!in.good()) throw IoError("cannot open " + filename);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(filename + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw std::invalid_argument(filename + ": expected header '" + header + "'");
  }
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw std::invalid_argument(filename + ": expected two fields per row");
    }
    rows.push_back(
        {parse_field(line.substr(0, comma), filename), parse_field(line.substr(comma + 1), filename)});
  }
  return rows;
}

void write_rows(const std::string& filename, const std::string& header,
                const std::vector<Row>& rows) {
  std::ofstream out(filename, std::ios::binary);
  if (!out.good()) throw IoError("cannot open " + filename + " for writing");
  out << header << "\n";
  char line[80];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", row.a, row.b);
    out << line;
  }
  if (!out.good()) throw IoError("failed writing " + filename);
}

}  // namespace

PiecewiseLinearPath read_path_csv(const std::string& filename) {
  auto rows = read_rows(filename, "t,z");
  std::vector<double> times, values;
  times.reserve(rows.size());
  values.reserve(rows.size());
  for (const auto& row : rows) {
    times.push_back(row.a);
    values.push_back(row.b);
  }
  return PiecewiseLinearPath(std::move(times), std::move(values));
}

void write_path_csv(const std::string& filename, const PiecewiseLinearPath& path) {
  std::vector<Row> rows(path.times.size());
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    rows[i] = {path.times[i], path.values[i]};
  }
  write_rows(filename, "t,z", rows);
}

GridSolution read_solution_csv(const std::string& filename) {
  auto rows = read_rows(filename, "x,u");
  if (rows.size() < 2) {
    throw std::invalid_argument(filename + ": need at least two cells");
  }
  double dx = rows[1].a - rows[0].a;
  if (!(dx > 0)) throw std::invalid_argument(filename + ": cell centers must increase");
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    double step = rows[i + 1].a - rows[i].a;
    if (std::abs(step - dx) > 1e-9 * (1.0 + std::abs(dx))) {
      throw std::invalid_argument(filename + ": grid is not uniform");
    }
  }
  GridSolution u;
  u.x_left = rows.front().a - 0.5 * dx;
  u.x_right = rows.back().a + 0.5 * dx;
  u.n_cells = static_cast<int>(rows.size());
  u.cell_averages.reserve(rows.size());
  for (const auto& row : rows) u.cell_averages.push_back(row.b);
  return u;
}

void write_solution_csv(const std::string& filename, const GridSolution& u) {
  std::vector<Row> rows(u.n_cells);
  for (int i = 0; i < u.n_cells; ++i) rows[i] = {u.x_center(i), u.cell_averages[i]};
  write_rows(filename, "x,u", rows);
}

double parse_bound(const std::string& text) {
  return parse_field(text, "bound");
}

}  // namespace roughscl
