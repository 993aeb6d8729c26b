#pragma once

#include <string>

#include "roughscl/path.hpp"
#include "roughscl/solver.hpp"

namespace roughscl {

// Path CSV format: header "t,z", one breakpoint per row. Solution CSV
// format: header "x,u", one cell center per row on a uniform grid.
PiecewiseLinearPath read_path_csv(const std::string& filename);
void write_path_csv(const std::string& filename, const PiecewiseLinearPath& path);

GridSolution read_solution_csv(const std::string& filename);
void write_solution_csv(const std::string& filename, const GridSolution& u);

// "inf"/"-inf" aware number parsing for bound values.
double parse_bound(const std::string& text);

}  // namespace roughscl
