#pragma once

#include <filesystem>
#include <iosfwd>

#include "membranes/grid.hpp"

namespace membranes {

/// CSV dump: header `x,value` (1D) or `x,y,value` (2D), one row per node in
/// grid order, every number printed with 17 significant digits.
void write_field_csv(std::ostream& out, const ScalarField& field);
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

/// Reads a dump produced by write_field_csv onto `grid`. Throws ParseError
/// (line number) on malformed rows and GridMismatch on a wrong row count.
ScalarField read_field_csv(std::istream& in, const GridPtr& grid);

}  // namespace membranes
