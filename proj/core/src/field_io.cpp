#include "membranes/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "membranes/errors.hpp"

namespace membranes {

void write_field_csv(std::ostream& out, const ScalarField& field) {
    const Grid& grid = field.grid();
    out << (grid.dim() == 1 ? "x,value\n" : "x,y,value\n");
    out << std::setprecision(17);
    for (std::size_t k = 0; k < field.size(); ++k) {
        auto p = grid.point(k);
        out << p[0] << ',';
        if (grid.dim() == 2) out << p[1] << ',';
        out << field[k] << '\n';
    }
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_field_csv(out, field);
}

ScalarField read_field_csv(std::istream& in, const GridPtr& grid) {
    std::string line;
    std::getline(in, line);
    std::vector<double> values;
    values.reserve(grid->size());
    std::size_t line_no = 1;
    const std::size_t columns = static_cast<std::size_t>(grid->dim()) + 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("malformed number '" + cell + "' on line " + std::to_string(line_no),
                                 line_no);
            }
        }
        if (cells.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " columns on line " +
                                 std::to_string(line_no),
                             line_no);
        }
        values.push_back(cells.back());
    }
    return ScalarField(grid, std::move(values));
}

}  // namespace membranes
