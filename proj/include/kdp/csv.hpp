#pragma once

#include <string>
#include <vector>

#include "kdp/grid_function.hpp"

namespace kdp {

/// RFC-4180-style CSV buffer: header row, '.' decimal separator, 17
/// significant digits, '\n' line ends. Rows are buffered and written in one
/// shot so emission order is deterministic.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

    std::size_t rows() const { return nrows_; }
    const std::string& text() const { return buf_; }
    void write(const std::string& path) const;

    static std::string format(double x);

private:
    std::string buf_;
    std::size_t ncols_ = 0;
    std::size_t nrows_ = 0;
};

/// Nodal export: columns x, y, value; one row per node in row-major order.
void write_grid_csv(const GridFunction& u, const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace kdp
