#include "kdp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kdp {

CsvWriter::CsvWriter(std::vector<std::string> columns) : ncols_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += columns[i];
    }
    buf_ += '\n';
}

std::string CsvWriter::format(double x) {
    char tmp[40];
    std::snprintf(tmp, sizeof(tmp), "%.17g", x);
    return tmp;
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format(values[i]);
    }
    buf_ += '\n';
    ++nrows_;
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != ncols_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
    ++nrows_;
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, buf_); }

void write_grid_csv(const GridFunction& u, const std::string& path) {
    CsvWriter csv({"x", "y", "value"});
    const Mesh& m = u.mesh();
    for (int n = 0; n < m.n_nodes(); ++n)
        csv.row({m.node_x(n), m.node_y(n), u[n]});
    csv.write(path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace kdp
