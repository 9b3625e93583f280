#include "bgc/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bgc {

std::string format_number(double x)
{
    if (x == 0.0) return "0";  // also folds -0
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_table(const Table& table, std::ostream& os)
{
    for (std::size_t k = 0; k < table.header.size(); ++k) os << (k ? "," : "") << table.header[k];
    os << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("table row width does not match header");
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_number(row[k]);
        os << '\n';
    }
}

void export_table(const Table& table, const std::string& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error(path + ": " + std::strerror(errno));
    write_table(table, os);
    os.flush();
    if (!os) throw std::runtime_error(path + ": " + std::strerror(errno));
}

} // namespace bgc
