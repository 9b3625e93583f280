#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bgc {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Decimal text with 17 significant digits; identical input gives identical bytes.
std::string format_number(double x);

void write_table(const Table& table, std::ostream& os);

/// Writes header plus rows; throws std::runtime_error carrying the OS message
/// when the file cannot be written.
void export_table(const Table& table, const std::string& path);

} // namespace bgc
