#include "latentforge/csv.hpp"

#include "latentforge/errors.hpp"

#include <cstdio>
#include <sstream>

namespace latentforge {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw LoadFailure("cannot open csv for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::sep() {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
}

std::string CsvWriter::format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::field(double v) {
    sep();
    out_ << format_double(v);
}

void CsvWriter::field(std::size_t v) {
    sep();
    out_ << v;
}

void CsvWriter::field(const std::string& v) {
    sep();
    out_ << v;
}

void CsvWriter::end_row() { out_ << '\n'; }

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == name) return data[c];
    throw LoadFailure("csv: no such column: " + name);
}

bool CsvTable::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadFailure("cannot open csv: " + path.string());

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw LoadFailure("empty csv: " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
    }
    table.data.resize(table.columns.size());

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= table.columns.size())
                throw LoadFailure("csv row wider than header: " + path.string());
            table.data[c++].push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (c != table.columns.size())
            throw LoadFailure("csv row narrower than header: " + path.string());
    }
    return table;
}

} // namespace latentforge
