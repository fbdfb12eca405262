#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace latentforge {

// Minimal CSV emission with deterministic number formatting (%.17g round-trips
// doubles exactly, so re-running a command reproduces files byte for byte).
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void begin_row();
    void field(double v);
    void field(std::size_t v);
    void field(const std::string& v);
    void end_row();

    static std::string format_double(double v);

private:
    std::ofstream out_;
    bool first_in_row_ = true;
    void sep();
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data; // data[c][r], parsed as doubles

    std::size_t rows() const { return columns.empty() ? 0 : data.front().size(); }
    const std::vector<double>& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace latentforge
