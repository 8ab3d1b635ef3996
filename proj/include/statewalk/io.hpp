#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace statewalk {

// Shortest-roundtrip decimal for a double; the one float format every output
// file uses, so identical runs produce identical bytes.
std::string format_double(double v);

// Minimal CSV writer. Rows are flushed as they come; numeric cells go through
// format_double.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& values);

    const std::filesystem::path& path() const { return path_; }
    std::size_t column_count() const { return n_columns_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t n_columns_;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace statewalk
