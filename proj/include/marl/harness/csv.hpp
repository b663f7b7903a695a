#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace marl::harness {

// Shortest round-trippable decimal text for a double.
std::string format_double(double v);

// Append-only CSV file. The header is written on open; every row is flushed
// so that an aborted run keeps what it logged.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header);

  void write_row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace marl::harness
