#include "marl/harness/csv.hpp"

#include <charconv>

#include "marl/common/errors.hpp"

namespace marl::harness {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& header) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::out | std::ios::trunc);
  if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
  out_ << header << '\n' << std::flush;
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n' << std::flush;
  if (!out_) throw ConfigError("write to " + path_.string() + " failed");
}

}  // namespace marl::harness
