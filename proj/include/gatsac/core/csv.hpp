#pragma once

#include <string>
#include <vector>

namespace gatsac {

std::string format_double(double v);
// Exact round-trip formatting (max_digits10) for configs and manifests.
std::string format_double_exact(double v);

// Minimal CSV writer: numeric/plain-token cells, header row first.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  void flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  void* out_;  // std::ofstream, kept out of the header
};

// In-memory CSV used by the harness to re-read its own artifacts.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static CsvTable read(const std::string& path);
  int column(const std::string& name) const;  // -1 if absent
  double number(std::size_t row, const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;
};

}  // namespace gatsac
