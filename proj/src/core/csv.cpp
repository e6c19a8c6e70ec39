#include "gatsac/core/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gatsac/core/error.hpp"

namespace gatsac {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string format_double_exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path) {
  auto* out = new std::ofstream(path);
  out_ = out;
  if (!*out) {
    delete out;
    out_ = nullptr;
    throw IoError("cannot open for writing: " + path);
  }
  row(header);
}

CsvWriter::~CsvWriter() { delete static_cast<std::ofstream*>(out_); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  auto& out = *static_cast<std::ofstream*>(out_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void CsvWriter::flush() { static_cast<std::ofstream*>(out_)->flush(); }

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (first) {
      t.header = cells;
      first = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return std::strtod(cell(row, name).c_str(), nullptr);
}

const std::string& CsvTable::cell(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw IoError("csv column missing: " + name);
  return rows.at(row).at(static_cast<std::size_t>(c));
}

}  // namespace gatsac
