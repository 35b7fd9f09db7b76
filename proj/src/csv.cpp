#include "specwave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "specwave/errors.hpp"

namespace specwave {

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

CsvWriter& CsvWriter::begin_row() {
  rows_.emplace_back();
  return *this;
}

CsvWriter& CsvWriter::add(double v) {
  rows_.back().push_back(format_double(v));
  return *this;
}

CsvWriter& CsvWriter::add(int v) {
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::add(const std::string& v) {
  rows_.back().push_back(v);
  return *this;
}

CsvWriter& CsvWriter::add(std::complex<double> v) {
  add(v.real());
  add(v.imag());
  return *this;
}

std::string CsvWriter::format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::body() const {
  std::ostringstream os;
  for (size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << body();
}

}  // namespace specwave
