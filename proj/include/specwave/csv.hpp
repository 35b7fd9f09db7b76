#pragma once

#include <complex>
#include <string>
#include <vector>

namespace specwave {

// CSV with a fixed header row; floating values printed with 17 significant
// digits so files round-trip exactly and repeated runs byte-compare.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& begin_row();
  CsvWriter& add(double v);
  CsvWriter& add(int v);
  CsvWriter& add(const std::string& v);
  CsvWriter& add(std::complex<double> v);  // two columns: re, im

  void write(const std::string& path) const;
  std::string body() const;

  static std::string format_double(double v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace specwave
