#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chiraldecay::cli {

// Deterministic CSV: fixed header, every value rendered with %.17g, LF line
// endings. Identical inputs give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void close();
  ~CsvWriter();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  size_t columns_;
  bool closed_ = false;
};

std::string format_g17(double v);

}  // namespace chiraldecay::cli
