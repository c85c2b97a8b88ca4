#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace chiraldecay::cli {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> columns)
    : path_(std::move(path)), columns_(columns.size()) {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::logic_error("CsvWriter: row width does not match the header");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_g17(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path_.string());
  out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  closed_ = true;
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

}  // namespace chiraldecay::cli
