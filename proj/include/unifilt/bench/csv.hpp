#ifndef UNIFILT_BENCH_CSV_HPP
#define UNIFILT_BENCH_CSV_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace unifilt::bench {

// CSV dialect: comma separators, one header row, LF line endings, reals with
// 17 significant digits so doubles round-trip exactly and files are
// byte-stable across runs.

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace unifilt::bench

#endif  // UNIFILT_BENCH_CSV_HPP
