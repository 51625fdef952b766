#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace ammbp::csv {

// Shortest decimal text that parses back to the same double.
std::string format(double v);

class Writer {
 public:
  // Throws std::runtime_error if the file cannot be opened.
  Writer(const std::string& path, const std::vector<std::string>& header);

  Writer& cell(double v);
  Writer& cell(long v);
  Writer& cell(const std::string& v);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace ammbp::csv
